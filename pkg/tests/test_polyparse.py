"""Expression parser corpus."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algpois import duals as dm
from algpois.errors import ConfigError
from algpois.polyparse import parse_hamiltonian, parse_section_coeffs


CASES = [
    ("3", [], [], 3.0),
    ("1 + 2*3", [], [], 7.0),
    ("2^3^2", [], [], 512.0),              # right-associative
    ("-z1^2", [2.0], [], -4.0),             # unary minus binds outside the power
    ("(1+2)*(3-5)", [], [], -6.0),
    ("1/4 + 3/4", [], [], 1.0),
    ("z1*xi2 - xi1", [2.0], [0.5, 3.0], 5.5),
    ("0.5*(z1^2 + z2^2)", [1.0, 3.0], [], 5.0),
    ("xi1^2 + 4*xi2*xi3", [], [1.0, 2.0, 3.0], 25.0),
    ("(z1^2*xi2 - z1*xi1 - xi3)/z2", [2.0, 4.0], [1.0, 1.0, 1.0], 0.25),
    ("2*xi1^2 - xi2^2 + 3*xi3^2", [], [1.0, 1.0, 1.0], 4.0),
    ("--z1", [5.0], [], 5.0),
    ("+z1 - -1", [5.0], [], 6.0),
]


@pytest.mark.parametrize("text,z,xi,expect", CASES)
def test_corpus(text, z, xi, expect):
    H, _, _ = parse_hamiltonian(text)
    assert H(z, xi) == pytest.approx(expect, rel=1e-12)


def test_variable_counts():
    _, n_z, n_xi = parse_hamiltonian("z3 + xi2*z1")
    assert (n_z, n_xi) == (3, 2)


def test_dual_evaluation_gradients():
    H, _, _ = parse_hamiltonian("z1^2*xi1 + 3*z1")
    g = dm.gradient(lambda w: H(w[:1], w[1:]), [2.0, 5.0])
    assert np.allclose(g, [2 * 2 * 5 + 3, 4.0])


@pytest.mark.parametrize("bad", [
    "z1 +", "1 ++* 2", "(1+2", "z0", "xi", "q7", "z1^z2", "z1^(-2)",
    "1 @ 2", "z1 z2",
])
def test_rejects_malformed(bad):
    with pytest.raises(ConfigError):
        parse_hamiltonian(bad)


def test_section_coeffs():
    coeffs = parse_section_coeffs(["z1^2", "1 - z1", "3"])
    assert np.allclose(coeffs([2.0]), [4.0, -1.0, 3.0])


def test_section_coeffs_reject_xi():
    with pytest.raises(ConfigError):
        parse_section_coeffs(["xi1"])


@settings(max_examples=100, deadline=None)
@given(a=st.integers(-9, 9), b=st.integers(-9, 9), c=st.integers(1, 9),
       e=st.integers(0, 4))
def test_random_polynomials_match_python(a, b, c, e):
    text = f"{a}*z1^{e} + {b}/{c}*xi1"
    H, _, _ = parse_hamiltonian(text)
    z0, xi0 = 1.7, -0.6
    assert H([z0], [xi0]) == pytest.approx(a * z0 ** e + b / c * xi0, rel=1e-12)
