"""Star product, star inverse, and the conjugation bracket."""

import numpy as np
import pytest

from algpois import duals as dm
from algpois import liealg as la
from algpois import stargroup as sg
from algpois.actions import catalog
from algpois.algebroid import Section, constant_section, second_bracket
from algpois.errors import NotInvertible, OutOfDomain


SL2 = la.algebra("sl2")
PROJ = catalog("sl2-projective")


def rng(s=0):
    return np.random.default_rng(s)


def trig_section(alg, amps, label="trig"):
    amps = np.asarray(amps, float)

    def fn(z):
        u = z[0]
        out = []
        for k in range(alg.r):
            out.append(amps[k, 0] * dm.sin(u) + amps[k, 1] * dm.cos(u)
                       + amps[k, 2] * dm.sin(2.0 * u) * 0.5)
        return out

    return Section(alg, fn, label)


def sample_points(action, n, seed=0):
    return action.sample(rng(seed), n)


# -- star product -------------------------------------------------------------

def test_unit_law_exact():
    x = trig_section(SL2, rng(1).uniform(-0.5, 0.5, (3, 3)))
    g = sg.exp_section(x, PROJ, 0.3)
    assert sg.unit_law_residual(g, sample_points(PROJ, 10)) == 0.0


def test_constant_sections_multiply():
    g0 = la.random_group_element(SL2, rng(2), 0.3)
    h0 = la.random_group_element(SL2, rng(3), 0.3)
    g = sg.GroupSection(PROJ, lambda z: g0, "g0")
    h = sg.GroupSection(PROJ, lambda z: h0, "h0")
    prod = sg.star_product(g, h)
    for s in sample_points(PROJ, 5):
        assert np.allclose(dm.real_mat(prod(s)), g0 @ h0, atol=1e-14)


def test_associativity_sl2_trig():
    r = rng(4)
    secs = [trig_section(SL2, r.uniform(-0.4, 0.4, (3, 3))) for _ in range(3)]
    g, h, f = (sg.exp_section(s, PROJ, 0.15) for s in secs)
    res = sg.associativity_residual(g, h, f, sample_points(PROJ, 30))
    assert res < 1e-10


def test_action_property():
    r = rng(5)
    secs = [trig_section(SL2, r.uniform(-0.4, 0.4, (3, 3))) for _ in range(2)]
    g, h = (sg.exp_section(s, PROJ, 0.15) for s in secs)
    assert sg.action_property_residual(g, h, sample_points(PROJ, 20)) < 1e-10


def test_group_constraints_preserved():
    x = trig_section(SL2, rng(6).uniform(-0.5, 0.5, (3, 3)))
    g = sg.exp_section(x, PROJ, 0.2)
    assert g.constraint_residual(sample_points(PROJ, 10)) < 1e-10


# -- star inverse ---------------------------------------------------------------

def test_star_inverse_of_unit():
    e = sg.unit_section(PROJ)
    einv = sg.star_inverse(e)
    for s in sample_points(PROJ, 5):
        assert np.allclose(dm.real_mat(einv(s)), np.eye(2), atol=1e-12)


def test_star_inverse_constant_section():
    g0 = la.random_group_element(SL2, rng(7), 0.1)
    g = sg.GroupSection(PROJ, lambda z: g0, "g0")
    ginv = sg.star_inverse(g)
    for s in sample_points(PROJ, 5):
        assert np.allclose(dm.real_mat(ginv(s)), np.linalg.inv(g0), atol=1e-10)


def test_star_inverse_small_section_residual():
    x = trig_section(SL2, rng(8).uniform(-0.05, 0.05, (3, 3)))
    g = sg.exp_section(x, PROJ, 1.0)
    assert sg.inverse_residual(g, sample_points(PROJ, 10)) < 1e-9


def test_star_inverse_far_section_rejected():
    x = constant_section(SL2, [2.0, 0.0, 0.0])
    g = sg.exp_section(x, PROJ, 1.0)
    with pytest.raises(NotInvertible):
        sg.star_inverse(g)


# -- conjugation bracket ----------------------------------------------------------

def test_bracket_translation_closed_form():
    tr = catalog("translation-1")
    alg = tr.alg
    x = Section(alg, lambda z: [0.3 + z[0] + 0.5 * z[0] ** 2], "x")
    y = Section(alg, lambda z: [-0.2 + 2.0 * z[0]], "y")
    pts = np.linspace(-1.0, 1.0, 7).reshape(-1, 1)
    res = sg.conjugation_bracket_residual(tr, x, y, 1e-3, pts)
    assert res < 5e-4
    # spot check against the closed form -(x y_t - y x_t)
    approx = sg.bracket_from_conjugation(tr, x, y, 1e-3)
    t = 0.4
    xv, yv = 0.3 + t + 0.5 * t * t, -0.2 + 2 * t
    xt, yt = 1 + t, 2.0
    assert approx.coeffs([t])[0] == pytest.approx(-(xv * yt - yv * xt), abs=5e-4)


def test_bracket_trivial_action_is_matrix_commutator():
    triv = catalog("sl2-trivial")
    r = rng(9)
    x = trig_section(SL2, r.uniform(-0.6, 0.6, (3, 3)))
    y = trig_section(SL2, r.uniform(-0.6, 0.6, (3, 3)))
    approx = sg.bracket_from_conjugation(triv, x, y, 1e-3)
    for s in (-0.5, 0.2, 1.0):
        com = SL2.bracket_coeffs(dm.real_vec(x.coeffs([s])), dm.real_vec(y.coeffs([s])))
        got = np.asarray(approx.coeffs([s]), float)
        assert np.max(np.abs(got - com)) < 1e-3


def test_bracket_sl2_projective_vs_second_bracket():
    r = rng(10)
    x = trig_section(SL2, r.uniform(-0.5, 0.5, (3, 3)))
    y = trig_section(SL2, r.uniform(-0.5, 0.5, (3, 3)))
    pts = sample_points(PROJ, 20)
    res = sg.conjugation_bracket_residual(PROJ, x, y, 1e-3, pts)
    assert res < 1e-3


def test_bracket_right_action_vs_right_second_bracket():
    right = catalog("sl2-projective-right")
    r = rng(11)
    x = trig_section(SL2, r.uniform(-0.4, 0.4, (3, 3)))
    y = trig_section(SL2, r.uniform(-0.4, 0.4, (3, 3)))
    pts = sample_points(right, 10)
    res = sg.conjugation_bracket_residual(right, x, y, 1e-3, pts)
    assert res < 1e-3


def test_bracket_convergence_order():
    # raw stencil error drops ~4x when eps halves
    r = rng(12)
    x = trig_section(SL2, r.uniform(-0.5, 0.5, (3, 3)))
    y = trig_section(SL2, r.uniform(-0.5, 0.5, (3, 3)))
    exact = second_bracket(PROJ, x, y)
    s = [0.4]

    def raw_err(eps):
        st = sg.conjugation_stencil(PROJ, x, y, eps, s)
        got = np.asarray(SL2._pinv @ st.ravel(), float)
        ref = -dm.real_vec(exact.coeffs(s))
        return np.max(np.abs(got - ref))

    e1, e2 = raw_err(4e-3), raw_err(2e-3)
    assert 2.5 < e1 / e2 < 6.0


def test_bracket_eps_bounds():
    x = constant_section(SL2, [0.1, 0, 0])
    with pytest.raises(OutOfDomain):
        sg.bracket_from_conjugation(PROJ, x, x, 0.5)
