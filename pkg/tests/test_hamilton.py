"""Flows, conservation, invariant freezing, moving frames, frame reduction."""

import numpy as np
import pytest

from algpois import duals as dm
from algpois import hamilton as hm
from algpois import poisson as ps
from algpois.actions import catalog
from algpois.errors import (
    DomainExit, NonFinite, NotFreeRegular, NotInvariant, UnsupportedShape,
)


def rng(s=0):
    return np.random.default_rng(s)


# -- Trajectory ---------------------------------------------------------------

def test_trajectory_rejects_nonincreasing_times():
    with pytest.raises(NonFinite):
        hm.Trajectory(np.array([0.0, 0.0, 1.0]), np.zeros((3, 2)))


def test_trajectory_rejects_nan():
    with pytest.raises(NonFinite):
        hm.Trajectory(np.array([0.0, 1.0]), np.array([[0.0], [np.nan]]))


# -- flow ---------------------------------------------------------------------

def test_flow_harmonic_circle():
    P = ps.assemble(catalog("translation-1"))
    traj = hm.flow(P, hm.preset("harmonic"), [1.0, 0.0], 2 * np.pi, 1e-3)
    assert np.max(np.abs(traj.final - [1.0, 0.0])) < 1e-6


def test_flow_constant_hamiltonian_is_stationary():
    P = ps.assemble(catalog("sl2-projective"))
    traj = hm.flow(P, lambda z, xi: 3.0, [0.5, 1, 2, 3], 1.0, 1e-2)
    assert np.allclose(traj.states, traj.states[0])


def test_flow_so3_orbit_conserves_h():
    P = ps.assemble(catalog("so3-mobius"))
    H = hm.preset("so3-orbit")
    traj = hm.flow(P, H, [1, 1, 1, 1, 1], 2.0, 1e-2)
    assert hm.conserved_monitor(traj, H) < 1e-4
    fine = hm.flow(P, H, [1, 1, 1, 1, 1], 2.0, 1e-3)
    assert hm.conserved_monitor(fine, H) < 1e-8


def test_flow_domain_exit():
    P = ps.assemble(catalog("sl2-tangent"))
    H = lambda z, xi: -xi[0]          # pushes v to zero exponentially
    with pytest.raises(DomainExit):
        hm.flow(P, H, [0.5, 1.0, 0, 0, 0], 3.0, 1e-2)


@pytest.mark.filterwarnings("ignore:overflow", "ignore:invalid value")
def test_flow_nonfinite():
    P = ps.assemble(catalog("translation-1"))
    H = lambda z, xi: z[0] ** 2 * xi[0]     # z' = z^2 blows up in finite time
    with pytest.raises((NonFinite, OverflowError)):
        hm.flow(P, H, [1.0, 0.0], 2.0, 1e-2)


def test_flow_rejects_bad_dt():
    P = ps.assemble(catalog("translation-1"))
    with pytest.raises(NonFinite):
        hm.flow(P, hm.preset("harmonic"), [1.0, 0.0], 1.0, 0.0)


def test_lie_poisson_only_flow():
    P = ps.lie_poisson_structure(catalog("so3-mobius").alg)
    H = hm.preset("so3-xi-quadratic")
    traj = hm.flow(P, H, [1, 1, 1], 2.0, 1e-3)
    assert hm.conserved_monitor(traj, H) < 1e-9


def test_lie_poisson_flow_cubic_variant():
    # both quadratic and cubic comparison Hamiltonians are catalogued
    P = ps.lie_poisson_structure(catalog("so3-mobius").alg)
    H = hm.preset("so3-xi-cubic")
    traj = hm.flow(P, H, [1, 1, 1], 1.0, 1e-3)
    assert hm.conserved_monitor(traj, H) < 1e-9
    assert np.max(np.abs(traj.final - traj.states[0])) > 1e-3


# -- conserved_monitor / order --------------------------------------------------

def test_conserved_monitor_constant_function():
    P = ps.assemble(catalog("translation-1"))
    traj = hm.flow(P, hm.preset("harmonic"), [1.0, 0.0], 1.0, 1e-2)
    assert hm.conserved_monitor(traj, lambda z, xi: 42.0) == 0.0


def test_rk4_order_ratio_so3():
    P = ps.assemble(catalog("so3-mobius"))
    ratio = hm.rk4_order_ratio(P, hm.preset("so3-orbit"), [1, 1, 1, 1, 1], 1.0, 2e-2)
    assert 12.0 < ratio < 20.0


def test_rk4_order_ratio_frame_structure():
    P = ps.assemble(catalog("sl2-prolonged"))
    ratio = hm.rk4_order_ratio(P, hm.preset("sl2-frame-six"),
                               [1, 1, 1, 1, 1, 1], 0.5, 2e-2)
    assert 12.0 < ratio < 20.0


# -- xi freezing ---------------------------------------------------------------

def test_kappa2_is_invariant_and_freezes_xi():
    tang = catalog("sl2-tangent")
    res = hm.invariance_residual(tang, hm.preset("kappa2"), rng(1))
    assert res < 1e-8
    freeze = hm.xi_freeze_check(tang, hm.preset("kappa2"),
                                init=[0.5, 1.0, 0.4, 0.3, -0.2], t_end=2.0)
    assert freeze < 1e-8


def test_kappa1_printed_reported_not_invariant():
    tang = catalog("sl2-tangent")
    with pytest.raises(NotInvariant):
        hm.xi_freeze_check(tang, hm.preset("kappa1-printed"))


def test_sl2_casimir_freezes_xi_with_motion():
    # positive-Casimir data keeps the projective coordinate bounded
    tang = catalog("sl2-tangent")
    H = hm.preset("sl2-casimir")
    freeze = hm.xi_freeze_check(tang, H, init=[0.0, 1.0, 0.5, 0.2, 0.2],
                                t_end=2.0, dt=1e-2)
    assert freeze < 1e-8
    # and the z-part genuinely moves
    P = ps.assemble(tang)
    traj = hm.flow(P, H, [0.0, 1.0, 0.5, 0.2, 0.2], 1.0, 1e-2)
    assert np.max(np.abs(traj.final[:2] - traj.states[0][:2])) > 1e-3
    assert np.max(np.abs(traj.final[2:] - traj.states[0][2:])) < 1e-10


def test_composite_invariant_freezes():
    tang = catalog("sl2-tangent")
    k2 = hm.preset("kappa2")
    cas = hm.preset("sl2-casimir")
    H = lambda z, xi: cas(z, xi) + 0.5 * k2(z, xi) ** 2
    freeze = hm.xi_freeze_check(tang, H, init=[0.2, 1.0, 0.5, 0.2, 0.2], t_end=2.0)
    assert freeze < 1e-8


def test_noninvariant_negative_control():
    proj = catalog("sl2-projective")
    with pytest.raises(NotInvariant):
        hm.xi_freeze_check(proj, lambda z, xi: xi[0])


# -- moving frame ---------------------------------------------------------------

def test_closed_frame_at_ones():
    fr = hm.moving_frame(catalog("sl2-prolonged"), [0, 1, 0])
    sig = fr.sigma([1.0, 1.0, 1.0])
    assert np.allclose(sig, [[1.0, -1.0], [0.5, 0.5]], atol=1e-14)
    assert np.linalg.det(sig) == pytest.approx(1.0)


def test_frame_on_cross_section_is_identity():
    fr = hm.moving_frame(catalog("sl2-prolonged"), [0, 1, 0], method="newton")
    sig = fr.sigma([0.0, 1.0, 0.0])
    assert np.allclose(sig, np.eye(2), atol=1e-10)


def test_newton_frame_matches_closed_form():
    a3 = catalog("sl2-prolonged")
    closed = hm.moving_frame(a3, [0, 1, 0], method="closed")
    newton = hm.moving_frame(a3, [0, 1, 0], method="newton")
    r = rng(2)
    for _ in range(8):
        z = a3.sample(r)[0]
        assert np.max(np.abs(newton.sigma(list(z)) - closed.sigma(list(z)))) < 1e-10


def test_frame_normalizes():
    fr = hm.moving_frame(catalog("sl2-prolonged"), [0, 1, 0])
    r = rng(3)
    for _ in range(5):
        z = catalog("sl2-prolonged").sample(r)[0]
        assert np.allclose(fr.normalized_invariants(list(z)), [0, 1, 0], atol=1e-12)


def test_frame_equivariance():
    a3 = catalog("sl2-prolonged")
    fr = hm.moving_frame(a3, [0, 1, 0])
    r = rng(4)
    for _ in range(5):
        g = a3.random_group(r, 0.3)
        z = [0.5, 1.2, 0.3]
        gz = dm.real_vec(a3.act(g, z))
        if gz[1] <= 0:
            continue
        assert fr.equivariance_residual(g, z) < 1e-8


def test_closed_frame_requires_positive_uv():
    fr = hm.moving_frame(catalog("sl2-prolonged"), [0, 1, 0], method="closed")
    with pytest.raises(NotFreeRegular):
        fr.sigma([0.5, -1.0, 0.0])


def test_moving_frame_unknown_closed_form():
    with pytest.raises(UnsupportedShape):
        hm.moving_frame(catalog("se2-linear"), [0, 0], method="closed")


# -- frame flow ----------------------------------------------------------------

def test_frame_flow_sigma_frozen_when_h_xi_independent():
    a3 = catalog("sl2-prolonged")
    H = lambda z, xi: z[0] ** 2 + z[1]
    fr = hm.moving_frame(a3, [0, 1, 0])
    sig0 = fr.sigma([1.0, 1.0, 1.0])
    traj = hm.frame_flow(a3, H, [0, 1, 0], sig0, [1, 1, 1], 0.5, 1e-2)
    assert np.allclose(traj.states[-1][:4], sig0.ravel(), atol=1e-12)


def test_frame_flow_matches_full_flow():
    a3 = catalog("sl2-prolonged")
    H = hm.preset("sl2-frame-six")
    P = ps.assemble(a3)
    z0, xi0 = [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]
    full = hm.flow(P, H, z0 + xi0, 1.0, 2e-3)
    fr = hm.moving_frame(a3, [0, 1, 0])
    ftraj = hm.frame_flow(a3, H, [0, 1, 0], fr.sigma(z0), xi0, 1.0, 2e-3)
    dev = 0.0
    for wf, wr in zip(full.states[::50], ftraj.states[::50]):
        zr = hm.frame_state_to_z(a3, [0, 1, 0], wr)
        dev = max(dev, np.max(np.abs(zr - wf[:3])))
    assert dev < 1e-5
    # u(t) recovered from the frame matrix as -sigma_b / sigma_a
    sig_end = ftraj.states[-1][:4]
    assert -sig_end[1] / sig_end[0] == pytest.approx(full.final[0], abs=1e-6)


def test_frame_flow_det_drift():
    a3 = catalog("sl2-prolonged")
    H = hm.preset("sl2-frame-six")
    fr = hm.moving_frame(a3, [0, 1, 0])
    traj = hm.frame_flow(a3, H, [0, 1, 0], fr.sigma([0.0, 1.0, 0.0]),
                         [0.0, 0.1, -0.1], 5.0, 2e-3)
    dets = np.array([np.linalg.det(w[:4].reshape(2, 2)) for w in traj.states])
    assert np.max(np.abs(dets - 1.0)) < 1e-9


def test_normalized_invariants_constant_along_full_flow():
    jet4 = catalog("sl2-prolonged-3")
    P4 = ps.assemble(jet4)
    H4 = lambda z, xi: (0.2 * (z[0] ** 2 + z[1] ** 2 + z[2] ** 2)
                        + xi[0] ** 2 + xi[1] ** 2 + xi[2] ** 2)
    traj = hm.flow(P4, H4, [0, 1, 0, 0.3, 0.0, 0.1, -0.1], 2.0, 1e-3)
    closed = hm.moving_frame(catalog("sl2-prolonged"), [0, 1, 0])
    I = []
    for w in traj.states[::100]:
        sig = closed.sigma(w[:3])
        I.append(dm.real_vec(jet4.act(sig, list(w[:4])))[3])
    I = np.array(I)
    assert np.max(np.abs(I - I[0])) < 1e-6


# -- presets --------------------------------------------------------------------

def test_preset_unknown():
    with pytest.raises(UnsupportedShape):
        hm.preset("nope")
