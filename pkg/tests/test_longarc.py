import math

import numpy as np
import pytest

from sublorentz.conegeom import SegmentCone
from sublorentz.existence import check_case
from sublorentz.liealg3 import SubLorentzCase
from sublorentz.longarc import (
    LORENTZIAN,
    AntiNorm,
    ControlCurve,
    build_cover_structure,
    build_structure,
    distance_upper_bound,
    integrate,
    length,
    maximize,
    sl2_cover_frame,
    su2_unbounded_witness,
    target_from_exp2,
)
from sublorentz.sl2cover import CoverElement

HEIS = SubLorentzCase("1", kappa=0.0)
SU2 = SubLorentzCase("9", kappa=0.0, chi=-1.0)
SL2 = SubLorentzCase("10", kappa=-2.0, chi=-1.0)


def constant_curve(structure, u, n=16, total=1.0) -> ControlCurve:
    return ControlCurve(total / n, np.tile(np.asarray(u, dtype=float), (n, 1)), structure)


# -- integration ------------------------------------------------------------------

def test_heisenberg_constant_control_is_one_parameter_subgroup():
    st = build_structure(HEIS)
    for total in (1.0, 2.5):
        curve = constant_curve(st, (1.0, 0.0, 0.0), n=32, total=total)
        end = integrate(curve).endpoint
        direct = st.model.exp(np.array([1.0, 0.0, 0.0]), total)
        assert np.allclose(st.model.coords(end), st.model.coords(direct), atol=1e-12)


def test_su2_constant_control_closes_after_one_period():
    st = build_structure(SU2)
    period = st.model.loop_period()
    curve = constant_curve(st, (1.0, 0.0, 0.0), n=64, total=period)
    end = integrate(curve).endpoint
    assert np.linalg.norm(st.model.coords(end) - st.model.coords(st.model.identity())) <= 1e-12


def test_cover_pure_rotation_matches_multiply_iteration():
    st = build_cover_structure(eta=1.0)
    xi, total, n = 0.8, 1.5, 24
    curve = constant_curve(st, (xi, 0.0, 0.0), n=n, total=total)
    end = integrate(curve).endpoint
    assert np.isclose(end.c, xi * total, atol=1e-12) and abs(end.w) <= 1e-12
    acc = st.model.identity()
    for _ in range(n):
        acc = st.model.multiply(acc, CoverElement(xi * total / n, 0))
    assert np.isclose(end.c, acc.c, atol=1e-12)


def test_integrate_rejects_bad_controls():
    st = build_structure(HEIS)
    with pytest.raises(ValueError, match="outside"):
        integrate(ControlCurve(0.1, [[1.0, 2.0, 0.0]], st))
    with pytest.raises(ValueError, match="outside"):
        integrate(ControlCurve(0.1, [[1.0, 0.0, 0.5]], st))
    with pytest.raises(ValueError, match="zero"):
        integrate(ControlCurve(0.1, [[0.0, 0.0, 0.0]], st))


def test_trajectory_samples_every_step():
    st = build_structure(HEIS)
    res = integrate(constant_curve(st, (1.0, 0.2, 0.0), n=10))
    assert res.trajectory.shape == (11, 3)
    assert np.allclose(res.trajectory[0], st.model.coords(st.model.identity()))


# -- length -----------------------------------------------------------------------

def test_length_of_unit_timelike_control():
    st = build_structure(HEIS)
    assert np.isclose(length(constant_curve(st, (1, 0, 0), total=2.0)), 2.0)


def test_length_vanishes_on_null_boundary_controls():
    st = build_structure(HEIS)
    curve = constant_curve(st, (1.0, 1.0, 0.0))
    assert length(curve) == 0.0


def test_reparametrization_invariance():
    st = build_structure(HEIS)
    rng = np.random.default_rng(4)
    controls = np.column_stack([rng.uniform(0.5, 1.5, 12),
                                rng.uniform(-0.4, 0.4, 12),
                                np.zeros(12)])
    controls[:, 1] *= controls[:, 0]
    base = ControlCurve(0.1, controls, st)
    lam = 3.7
    scaled = ControlCurve(0.1 / lam, lam * controls, st)
    assert np.allclose(st.model.coords(integrate(base).endpoint),
                       st.model.coords(integrate(scaled).endpoint), atol=1e-10)
    assert abs(length(base) - length(scaled)) <= 1e-10


def test_exact_models_are_insensitive_to_step_refinement():
    # exponential steps: repeating each control on a halved step is exact
    for case in (HEIS, SU2):
        st = build_structure(case)
        controls = np.array([[1.0, 0.3, 0.0], [0.8, -0.5, 0.0], [1.2, 0.0, 0.0]])
        coarse = ControlCurve(0.25, controls, st)
        fine = ControlCurve(0.125, np.repeat(controls, 2, axis=0), st)
        a = st.model.coords(integrate(coarse).endpoint)
        b = st.model.coords(integrate(fine).endpoint)
        assert np.allclose(a, b, atol=1e-12)


def test_cover_integrator_is_fourth_order():
    st = build_structure(SL2)
    n = 8
    profile = np.column_stack([
        1.0 + 0.3 * np.sin(2 * np.pi * np.arange(n) / n),
        0.4 * np.cos(2 * np.pi * np.arange(n) / n),
        np.zeros(n),
    ])
    profile[:, 1] *= profile[:, 0] * 0.9

    def endpoint(refine: int) -> np.ndarray:
        controls = np.repeat(profile, refine, axis=0)
        curve = ControlCurve(1.0 / (n * refine), controls, st)
        return st.model.coords(integrate(curve).endpoint)

    ref = endpoint(16)
    e1 = np.linalg.norm(endpoint(1) - ref)
    e2 = np.linalg.norm(endpoint(2) - ref)
    assert e1 / e2 >= 12.0


# -- anti-norms ---------------------------------------------------------------------

def test_anti_norm_homogeneity_and_superadditivity():
    edge = AntiNorm("custom", fn=lambda u: u[0] - abs(u[1]), name="edge")
    rng = np.random.default_rng(9)
    for nu in (LORENTZIAN, edge):
        for _ in range(200):
            r1, r2 = rng.uniform(0.1, 2.0, 2)
            b1, b2 = rng.uniform(-1.0, 1.0, 2)
            v = np.array([r1, r1 * b1, 0.0])
            w = np.array([r2, r2 * b2, 0.0])
            lam = rng.uniform(0.1, 5.0)
            assert abs(nu(lam * v) - lam * nu(v)) <= 1e-10 * max(1.0, nu(v))
            assert nu(v + w) >= nu(v) + nu(w) - 1e-10


# -- calibration bound ----------------------------------------------------------------

def test_distance_upper_bound_heisenberg():
    st = build_structure(HEIS)
    p = np.array([1.0, 0.0, 0.0])
    for total in (1.0, 2.0):
        target = target_from_exp2(st, (total, 0.0, 0.0))
        assert abs(distance_upper_bound(st, target, p) - total) <= 1e-9


def test_distance_upper_bound_tilted_witness_shrinks_null_bound():
    st = build_structure(HEIS)
    target = st.model.exp(np.array([1.0, 1.0, 0.0]), 1.0)
    p = np.array([1.0, -0.99, 0.0])
    assert distance_upper_bound(st, target, p) < 0.1


def test_distance_upper_bound_rejects_bad_witnesses():
    st = build_structure(HEIS)
    target = target_from_exp2(st, (1.0, 0.0, 0.0))
    with pytest.raises(ValueError, match="strictly positive"):
        distance_upper_bound(st, target, np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError, match="annihilate"):
        distance_upper_bound(st, target, np.array([1.0, 0.0, 0.5]))
    st10 = build_structure(SL2)
    with pytest.raises(TypeError, match="solvable"):
        distance_upper_bound(st10, CoverElement(1.0, 0), np.array([1.0, 0.0, 0.0]))


# -- solver -----------------------------------------------------------------------------

def test_maximize_heisenberg_recovers_straight_arc():
    st = build_structure(HEIS)
    target = target_from_exp2(st, (1.0, 0.0, 0.0))
    res = maximize(st, target, n_steps=32, budget=3000, seed=11)
    assert res.found
    bound = distance_upper_bound(st, target, np.array(check_case(HEIS).witness))
    assert 0.98 <= res.length <= bound + 1e-9
    assert res.endpoint_error <= 1e-4
    for u in res.curve.controls:
        assert u[0] > 0 and abs(u[1]) <= u[0]


def test_maximize_null_target_len_near_zero():
    st = build_structure(HEIS)
    target = st.model.exp(np.array([1.0, 1.0, 0.0]), 1.0)
    res = maximize(st, target, n_steps=16, budget=2000, seed=11)
    assert res.found and res.length <= 0.02


def test_maximize_reports_not_found_for_unattainable_target():
    st = build_structure(HEIS)
    # downward drift in the third coordinate cannot be produced by cone controls
    target = (0.0, np.array([-1.0, 0.0]))
    res = maximize(st, target, n_steps=8, budget=600, seed=11)
    assert not res.found


def test_maximize_monotone_in_budget():
    st = build_structure(HEIS)
    target = target_from_exp2(st, (1.0, 0.0, 0.0))
    lengths = [maximize(st, target, n_steps=16, budget=b, seed=3).length
               for b in (400, 1200, 2500)]
    assert all(lengths[i] <= lengths[i + 1] + 1e-12 for i in range(len(lengths) - 1))


def test_maximize_recovers_cover_probe():
    st = build_structure(SL2)
    probe = constant_curve(st, (1.0, 0.3, 0.0), n=24)
    target = integrate(probe).endpoint
    res = maximize(st, target, n_steps=24, budget=3000, seed=5)
    assert res.found
    assert res.length >= 0.98 * length(probe)


def test_solver_respects_subcone_structures():
    narrow = build_structure(HEIS, cone=SegmentCone((1, 0, 0), (0, 1, 0), 0.5))
    target = target_from_exp2(narrow, (1.0, 0.0, 0.0))
    res = maximize(narrow, target, n_steps=8, budget=800, seed=2)
    assert res.found
    for u in res.curve.controls:
        assert abs(u[1]) <= 0.5 * u[0] + 1e-12


# -- unbounded-length loops --------------------------------------------------------------

def test_su2_witness_reaches_demanded_lengths():
    st = build_structure(SU2)
    for demand in (10.0, 100.0):
        curve = su2_unbounded_witness(st, demand)
        assert length(curve) >= demand
        end = integrate(curve).endpoint
        err = np.linalg.norm(st.model.coords(end) - st.model.coords(st.model.identity()))
        assert err <= 1e-8


def test_su2_witness_preserves_base_endpoint():
    st = build_structure(SU2)
    base = constant_curve(st, (1.0, 0.2, 0.0), n=20, total=0.7)
    base_end = st.model.coords(integrate(base).endpoint)
    curve = su2_unbounded_witness(st, 25.0, base_curve=base)
    assert length(curve) >= 25.0
    end = st.model.coords(integrate(curve).endpoint)
    assert np.linalg.norm(end - base_end) <= 1e-8


def test_su2_witness_rejections():
    st = build_structure(SU2)
    with pytest.raises(ValueError, match="positive"):
        su2_unbounded_witness(st, 0.0)
    with pytest.raises(ValueError, match="case 9"):
        su2_unbounded_witness(build_structure(HEIS), 5.0)


# -- plumbing -----------------------------------------------------------------------------

def test_curve_json_shape():
    st = build_structure(HEIS)
    curve = constant_curve(st, (1.0, 0.5, 0.0), n=3)
    data = curve.to_json()
    assert set(data) == {"dt", "controls"}
    assert len(data["controls"]) == 3 and len(data["controls"][0]) == 3


def test_sl2_cover_frame_maps_killing_form_to_normal_form():
    from sublorentz.liealg3 import from_case

    for case in (SL2, SubLorentzCase("2", kappa=1.5), SubLorentzCase("19", kappa=0.3, chi=1.0)):
        alg = from_case(case)
        F = sl2_cover_frame(alg)
        K = alg.killing_form()
        pulled = np.linalg.inv(F).T @ K @ np.linalg.inv(F)
        assert np.allclose(pulled, np.diag([-8.0, 8.0, 8.0]), atol=1e-9)
