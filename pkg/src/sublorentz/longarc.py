"""Desk-scale numerical evidence for the existence verdicts.

Admissible curves are piecewise-constant control curves: a uniform time step
``dt`` and a sequence of identity-frame control vectors, each inside the
structure's cone.  Trajectories are produced by left-translating one-parameter
subgroup steps, on one of three concrete group realizations:

* a simply connected semidirect product R x| R^2 for the solvable rows,
  with exact exponential steps (the angle-like factor coordinate is tracked
  separately so that rotation-type actions do not wrap);
* unit quaternions for the su2 row;
* cover coordinates (c, w) with a classical 4th-order one-step integrator of
  the left-invariant dynamics for the sl2-type rows.

On top of integration the module provides the generalized length functional,
a calibration-based upper bound on lengths into a target (solvable rows with
an existence witness), a multi-start penalty search for near-longest curves,
and the loop construction that exhibits unbounded lengths on the su2 row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import sl2cover
from .conegeom import DEFAULT_CONE, Covector, SegmentCone, SolidCone, contains, dual_contains
from .liealg3 import SL2_CASES, SU2_CASE, LieAlgebra3, SubLorentzCase, from_case
from .sl2cover import CoverElement, TangentVector

DEFAULT_SEED = 1729

ENDPOINT_TOL = 1e-4


# ---------------------------------------------------------------------------
# anti-norms

@dataclass(frozen=True)
class AntiNorm:
    """Nonnegative concave positively 1-homogeneous functional on the cone.

    ``kind="lorentzian"`` evaluates sqrt(x1^2 - x2^2) (the value is only
    meaningful on the planar cone |x2| <= x1); any other concave homogeneous
    choice is supplied as ``kind="custom"`` with an evaluator.
    """

    kind: str = "lorentzian"
    fn: Optional[Callable[[np.ndarray], float]] = None
    name: str = ""

    def __call__(self, u) -> float:
        u = np.asarray(u, dtype=float)
        if self.kind == "lorentzian":
            return math.sqrt(max(u[0] * u[0] - u[1] * u[1], 0.0))
        if self.fn is None:
            raise ValueError("custom anti-norm needs an evaluator")
        return float(self.fn(u))


LORENTZIAN = AntiNorm("lorentzian", name="lorentzian")


# ---------------------------------------------------------------------------
# 2x2 exponential helpers (series with argument doubling; exact enough at 1e-15)

def _exp_and_int(A: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Return (expm(h A), integral_0^h expm(s A) ds) for a 2x2 matrix A."""
    norm = abs(h) * max(1.0, float(np.max(np.abs(A))) * 2.0)
    n_half = 0
    if norm > 0.25:
        n_half = int(math.ceil(math.log2(norm / 0.25)))
    hs = h / (2 ** n_half)
    X = hs * A
    E = np.eye(2)
    S = hs * np.eye(2)
    P = np.eye(2)
    for k in range(1, 19):
        P = P @ X / k
        if float(np.max(np.abs(P))) < 1e-17:
            break
        E = E + P
        S = S + hs * P / (k + 1)
    for _ in range(n_half):
        S = S + E @ S
        E = E @ E
    return E, S


def _expm2(A: np.ndarray) -> np.ndarray:
    return _exp_and_int(A, 1.0)[0]


# ---------------------------------------------------------------------------
# group models

class SemidirectModel:
    """Simply connected group R x| R^2 realizing a solvable case algebra.

    The algebra is split as span{W} + I with I a two-dimensional abelian ideal
    containing the derived subalgebra; ad_W acts on I through the 2x2 matrix
    ``action``.  Elements are pairs (t, q) with product
    (t1, q1)(t2, q2) = (t1 + t2, q1 + expm(t1 action) q2); exponentials of
    algebra vectors are available in closed form, so constant-control steps
    are exact.
    """

    kind = "semidirect"

    def __init__(self, algebra: LieAlgebra3):
        self.algebra = algebra
        ideal = self._abelian_ideal(algebra)
        w_dir = np.cross(ideal[0], ideal[1])
        w_dir = w_dir / np.linalg.norm(w_dir)
        self._frame = np.linalg.inv(np.column_stack([w_dir, ideal[0], ideal[1]]))
        self._frame_inv = np.column_stack([w_dir, ideal[0], ideal[1]])
        cols = []
        for j in range(2):
            img = self._frame @ algebra.bracket(w_dir, ideal[j])
            if abs(img[0]) > 1e-9:
                raise AssertionError("chosen ideal is not ad-invariant")
            cols.append(img[1:])
        self.action = np.column_stack(cols)
        mix = self._frame @ algebra.bracket(ideal[0], ideal[1])
        if float(np.max(np.abs(mix))) > 1e-9:
            raise AssertionError("chosen ideal is not abelian")
        self._exp_cache: dict[tuple, tuple] = {}
        self._trans_cache: dict[float, np.ndarray] = {}

    @staticmethod
    def _abelian_ideal(algebra: LieAlgebra3) -> np.ndarray:
        derived = algebra.derived_subalgebra()
        k = derived.shape[0]
        if k > 2:
            raise ValueError("algebra is not solvable (derived subalgebra is everything)")
        if k == 2:
            return derived
        if k == 0:
            return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        y = derived[0]
        ad_y = algebra.adjoint(y)
        _, s, vt = np.linalg.svd(ad_y)
        null = vt[(s > 1e-10).sum():]
        resid = null - (null @ y)[:, None] * y[None, :]
        z = null[int(np.argmax(np.linalg.norm(resid, axis=1)))]
        z = z - (z @ y) * y
        z = z / np.linalg.norm(z)
        return np.array([y, z])

    def identity(self):
        return (0.0, np.zeros(2))

    def split(self, u) -> tuple[float, np.ndarray]:
        coords = self._frame @ np.asarray(u, dtype=float)
        return float(coords[0]), coords[1:]

    def unsplit(self, a: float, v: np.ndarray) -> np.ndarray:
        return self._frame_inv @ np.array([a, v[0], v[1]])

    def exp(self, u, time: float = 1.0):
        u = np.asarray(u, dtype=float)
        key = (u[0], u[1], u[2], time)
        hit = self._exp_cache.get(key)
        if hit is None:
            a, v = self.split(u)
            _, S = _exp_and_int(a * self.action, time)
            hit = (time * a, S @ v)
            if len(self._exp_cache) > 40000:
                self._exp_cache.clear()
            self._exp_cache[key] = hit
        return (hit[0], hit[1].copy())

    def _translation(self, t: float) -> np.ndarray:
        E = self._trans_cache.get(t)
        if E is None:
            E = _expm2(t * self.action)
            if len(self._trans_cache) > 40000:
                self._trans_cache.clear()
            self._trans_cache[t] = E
        return E

    def multiply(self, x, y):
        return (x[0] + y[0], x[1] + self._translation(x[0]) @ y[1])

    def inverse(self, x):
        return (-x[0], -(self._translation(-x[0]) @ x[1]))

    def log(self, x) -> np.ndarray:
        a = x[0]
        _, S = _exp_and_int(a * self.action, 1.0)
        if abs(np.linalg.det(S)) < 1e-12:
            raise ValueError("logarithm is singular at this element")
        v = np.linalg.solve(S, x[1])
        return self.unsplit(a, v)

    def step(self, x, u, dt: float):
        return self.multiply(x, self.exp(u, dt))

    def coords(self, x) -> np.ndarray:
        return np.array([x[0], x[1][0], x[1][1]])


class QuaternionModel:
    """Unit quaternions realizing the su2 case algebra.

    The case generators map to scaled imaginary units; scaling factors are
    fixed by the case parameters so that commutators reproduce the case
    bracket table exactly.
    """

    kind = "quaternion"

    def __init__(self, case: SubLorentzCase):
        if case.case_id != SU2_CASE:
            raise ValueError("quaternion model applies to case 9 only")
        k, x = case.kappa, case.chi
        self.alpha = math.sqrt(-(k + x)) / 2.0
        self.beta = math.sqrt(k - x) / 2.0
        self.gamma = 2.0 * self.alpha * self.beta
        self.scales = np.array([self.alpha, self.beta, self.gamma])

    def identity(self):
        return np.array([1.0, 0.0, 0.0, 0.0])

    @staticmethod
    def _qmul(q, r):
        w1, x1, y1, z1 = q
        w2, x2, y2, z2 = r
        return np.array([
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ])

    def _pure(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return self.scales * u

    @staticmethod
    def _qexp(v: np.ndarray) -> np.ndarray:
        theta = float(np.linalg.norm(v))
        if theta == 0.0:
            return np.array([1.0, 0.0, 0.0, 0.0])
        return np.concatenate([[math.cos(theta)], math.sin(theta) / theta * v])

    def exp(self, u, time: float = 1.0):
        return self._qexp(time * self._pure(u))

    def multiply(self, x, y):
        return self._qmul(x, y)

    def inverse(self, x):
        return np.array([x[0], -x[1], -x[2], -x[3]])

    def step(self, x, u, dt: float):
        return self._qmul(x, self.exp(u, dt))

    def coords(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float)

    def loop_period(self) -> float:
        """Parameter time after which exp(t X1) returns to the identity."""
        return 2.0 * math.pi / self.alpha


def sl2_cover_frame(algebra: LieAlgebra3) -> np.ndarray:
    """Isomorphism matrix sending case coordinates onto cover coordinates.

    The Killing form of an sl2-type case algebra has one negative and two
    positive directions; rescaling its eigenbasis to Killing norms (-8, 8, 8)
    matches the bracket normalization of the cover algebra up to a discrete
    reflection, which is resolved by checking the bracket table.  The result
    maps (x1, x2, x3) to (xi, Re zeta, Im zeta); the time coordinate is
    oriented so that X1 has nonnegative angle component.
    """
    K = algebra.killing_form()
    evals, evecs = np.linalg.eigh(K)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if not (evals[0] < -1e-10 * scale and evals[1] > 1e-10 * scale):
        raise ValueError("Killing form is not nondegenerate with one negative direction")
    T = evecs[:, 0] * math.sqrt(8.0 / -evals[0])
    S1 = evecs[:, 1] * math.sqrt(8.0 / evals[1])
    S2 = evecs[:, 2] * math.sqrt(8.0 / evals[2])
    eye = np.eye(3)

    def _matches(F: np.ndarray) -> bool:
        for i in range(3):
            for j in range(i + 1, 3):
                va = F @ eye[i]
                vb = F @ eye[j]
                got = sl2cover.algebra_bracket(
                    TangentVector(va[0], complex(va[1], va[2])),
                    TangentVector(vb[0], complex(vb[1], vb[2])),
                )
                want = F @ algebra.bracket(eye[i], eye[j])
                err = max(abs(got.xi - want[0]), abs(got.zeta - complex(want[1], want[2])))
                if err > 1e-8 * max(1.0, float(np.max(np.abs(want)))):
                    return False
        return True

    for flip in (1.0, -1.0):
        F = np.linalg.inv(np.column_stack([T, S1, flip * S2]))
        if _matches(F):
            if (F @ np.array([1.0, 0.0, 0.0]))[0] < 0.0:
                # compose with the time-reversing automorphism (xi, zeta) -> (-xi, conj zeta)
                F = np.diag([-1.0, 1.0, -1.0]) @ F
            if not _matches(F):
                raise AssertionError("orientation flip broke the bracket table")
            return F
    raise AssertionError("no Killing-orthonormal frame matches the bracket table")


class CoverModel:
    """Cover coordinates (c, w) with RK4 steps of the left-invariant dynamics.

    ``frame`` maps identity-frame control coordinates to cover coordinates;
    the identity frame is used for controls given directly as (xi, zeta).
    """

    kind = "cover"

    def __init__(self, frame: Optional[np.ndarray] = None):
        self.frame = np.eye(3) if frame is None else np.asarray(frame, dtype=float)

    def identity(self):
        return sl2cover.IDENTITY

    def multiply(self, x, y):
        return sl2cover.multiply(x, y)

    def inverse(self, x):
        return sl2cover.inverse(x)

    @staticmethod
    def _velocity(state: np.ndarray, u_cov: np.ndarray) -> np.ndarray:
        v = sl2cover.push_forward(
            CoverElement(state[0], complex(state[1], state[2])),
            TangentVector(u_cov[0], complex(u_cov[1], u_cov[2])),
        )
        return np.array([v.xi, v.zeta.real, v.zeta.imag])

    def step(self, x, u, dt: float):
        u_cov = self.frame @ np.asarray(u, dtype=float)
        s = np.array([x.c, x.w.real, x.w.imag])
        k1 = self._velocity(s, u_cov)
        k2 = self._velocity(s + 0.5 * dt * k1, u_cov)
        k3 = self._velocity(s + 0.5 * dt * k2, u_cov)
        k4 = self._velocity(s + dt * k3, u_cov)
        s = s + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return CoverElement(s[0], complex(s[1], s[2]))

    def coords(self, x) -> np.ndarray:
        return np.array([x.c, x.w.real, x.w.imag])


# ---------------------------------------------------------------------------
# structures and curves

@dataclass(frozen=True, eq=False)
class CaseStructure:
    """A case bundled with its cone, anti-norm and concrete group model."""

    case: Optional[SubLorentzCase]
    algebra: Optional[LieAlgebra3]
    cone: SolidCone
    anti_norm: AntiNorm
    model: object


def build_structure(case: SubLorentzCase, anti_norm: AntiNorm = LORENTZIAN,
                    cone: Optional[SolidCone] = None) -> CaseStructure:
    """Structure of a classification row on its simply connected group."""
    algebra = from_case(case)
    cone = DEFAULT_CONE if cone is None else cone
    if case.case_id == SU2_CASE:
        model: object = QuaternionModel(case)
    elif case.case_id in SL2_CASES:
        model = CoverModel(sl2_cover_frame(algebra))
    else:
        model = SemidirectModel(algebra)
    return CaseStructure(case, algebra, cone, anti_norm, model)


def build_cover_structure(eta: float = 1.0, anti_norm: Optional[AntiNorm] = None) -> CaseStructure:
    """Raw cover structure with controls in (xi, Re zeta, Im zeta) coordinates."""
    from .conegeom import CircularCone

    if anti_norm is None:
        anti_norm = AntiNorm(
            "custom",
            fn=lambda u: math.sqrt(max(u[0] ** 2 - u[1] ** 2 - u[2] ** 2, 0.0)),
            name="lorentzian-3d",
        )
    return CaseStructure(None, None, CircularCone((1.0, 0.0, 0.0), eta), anti_norm, CoverModel())


@dataclass(frozen=True, eq=False)
class ControlCurve:
    """Uniform-step admissible curve: controls are identity-frame cone vectors."""

    dt: float
    controls: np.ndarray
    structure: CaseStructure

    def __post_init__(self):
        controls = np.atleast_2d(np.asarray(self.controls, dtype=float))
        if controls.shape[1] != 3:
            raise ValueError("controls must be N x 3")
        controls.setflags(write=False)
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "dt", float(self.dt))
        if not self.dt > 0.0:
            raise ValueError("dt must be positive")

    def to_json(self) -> dict:
        return {"dt": self.dt, "controls": [list(map(float, row)) for row in self.controls]}


@dataclass(frozen=True, eq=False)
class IntegrationResult:
    endpoint: object
    trajectory: np.ndarray  # (N+1) x d coordinate samples


def integrate(curve: ControlCurve) -> IntegrationResult:
    """Integrate a curve from the identity; rejects controls outside the cone."""
    st = curve.structure
    for idx, u in enumerate(curve.controls):
        if float(np.linalg.norm(u)) <= 0.0:
            raise ValueError(f"control {idx} is zero")
        if not contains(st.cone, u):
            raise ValueError(f"control {idx} lies outside the admissible cone")
    x = st.model.identity()
    samples = [st.model.coords(x)]
    for u in curve.controls:
        x = st.model.step(x, u, curve.dt)
        samples.append(st.model.coords(x))
    return IntegrationResult(endpoint=x, trajectory=np.array(samples))


def length(curve: ControlCurve, nu: Optional[AntiNorm] = None) -> float:
    """Generalized length: sum of anti-norm values of the controls times dt."""
    nu = curve.structure.anti_norm if nu is None else nu
    return float(sum(nu(u) for u in curve.controls) * curve.dt)


def target_from_exp2(structure: CaseStructure, abc: Sequence[float]):
    """Group element exp(a X1) exp(b X2) exp(c X3) in the structure's model."""
    model = structure.model
    if not hasattr(model, "exp"):
        raise TypeError("this model takes targets in its own coordinates, not exponential ones")
    eye = np.eye(3)
    x = model.identity()
    for basis_vec, amount in zip(eye, abc):
        if amount != 0.0:
            x = model.multiply(x, model.exp(basis_vec, float(amount)))
    return x


# ---------------------------------------------------------------------------
# calibration upper bound

def _section_ratio_max(cone: SegmentCone, nu: AntiNorm, p: np.ndarray) -> float:
    """max over the cross-section u1 + s u2, |s| <= h of nu(v) / (p . v)."""
    u1, u2 = np.asarray(cone.u1), np.asarray(cone.u2)
    h = cone.half_width

    def ratio(s: float) -> float:
        v = u1 + s * u2
        return nu(v) / float(np.dot(p, v))

    grid = np.linspace(-h, h, 4001)
    vals = np.array([ratio(s) for s in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - phi * (b - a)
    c2 = a + phi * (b - a)
    f1, f2 = ratio(c1), ratio(c2)
    for _ in range(80):
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + phi * (b - a)
            f2 = ratio(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - phi * (b - a)
            f1 = ratio(c1)
    return max(float(vals[i]), f1, f2)


def _form_integral(p: np.ndarray, segments: Sequence[tuple[float, np.ndarray]]) -> float:
    return float(sum(duration * float(np.dot(p, u)) for duration, u in segments))


def distance_upper_bound(structure: CaseStructure, target, witness) -> float:
    """Upper bound on the length of any admissible curve from the identity to ``target``.

    ``witness`` must be a strict dual covector annihilating the derived
    subalgebra (an existence certificate of a solvable row).  The bound is
    c_max * F(target), where c_max bounds anti-norm against the witness on the
    cone cross-section and F is the primitive of the associated
    translation-invariant closed 1-form.  F is evaluated along three distinct
    piecewise-exponential paths to the target and the values are required to
    agree to 1e-8 (path independence of a closed form).
    """
    model = structure.model
    if not isinstance(model, SemidirectModel):
        raise TypeError("the calibration bound applies to the solvable (semidirect) models")
    p = witness.as_array() if isinstance(witness, Covector) else np.asarray(witness, dtype=float)
    if not dual_contains(structure.cone, p, strict=True):
        raise ValueError("witness is not strictly positive on the punctured cone")
    derived = structure.algebra.derived_subalgebra()
    if derived.shape[0] and float(np.max(np.abs(derived @ p))) > 1e-9:
        raise ValueError("witness does not annihilate the derived subalgebra")

    eye = np.eye(3)
    u_full = model.log(target)
    paths = [[(1.0, u_full)]]
    for prefix in ([(0.7, eye[0])], [(0.4, eye[1]), (0.3, eye[2])]):
        x = model.identity()
        for duration, u in prefix:
            x = model.multiply(x, model.exp(u, duration))
        rest = model.multiply(model.inverse(x), target)
        paths.append(list(prefix) + [(1.0, model.log(rest))])

    values = []
    tc = model.coords(target)
    for segs in paths:
        x = model.identity()
        for duration, u in segs:
            x = model.multiply(x, model.exp(u, duration))
        endpoint_err = float(np.linalg.norm(model.coords(x) - tc))
        if endpoint_err > 1e-9 * max(1.0, float(np.linalg.norm(tc))):
            raise AssertionError("path construction missed the target")
        values.append(_form_integral(p, segs))
    spread = max(values) - min(values)
    if spread > 1e-8 * max(1.0, abs(values[0])):
        raise AssertionError("closed-form primitive is path dependent beyond tolerance")

    c_max = _section_ratio_max(structure.cone, structure.anti_norm, p)
    return c_max * values[0]


# ---------------------------------------------------------------------------
# near-longest search

@dataclass(frozen=True, eq=False)
class SolveResult:
    found: bool
    curve: Optional[ControlCurve]
    length: float
    endpoint_error: float
    evaluations: int
    upper_bound: Optional[float] = None

    def to_json(self) -> dict:
        out = {
            "found": self.found,
            "length": self.length if self.found else None,
            "endpoint_error": self.endpoint_error if self.found else None,
            "evaluations": self.evaluations,
            "upper_bound": self.upper_bound,
        }
        out["gap"] = (self.upper_bound - self.length) if (self.found and self.upper_bound is not None) else None
        out["curve"] = self.curve.to_json() if self.curve is not None else None
        return out


class _BudgetExhausted(Exception):
    pass


_B_MAX = 1.0 - 1e-9
_R_MIN = 1e-7


class _Search:
    # Feasible candidates are ranked by length minus a multiple of the endpoint
    # error so that an exact hit always beats a ball-edge curve whose extra
    # length is only an artifact of ending elsewhere (the achievable trade-off
    # is O(1) length per unit of endpoint displacement; 10 dominates it).
    ERR_WEIGHT = 10.0

    def __init__(self, structure: CaseStructure, target, n_steps: int, budget: int):
        self.st = structure
        self.model = structure.model
        self.nu = structure.anti_norm
        self.n = n_steps
        self.dt = 1.0 / n_steps
        self.budget = budget
        self.evals = 0
        self.tcoords = self.model.coords(target)
        self.best: Optional[tuple[float, np.ndarray, float]] = None
        self._last_controls: Optional[np.ndarray] = None
        self._last_states: Optional[list] = None

    def controls_of(self, theta: np.ndarray) -> np.ndarray:
        r = np.clip(theta[:, 0], _R_MIN, None)
        b = np.clip(theta[:, 1], -_B_MAX, _B_MAX)
        return np.column_stack([r, r * b, np.zeros(self.n)])

    def rollout(self, theta: np.ndarray) -> tuple[float, float]:
        controls = self.controls_of(theta)
        start = 0
        if self._last_controls is not None:
            same = np.all(controls == self._last_controls, axis=1)
            start = int(np.argmin(same)) if not same.all() else self.n
        states = self._last_states[:start + 1] if start else [self.model.identity()]
        x = states[-1]
        for u in controls[start:]:
            x = self.model.step(x, u, self.dt)
            states.append(x)
        self._last_controls = controls
        self._last_states = states
        err = float(np.linalg.norm(self.model.coords(x) - self.tcoords))
        ell = float(sum(self.nu(u) for u in controls) * self.dt)
        return ell, err

    def score(self, theta: np.ndarray, mu: float) -> float:
        if self.evals >= self.budget:
            raise _BudgetExhausted
        self.evals += 1
        ell, err = self.rollout(theta)
        self.last = (ell, err)
        if err <= ENDPOINT_TOL:
            rank = ell - self.ERR_WEIGHT * err
            if self.best is None or rank > self.best[0] - self.ERR_WEIGHT * self.best[2]:
                self.best = (ell, theta.copy(), err)
        return ell - mu * err * err

    def coordinate_descent(self, theta: np.ndarray, mu: float, box: int) -> np.ndarray:
        used = 1
        current = self.score(theta, mu)
        step_r, step_b = 0.25, 0.25
        while used < box:
            improved = False
            for i in range(self.n):
                for col, step in ((0, step_r), (1, step_b)):
                    for delta in (step, -step):
                        if used >= box:
                            return theta
                        cand = theta.copy()
                        cand[i, col] += delta
                        val = self.score(cand, mu)
                        used += 1
                        if val > current + 1e-14:
                            theta, current, improved = cand, val, True
                            break
            if not improved:
                step_r *= 0.5
                step_b *= 0.5
                if step_r < 1e-8:
                    break
        return theta

    def constant_descent(self, rb: np.ndarray, mu: float, box: int) -> np.ndarray:
        tile = lambda v: np.tile(v, (self.n, 1))
        used = 1
        current = self.score(tile(rb), mu)
        steps = np.array([0.2, 0.2])
        while used < box:
            improved = False
            for col in (0, 1):
                for delta in (steps[col], -steps[col]):
                    if used >= box:
                        return rb
                    cand = rb.copy()
                    cand[col] += delta
                    val = self.score(tile(cand), mu)
                    used += 1
                    if val > current + 1e-16:
                        rb, current, improved = cand, val, True
                        break
            if not improved:
                steps = steps * 0.5
                if steps[0] < 1e-10:
                    break
        return rb


def maximize(structure: CaseStructure, target, n_steps: int = 24, budget: int = 10000,
             seed: int = DEFAULT_SEED) -> SolveResult:
    """Penalty-augmented multi-start search for a near-longest admissible curve.

    The candidate stream (initial guesses, constant-control sweep and
    refinements, penalty-escalated coordinate descents, random restarts) is a
    fixed deterministic sequence for a given seed; the budget only truncates
    it, so the set of evaluated candidates grows with the budget and the
    reported best length is nondecreasing in it.  A curve counts as reaching
    the target when its endpoint is within 1e-4 of it in group coordinates;
    if no candidate gets that close the result is marked not found.
    """
    rng = np.random.default_rng(seed)
    search = _Search(structure, target, n_steps, budget)
    model = structure.model

    log_theta = None
    log_u = None
    if hasattr(model, "log"):
        try:
            log_u = np.asarray(model.log(target), dtype=float)
        except (ValueError, TypeError):
            log_u = None
    if log_u is not None and log_u[0] > 0.0 and abs(log_u[2]) < 1e-9:
        r0 = float(np.clip(log_u[0], _R_MIN, None))
        b0 = float(np.clip(log_u[1] / max(log_u[0], _R_MIN), -_B_MAX, _B_MAX))
        log_theta = np.tile([r0, b0], (n_steps, 1))

    try:
        if log_theta is not None:
            search.score(log_theta, 1e8)

        # constant-control sweep over the compact slab, ranked by endpoint error
        r_hi = 3.0 if log_u is None else max(2.5, 2.5 * float(np.linalg.norm(log_u)))
        grid: list[tuple[float, np.ndarray]] = []
        for r in np.linspace(0.15, r_hi, 12):
            for b in np.linspace(-0.95, 0.95, 13):
                search.score(np.tile([r, b], (n_steps, 1)), 1e4)
                grid.append((search.last[1], np.array([r, b])))
        grid.sort(key=lambda t: t[0])

        refined: list[np.ndarray] = []
        for _, rb in grid[:3]:
            rb = search.constant_descent(rb, 1e5, box=250)
            rb = search.constant_descent(rb, 1e9, box=250)
            refined.append(rb)

        full_starts: list[np.ndarray] = []
        if search.best is not None:
            full_starts.append(search.best[1])
        if log_theta is not None:
            full_starts.append(log_theta)
        full_starts.extend(np.tile(rb, (n_steps, 1)) for rb in refined[:1])
        for theta in full_starts:
            for mu, box in ((1e5, 1200), (1e7, 1200)):
                theta = search.coordinate_descent(theta, mu, box)

        while True:
            theta = np.column_stack([
                rng.uniform(0.2, min(r_hi, 2.0), n_steps),
                rng.uniform(-0.8, 0.8, n_steps),
            ])
            for mu, box in ((1e4, 250), (1e6, 250), (1e8, 300)):
                theta = search.coordinate_descent(theta, mu, box)
    except _BudgetExhausted:
        pass

    if search.best is None:
        return SolveResult(False, None, float("nan"), float("inf"), search.evals)
    ell, theta, err = search.best
    curve = ControlCurve(search.dt, search.controls_of(theta), structure)
    return SolveResult(True, curve, ell, err, search.evals)


# ---------------------------------------------------------------------------
# unbounded-length construction on su2

def su2_unbounded_witness(structure: CaseStructure, demanded_length: float,
                          base_curve: Optional[ControlCurve] = None,
                          steps_per_loop: int = 64) -> ControlCurve:
    """Admissible curve to the base endpoint of length at least ``demanded_length``.

    Prepends whole traversals of the closed timelike loop exp(t X1) (which
    returns to the identity after one period) to the base curve; each loop
    adds its fixed length, so any demanded length is reached while the
    endpoint stays that of the base curve.
    """
    if not demanded_length > 0.0:
        raise ValueError("demanded length must be positive")
    model = structure.model
    if not isinstance(model, QuaternionModel):
        raise ValueError("the loop construction applies to the su2 structure (case 9)")
    period = model.loop_period()
    dt = base_curve.dt if base_curve is not None else period / steps_per_loop
    m = max(1, int(math.ceil(period / dt)))
    scale = period / (m * dt)
    loop_controls = np.tile([scale, 0.0, 0.0], (m, 1))
    loop_curve = ControlCurve(dt, loop_controls, structure)
    loop_len = length(loop_curve)
    base_len = length(base_curve) if base_curve is not None else 0.0
    k = max(0, int(math.ceil((demanded_length - base_len) / loop_len)))
    blocks = [loop_controls] * k
    if base_curve is not None:
        blocks.append(np.asarray(base_curve.controls))
    if not blocks:
        blocks = [loop_controls]
    controls = np.vstack(blocks)
    return ControlCurve(dt, controls, structure)
