"""Closed convex acute cones in 3-space and their duals.

Two cone shapes are supported:

* :class:`SegmentCone`: the planar cone {a u1 + b u2 : a >= 0, |b| <= h a}
  with half-width ``h`` (``h = math.inf`` produces the half-plane a >= 0,
  which contains the line through u2 and is therefore not acute; it exists
  so that degenerate configurations are constructible and detectable).
  The default structure cone is the segment cone with u1 = X1, u2 = X2,
  i.e. {(x1, x2, 0) : |x2| <= x1}.

* :class:`CircularCone`: the solid cone {v : v.axis >= sqrt(eta+1) |v_perp|}
  around a spatial axis; ``eta = 0`` is the widest member of the family.

All membership and duality questions are decided in closed form on the
extreme rays (segment) or by axis/transverse decomposition (circular).
Exact-zero comparisons use an absolute tolerance of 1e-12; inputs are
expected to be of order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

ZERO_TOL = 1e-12
RANK_TOL = 1e-10


def _vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


@dataclass(frozen=True)
class Covector:
    """An element of the dual space, paired with vectors by the dot product."""

    p: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(t) for t in _vec3(self.p)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.p)

    def pair(self, v) -> float:
        return float(np.dot(self.p, _vec3(v)))


def _as_covector_array(p) -> np.ndarray:
    if isinstance(p, Covector):
        return p.as_array()
    return _vec3(p)


@dataclass(frozen=True)
class SegmentCone:
    u1: tuple[float, float, float]
    u2: tuple[float, float, float]
    half_width: float = 1.0

    def __post_init__(self):
        u1 = _vec3(self.u1)
        u2 = _vec3(self.u2)
        object.__setattr__(self, "u1", tuple(u1))
        object.__setattr__(self, "u2", tuple(u2))
        object.__setattr__(self, "half_width", float(self.half_width))
        n = np.cross(u1, u2)
        if np.linalg.norm(n) <= ZERO_TOL * max(1.0, np.linalg.norm(u1) * np.linalg.norm(u2)):
            raise ValueError("u1 and u2 must be linearly independent")
        if not (self.half_width >= 0.0):
            raise ValueError("half_width must be >= 0 (math.inf allowed)")

    def rays(self) -> tuple[np.ndarray, np.ndarray]:
        """Extreme rays u1 +- h u2 of the closed cone (finite half-width only)."""
        if math.isinf(self.half_width):
            raise ValueError("a half-plane cone has no extreme ray pair")
        u1, u2 = np.asarray(self.u1), np.asarray(self.u2)
        return u1 + self.half_width * u2, u1 - self.half_width * u2


@dataclass(frozen=True)
class CircularCone:
    axis: tuple[float, float, float]
    eta: float = 0.0

    def __post_init__(self):
        a = _vec3(self.axis)
        if np.linalg.norm(a) <= ZERO_TOL:
            raise ValueError("axis must be nonzero")
        object.__setattr__(self, "axis", tuple(a))
        object.__setattr__(self, "eta", float(self.eta))
        if self.eta < 0.0:
            raise ValueError("eta must be >= 0")

    def unit_axis(self) -> np.ndarray:
        a = np.asarray(self.axis)
        return a / np.linalg.norm(a)

    def aperture(self) -> float:
        """The slope bound sqrt(eta + 1) of the membership inequality."""
        return math.sqrt(self.eta + 1.0)


SolidCone = Union[SegmentCone, CircularCone]

#: The default admissible cone {(x1, x2, 0) : |x2| <= x1}.
DEFAULT_CONE = SegmentCone((1.0, 0.0, 0.0), (0.0, 1.0, 0.0))


@lru_cache(maxsize=256)
def _segment_frame(cone: SegmentCone) -> tuple[np.ndarray, np.ndarray]:
    u1, u2 = np.asarray(cone.u1), np.asarray(cone.u2)
    n = np.cross(u1, u2)
    n = n / np.linalg.norm(n)
    M = np.column_stack([u1, u2, n])
    return np.linalg.inv(M), n


def _segment_coords(cone: SegmentCone, v: np.ndarray) -> tuple[float, float, float]:
    Minv, _ = _segment_frame(cone)
    a, b, c = Minv @ v
    return float(a), float(b), float(c)


def contains(cone: SolidCone, v, strict: bool = False) -> bool:
    """Membership in the closed cone; with ``strict``, in its relative interior."""
    v = _vec3(v)
    if isinstance(cone, SegmentCone):
        a, b, c = _segment_coords(cone, v)
        scale = max(1.0, float(np.max(np.abs(v))))
        if abs(c) > ZERO_TOL * scale:
            return False
        h = cone.half_width
        if strict:
            if a <= ZERO_TOL:
                return False
            return True if math.isinf(h) else abs(b) < h * a - ZERO_TOL
        if a < -ZERO_TOL:
            return False
        return True if math.isinf(h) else abs(b) <= h * a + ZERO_TOL
    ahat = cone.unit_axis()
    xi = float(np.dot(v, ahat))
    zeta = v - xi * ahat
    bound = cone.aperture() * float(np.linalg.norm(zeta))
    if strict:
        return xi > bound + ZERO_TOL
    return xi >= bound - ZERO_TOL


def acute(cone: SolidCone) -> bool:
    """True iff the cone contains no line, decided by opposite-pair membership."""
    if isinstance(cone, SegmentCone):
        u2 = np.asarray(cone.u2)
        return not (contains(cone, u2) and contains(cone, -u2))
    ahat = cone.unit_axis()
    return not (contains(cone, ahat) and contains(cone, -ahat))


def _require_acute(cone: SolidCone) -> None:
    if not acute(cone):
        raise ValueError("cone is not acute (it contains a line)")


def dual_contains(cone: SolidCone, p, strict: bool = False) -> bool:
    """Dual-cone membership: p nonnegative on the cone; strictly positive with ``strict``.

    Decided in closed form: on the two extreme rays for a segment cone, and by
    axis/transverse comparison for a circular cone.
    """
    _require_acute(cone)
    p = _as_covector_array(p)
    if isinstance(cone, SegmentCone):
        r1, r2 = cone.rays()
        d1, d2 = float(np.dot(p, r1)), float(np.dot(p, r2))
        if strict:
            return d1 > ZERO_TOL and d2 > ZERO_TOL
        return d1 >= -ZERO_TOL and d2 >= -ZERO_TOL
    ahat = cone.unit_axis()
    pi = float(np.dot(p, ahat))
    rho = float(np.linalg.norm(p - pi * ahat))
    bound = rho / cone.aperture()
    if strict:
        return pi > bound + ZERO_TOL
    return pi >= bound - ZERO_TOL


def _basis_matrix(subspace) -> np.ndarray:
    U = np.asarray(subspace, dtype=float)
    if U.size == 0:
        return np.zeros((0, 3))
    U = U.reshape(-1, 3)
    if U.shape[0] > 3:
        raise ValueError("at most three basis vectors in 3-space")
    s = np.linalg.svd(U, compute_uv=False)
    if int(np.sum(s > RANK_TOL * max(1.0, s[0]))) != U.shape[0]:
        raise ValueError("subspace basis vectors are linearly dependent")
    return U


def _orthonormal_rows(U: np.ndarray) -> np.ndarray:
    if U.shape[0] == 0:
        return U
    _, s, vt = np.linalg.svd(U)
    rank = int(np.sum(s > RANK_TOL * max(1.0, s[0])))
    return vt[:rank]


def _orthocomplement(U: np.ndarray) -> np.ndarray:
    if U.shape[0] == 0:
        return np.eye(3)
    _, _, vt = np.linalg.svd(U, full_matrices=True)
    return vt[U.shape[0]:]


def cone_subspace_trivial(cone: SolidCone, subspace) -> bool:
    """True iff the cone meets the given subspace only at the origin."""
    _require_acute(cone)
    U = _basis_matrix(subspace)
    k = U.shape[0]
    if k == 0:
        return True
    if k == 3:
        return False
    if isinstance(cone, SegmentCone):
        _, n = _segment_frame(cone)
        dots = U @ n
        scale = np.maximum(1.0, np.linalg.norm(U, axis=1))
        in_plane = np.abs(dots) <= RANK_TOL * scale
        if np.all(in_plane):
            W = _orthonormal_rows(U)
        else:
            # intersect span(U) with the carrier plane: null combinations of dots
            _, s, vt = np.linalg.svd(dots.reshape(1, -1))
            combos = vt[1:]
            W = _orthonormal_rows(combos @ U)
        if W.shape[0] == 0:
            return True
        if W.shape[0] >= 2:
            return False
        d = W[0]
        return not (contains(cone, d) or contains(cone, -d))
    if k == 1:
        d = U[0]
        return not (contains(cone, d) or contains(cone, -d))
    # plane vs solid circular cone: sign of the restricted quadratic form
    ahat = cone.unit_axis()
    alpha2 = cone.aperture() ** 2
    Q = alpha2 * (np.eye(3) - np.outer(ahat, ahat)) - np.outer(ahat, ahat)
    B = _orthonormal_rows(U)
    lam_min = float(np.min(np.linalg.eigvalsh(B @ Q @ B.T)))
    return lam_min > ZERO_TOL


def find_interior_dual_in_annihilator(cone: SolidCone, subspace) -> Optional[Covector]:
    """A covector strictly positive on the punctured cone and vanishing on the subspace.

    Returns ``None`` when no such covector exists.  The construction is direct
    (no reliance on the primal intersection test): the annihilator is
    parametrized by an orthonormal basis and the strict dual inequalities are
    solved on it in closed form.
    """
    _require_acute(cone)
    U = _basis_matrix(subspace)
    B = _orthocomplement(_orthonormal_rows(U))
    m = B.shape[0]
    if m == 0:
        return None

    if isinstance(cone, SegmentCone):
        r1, r2 = cone.rays()
        if m == 3:
            p = r1 / np.linalg.norm(r1) + r2 / np.linalg.norm(r2)
            return Covector(tuple(p / np.linalg.norm(p)))
        if m == 1:
            b = B[0]
            t1, t2 = float(np.dot(b, r1)), float(np.dot(b, r2))
            for sign in (1.0, -1.0):
                if sign * t1 > ZERO_TOL and sign * t2 > ZERO_TOL:
                    return Covector(tuple(sign * b))
            return None
        a1 = np.array([np.dot(B[0], r1), np.dot(B[1], r1)])
        a2 = np.array([np.dot(B[0], r2), np.dot(B[1], r2)])
        n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
        ray_scale = max(1.0, np.linalg.norm(r1), np.linalg.norm(r2))
        if n1 <= ZERO_TOL * ray_scale or n2 <= ZERO_TOL * ray_scale:
            return None
        if float(np.dot(a1, a2)) / (n1 * n2) <= -1.0 + ZERO_TOL:
            return None
        y = a1 / n1 + a2 / n2
        p = y[0] * B[0] + y[1] * B[1]
        p = p / np.linalg.norm(p)
        if np.dot(p, r1) > ZERO_TOL and np.dot(p, r2) > ZERO_TOL:
            return Covector(tuple(p))
        return None

    ahat = cone.unit_axis()
    inv_alpha = 1.0 / cone.aperture()
    if m == 3:
        return Covector(tuple(ahat))
    if m == 1:
        b = B[0]
        pi = float(np.dot(b, ahat))
        rho = math.sqrt(max(0.0, 1.0 - pi * pi))
        if abs(pi) > inv_alpha * rho + ZERO_TOL:
            return Covector(tuple(math.copysign(1.0, pi) * b))
        return None
    proj = B.T @ (B @ ahat)
    np_ = float(np.linalg.norm(proj))
    if np_ <= ZERO_TOL:
        return None
    p = proj / np_
    rho = math.sqrt(max(0.0, 1.0 - np_ * np_))
    if np_ > inv_alpha * rho + ZERO_TOL:
        return Covector(tuple(p))
    return None


def cone_to_json(cone: SolidCone) -> dict:
    if isinstance(cone, SegmentCone):
        out = {"kind": "segment", "u1": list(cone.u1), "u2": list(cone.u2)}
        if cone.half_width != 1.0:
            out["half_width"] = cone.half_width
        return out
    return {"kind": "circular", "axis": list(cone.axis), "eta": cone.eta}


def cone_from_json(data: dict) -> SolidCone:
    kind = data.get("kind")
    if kind == "segment":
        return SegmentCone(tuple(data["u1"]), tuple(data["u2"]), data.get("half_width", 1.0))
    if kind == "circular":
        return CircularCone(tuple(data["axis"]), data.get("eta", 0.0))
    raise ValueError(f"unknown cone kind {kind!r}")
