"""The universal cover of SL2(R) as an executable group.

Elements are pairs (c, w) in R x C.  The projection onto SU(1,1),

    (c, w)  |->  [[exp(ic) sqrt(1+|w|^2), w], [conj(w), exp(-ic) sqrt(1+|w|^2)]],

is a group homomorphism; the angle coordinate c is unbounded (no wrapping),
which is what distinguishes the cover from the matrix group.  The group law
is implemented directly in (c, w) coordinates; the arctangent correction in
the angle component stays on the principal branch because its denominator is
provably positive (see :func:`multiply`).

Tangent vectors carry coordinates (xi, zeta) in R x C.  The differential of
left translation (:func:`push_forward`), the angle 1-form dc
(:func:`time_form`) and the norm-to-angle growth ratio with its uniform
linear bound (:func:`growth_ratio`, :func:`growth_bound_constants`) support
the existence certificate on this group.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CoverElement:
    c: float
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "w", complex(self.w))


@dataclass(frozen=True)
class TangentVector:
    xi: float
    zeta: complex

    def __post_init__(self):
        object.__setattr__(self, "xi", float(self.xi))
        object.__setattr__(self, "zeta", complex(self.zeta))

    def norm(self) -> float:
        """Euclidean norm of (xi, zeta) in R x C ~ R^3."""
        return math.sqrt(self.xi * self.xi + abs(self.zeta) ** 2)


IDENTITY = CoverElement(0.0, 0j)


def multiply(g1: CoverElement, g2: CoverElement) -> CoverElement:
    """Group product in cover coordinates.

    The angle correction is arctan(Im z / (r1 r2 + Re z)) with
    z = w1 conj(w2) exp(-i(c1+c2)) and r_i = sqrt(1+|w_i|^2).  Since
    r1 r2 > |w1||w2| >= |z|, the denominator is strictly positive and the
    principal branch is globally correct; a nonpositive denominator would be
    an internal error and is asserted against.
    """
    s = g1.c + g2.c
    z = g1.w * g2.w.conjugate() * cmath.exp(-1j * s)
    r1 = math.sqrt(1.0 + abs(g1.w) ** 2)
    r2 = math.sqrt(1.0 + abs(g2.w) ** 2)
    den = r1 * r2 + z.real
    if not den > 0.0:
        raise ArithmeticError("internal error: arctangent denominator not positive")
    c = s + math.atan2(z.imag, den)
    w = g2.w * r1 * cmath.exp(1j * g1.c) + g1.w * r2 * cmath.exp(-1j * g2.c)
    return CoverElement(c, w)


def inverse(g: CoverElement) -> CoverElement:
    """Group inverse; in these coordinates simply (c, w) -> (-c, -w)."""
    return CoverElement(-g.c, -g.w)


def project(g: CoverElement) -> np.ndarray:
    """The 2x2 complex matrix in SU(1,1) covering g; unit determinant by construction."""
    r = math.sqrt(1.0 + abs(g.w) ** 2)
    z = cmath.exp(1j * g.c) * r
    return np.array([[z, g.w], [g.w.conjugate(), z.conjugate()]])


def push_forward(base: CoverElement, v: TangentVector) -> TangentVector:
    """Differential of left translation by ``base``, applied to an identity vector."""
    r = math.sqrt(1.0 + abs(base.w) ** 2)
    xi = v.xi + (base.w * v.zeta.conjugate() * cmath.exp(-1j * base.c)).imag / r
    zeta = v.zeta * r * cmath.exp(1j * base.c) - 1j * base.w * v.xi
    return TangentVector(xi, zeta)


def time_form(base: CoverElement, v: TangentVector) -> float:
    """The angle 1-form dc on a tangent vector at ``base`` (its first component)."""
    del base  # the form has constant coefficients in these coordinates
    return v.xi


def algebra_bracket(v1: TangentVector, v2: TangentVector) -> TangentVector:
    """Lie bracket on R x C, read off the commutator under the projection differential."""
    xi = 2.0 * (v1.zeta * v2.zeta.conjugate()).imag
    zeta = 2j * (v1.xi * v2.zeta - v2.xi * v1.zeta)
    return TangentVector(xi, zeta)


def in_circular_cone(v: TangentVector, eta: float, tol: float = 1e-12) -> bool:
    """Membership in {(xi, zeta) : xi >= sqrt(eta+1) |zeta|}."""
    return v.xi >= math.sqrt(eta + 1.0) * abs(v.zeta) - tol


def growth_bound_constants(eta: float) -> tuple[float, float]:
    """Sharp constants (A, B) of the linear bound ratio <= A + B |w|.

    They come from the uniform envelope of
    (sqrt(1+|w|^2) +- |w|/sqrt(eta+1)) / sqrt(1+|w|^2), whose infimum and
    supremum over |w| in [0, inf) are C1 = 1 - 1/sqrt(eta+1) and
    C2 = 1 + 1/sqrt(eta+1).
    """
    if not eta > 0.0:
        raise ValueError("the growth bound needs eta > 0")
    inv = 1.0 / math.sqrt(eta + 1.0)
    c1 = 1.0 - inv
    c2 = 1.0 + inv
    return (inv + c2) / c1, (inv + 1.0) / c1


def growth_ratio(base: CoverElement, u: TangentVector, eta: float) -> float:
    """|v| / dc(v) for v the push-forward of an identity cone vector u.

    ``u`` must lie in the closed cone of parameter ``eta > 0`` and be nonzero;
    the angle component of the push-forward is then strictly positive, so the
    ratio is finite.  It satisfies ratio <= A + B |w(base)| with (A, B) from
    :func:`growth_bound_constants`.
    """
    if not eta > 0.0:
        raise ValueError("the growth ratio needs eta > 0")
    if not in_circular_cone(u, eta):
        raise ValueError("u is outside the admissible cone for this eta")
    if u.norm() == 0.0:
        raise ValueError("u must be nonzero")
    v = push_forward(base, u)
    tau = v.xi
    if not tau > 0.0:
        raise ArithmeticError("internal error: angle form not positive on the pushed cone")
    return v.norm() / tau
