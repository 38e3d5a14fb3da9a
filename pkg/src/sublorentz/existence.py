"""Existence verdicts for longest admissible arcs on the classified structures.

Each classification row is mapped to one of three outcomes:

* ``EXISTS``: a certificate guarantees that every attainable point is reached
  by a length-maximizing admissible arc.  Two certificate mechanisms are
  implemented: a strictly cone-positive covector annihilating the derived
  subalgebra (valid on the simply connected solvable groups), and strict
  containment of the admissible cone inside the open negativity cone of the
  Killing form (valid on the universal cover of the sl2-type groups).
* ``INFINITE_DISTANCE``: closed timelike loops through every point make the
  supremum of lengths infinite (the su2 row).
* ``INCONCLUSIVE``: neither certificate applies; nothing is claimed.

Verdicts depend only on the cone, never on the anti-norm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conegeom import (
    DEFAULT_CONE,
    Covector,
    SegmentCone,
    SolidCone,
    dual_contains,
    find_interior_dual_in_annihilator,
)
from .liealg3 import SL2_CASES, SU2_CASE, LieAlgebra3, SubLorentzCase, from_case

_SIG_TOL = 1e-10


class Outcome(enum.Enum):
    EXISTS = "exists"
    INFINITE_DISTANCE = "infinite-distance"
    INCONCLUSIVE = "inconclusive"


#: Rationale tags attached to verdicts.
RATIONALE_ANNIHILATOR = "annihilator-witness"
RATIONALE_KILLING = "killing-containment"
RATIONALE_LOOP = "closed-timelike-loop"
RATIONALE_NONE = "not-applicable"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    rationale: str
    witness: Optional[tuple[float, float, float]] = None
    loop: Optional[dict] = None
    certificate: Optional[dict] = None
    case_id: Optional[str] = None
    params: Optional[dict] = None

    def to_json(self) -> dict:
        out = {
            "case": self.case_id,
            "params": self.params or {},
            "outcome": self.outcome.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "rationale": self.rationale,
        }
        if self.loop is not None:
            out["loop"] = self.loop
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Verdict":
        return cls(
            outcome=Outcome(data["outcome"]),
            rationale=data["rationale"],
            witness=tuple(data["witness"]) if data.get("witness") is not None else None,
            loop=data.get("loop"),
            certificate=data.get("certificate"),
            case_id=data.get("case"),
            params=data.get("params") or None,
        )


def check_solvable(algebra: LieAlgebra3, cone: SolidCone = DEFAULT_CONE) -> Verdict:
    """Certificate search for groups admitting a translation-invariant calibration.

    Looks for a covector that is strictly positive on the punctured cone and
    annihilates the derived subalgebra.  Success proves existence of longest
    arcs to every attainable point on the simply connected group; failure is
    reported as inconclusive.
    """
    derived = algebra.derived_subalgebra()
    witness = find_interior_dual_in_annihilator(cone, derived)
    if witness is None:
        return Verdict(Outcome.INCONCLUSIVE, RATIONALE_NONE)
    return Verdict(Outcome.EXISTS, RATIONALE_ANNIHILATOR, witness=witness.p)


def killing_section_max(algebra: LieAlgebra3, cone: SegmentCone) -> float:
    """Maximum of the Killing quadratic over the cone cross-section u1 + s u2, |s| <= h.

    The restriction is a quadratic in s; the maximum is attained at an endpoint
    or at the interior vertex of a downward parabola, so it is evaluated exactly.
    """
    if not isinstance(cone, SegmentCone) or math.isinf(cone.half_width):
        raise ValueError("the containment test needs a planar segment cone of finite width")
    K = algebra.killing_form()
    u1, u2 = np.asarray(cone.u1), np.asarray(cone.u2)
    k11 = float(u1 @ K @ u1)
    k12 = float(u1 @ K @ u2)
    k22 = float(u2 @ K @ u2)
    h = cone.half_width
    best = max(k11 - 2.0 * h * k12 + h * h * k22, k11 + 2.0 * h * k12 + h * h * k22)
    if k22 < 0.0:
        s_star = -k12 / k22
        if -h < s_star < h:
            best = max(best, k11 + 2.0 * s_star * k12 + s_star * s_star * k22)
    return best


def killing_containment(algebra: LieAlgebra3, cone: SegmentCone = DEFAULT_CONE) -> bool:
    """True iff the punctured cone lies in the open negativity cone of the Killing form.

    Requires a nondegenerate Killing form with exactly one negative direction;
    anything else is rejected.  Containment is strict: a zero of the Killing
    quadratic on the cross-section yields ``False``.  Several rows produce an
    exact zero at a cross-section endpoint through cancellation, so values
    within 1e-12 of zero (relative to the Killing scale) count as zero.
    """
    K = algebra.killing_form()
    evals = np.linalg.eigvalsh(K)
    scale = max(1.0, float(np.max(np.abs(evals))))
    if not (evals[0] < -_SIG_TOL * scale and evals[1] > _SIG_TOL * scale and evals[2] > _SIG_TOL * scale):
        raise ValueError("Killing form is not nondegenerate with one negative direction")
    h = max(1.0, cone.half_width)
    return killing_section_max(algebra, cone) < -1e-12 * scale * h * h


def _loop_description(case: SubLorentzCase) -> dict:
    # one-parameter subgroup of X1; it closes after the stated parameter time
    period = 4.0 * math.pi / math.sqrt(-(case.kappa + case.chi))
    return {"control": [1.0, 0.0, 0.0], "period": period}


def check_case(case: SubLorentzCase, cone: SolidCone = DEFAULT_CONE) -> Verdict:
    """Verdict for one classification row at one admissible parameter point."""
    algebra = from_case(case)
    cid = case.case_id
    if cid == SU2_CASE:
        base = Verdict(Outcome.INFINITE_DISTANCE, RATIONALE_LOOP, loop=_loop_description(case))
    elif cid in SL2_CASES:
        if killing_containment(algebra, cone):
            cert = {"section_max": killing_section_max(algebra, cone)}
            base = Verdict(Outcome.EXISTS, RATIONALE_KILLING, certificate=cert)
        else:
            base = Verdict(Outcome.INCONCLUSIVE, RATIONALE_NONE)
    else:
        base = check_solvable(algebra, cone)
    return Verdict(
        outcome=base.outcome,
        rationale=base.rationale,
        witness=base.witness,
        loop=base.loop,
        certificate=base.certificate,
        case_id=cid,
        params=case.params(),
    )


def witness_is_valid(algebra: LieAlgebra3, cone: SolidCone, witness, tol: float = 1e-12) -> bool:
    """Check a covector certificate: strict dual membership plus annihilation."""
    p = witness.as_array() if isinstance(witness, Covector) else np.asarray(witness, dtype=float)
    if not dual_contains(cone, p, strict=True):
        return False
    derived = algebra.derived_subalgebra()
    if derived.shape[0] and float(np.max(np.abs(derived @ p))) > tol:
        return False
    return True
