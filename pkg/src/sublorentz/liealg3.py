"""Three-dimensional real Lie algebras given by structure constants.

An algebra is stored as its bracket table over a fixed ordered basis
(X1, X2, X3); only the pairs (1,2), (1,3), (2,3) are kept, everything else
follows by antisymmetry.  Two families of constructors are provided:

* :func:`from_case` realizes one row of the classification table of
  left-invariant cone structures (rows ``"1"`` .. ``"19"`` plus ``"2*"``),
  through the normalized contact bracket layout

      [X1, X3] = c X1 + a12 X2
      [X2, X3] = a21 X1 - c X2
      [X1, X2] = b1 X1 + b2 X2 + X3

  whose coefficients are collected in the 3x3 structure matrix returned by
  :meth:`LieAlgebra3.structure_matrix`.

* :func:`from_bianchi` realizes the standard named three-dimensional
  algebras (Heisenberg, sl2, su2, the solvable families) over generators
  (E1, E2, E3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

JACOBI_TOL = 1e-12
RANK_TOL = 1e-10

#: Row identifiers of the classification table, in display order.
CASE_IDS = (
    "1", "2", "2*", "3", "4", "5", "6", "7", "8", "9", "10",
    "11", "12", "13", "14", "15", "16", "17", "18", "19",
)

#: Algebra label printed in the classification table for each row.
CASE_LABELS = {
    "1": "L(3,1)", "2": "L(3,5)", "2*": "L(3,-1)", "3": "L(3,3)",
    "4": "L(3,2,eta)", "5": "L(3,4,eta)", "6": "L(3,5)", "7": "L(3,2,eta)",
    "8": "L(3,5)", "9": "L(3,6)", "10": "L(3,5)", "11": "L(3,2,-1)",
    "12": "L(3,4,0)", "13": "L(3,3)", "14": "L(3,2,eta)", "15": "L(3,4,eta)",
    "16": "L(3,3)", "17": "L(3,2,eta)", "18": "L(3,4,eta)", "19": "L(3,5)",
}

#: Rows whose algebra is sl2 (nondegenerate Killing form of index 1).
SL2_CASES = frozenset({"2", "6", "8", "10", "19"})

#: Row whose group is SU2 (compact; carries closed timelike loops).
SU2_CASE = "9"

_EQ_TOL = 1e-12


def _vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite components")
    return v


@dataclass(frozen=True)
class LieAlgebra3:
    """A 3D real Lie algebra: bracket values on basis pairs (1,2), (1,3), (2,3)."""

    b12: tuple[float, float, float]
    b13: tuple[float, float, float]
    b23: tuple[float, float, float]
    label: str = ""

    def __post_init__(self):
        for name in ("b12", "b13", "b23"):
            object.__setattr__(self, name, tuple(float(t) for t in _vec3(getattr(self, name))))
        defect = self.jacobi_defect()
        if defect > JACOBI_TOL:
            raise ValueError(f"structure constants violate the Jacobi identity (defect {defect:.3e})")

    def bracket(self, v, w) -> np.ndarray:
        """Bilinear antisymmetric extension of the basis bracket table."""
        v = _vec3(v)
        w = _vec3(w)
        out = np.zeros(3)
        for (i, j), b in (((0, 1), self.b12), ((0, 2), self.b13), ((1, 2), self.b23)):
            out += (v[i] * w[j] - v[j] * w[i]) * np.asarray(b)
        return out

    def adjoint(self, v) -> np.ndarray:
        """Matrix of ad_v, i.e. w -> [v, w], in the fixed basis."""
        eye = np.eye(3)
        return np.column_stack([self.bracket(v, eye[j]) for j in range(3)])

    def jacobi_defect(self) -> float:
        eye = np.eye(3)
        j = (
            self.bracket(self.bracket(eye[0], eye[1]), eye[2])
            + self.bracket(self.bracket(eye[1], eye[2]), eye[0])
            + self.bracket(self.bracket(eye[2], eye[0]), eye[1])
        )
        return float(np.max(np.abs(j)))

    def derived_subalgebra(self) -> np.ndarray:
        """Orthonormal basis (rows) of the span of all basis brackets."""
        rows = np.array([self.b12, self.b13, self.b23])
        u, s, vt = np.linalg.svd(rows)
        rank = int(np.sum(s > RANK_TOL))
        return vt[:rank]

    def structure_matrix(self) -> np.ndarray:
        """The 3x3 coefficient matrix of the normalized contact bracket layout.

        Rows hold the coordinates of [X1,X3], [X2,X3], [X1,X2]; its kernel is
        the annihilator of the derived subalgebra in dual coordinates.
        Raises if the algebra is not in the normalized layout.
        """
        b12, b13, b23 = map(np.asarray, (self.b12, self.b13, self.b23))
        if abs(b12[2] - 1.0) > _EQ_TOL or abs(b13[2]) > _EQ_TOL or abs(b23[2]) > _EQ_TOL:
            raise ValueError("algebra is not in the normalized contact form "
                             "([X1,X2] must have unit X3 part, [Xi,X3] none)")
        if abs(b23[1] + b13[0]) > _EQ_TOL:
            raise ValueError("algebra is not in the normalized contact form "
                             "(the X3-action must be trace free)")
        return np.array([
            [b13[0], b13[1], 0.0],
            [b23[0], b23[1], 0.0],
            [b12[0], b12[1], 1.0],
        ])

    def killing_form(self) -> np.ndarray:
        """Symmetric matrix K[i,j] = trace(ad_Xi ad_Xj)."""
        ads = [self.adjoint(np.eye(3)[i]) for i in range(3)]
        K = np.array([[np.trace(ads[i] @ ads[j]) for j in range(3)] for i in range(3)])
        return 0.5 * (K + K.T)

    def to_json(self) -> dict:
        return {
            "basis": ["X1", "X2", "X3"],
            "brackets": {"12": list(self.b12), "13": list(self.b13), "23": list(self.b23)},
            "label": self.label,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieAlgebra3":
        br = data["brackets"]
        return cls(tuple(br["12"]), tuple(br["13"]), tuple(br["23"]), data.get("label", ""))


def _is_zero(x: Optional[float]) -> bool:
    return x is None or abs(x) <= _EQ_TOL


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= _EQ_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class SubLorentzCase:
    """One admissible parameter point of a classification-table row.

    ``case_id`` is one of :data:`CASE_IDS`.  ``kappa``, ``tau``, ``chi`` are
    the row parameters where the row lists them; ``variant`` selects between
    the two canonical coefficient patterns of rows 3, 4, 5 and 7.  Row side
    conditions are checked at construction and violations are rejected with
    the offending condition named.
    """

    case_id: str
    kappa: Optional[float] = None
    tau: Optional[float] = None
    chi: Optional[float] = None
    variant: int = 1

    def __post_init__(self):
        cid = self.case_id
        if cid not in CASE_IDS:
            raise ValueError(f"unknown case id {cid!r}; expected one of {', '.join(CASE_IDS)}")
        if self.variant not in (1, 2):
            raise ValueError("variant must be 1 or 2")
        if self.variant == 2 and cid not in ("3", "4", "5", "7"):
            raise ValueError(f"case {cid} has a single canonical pattern; variant must be 1")
        k, t, x = self.kappa, self.tau, self.chi
        need = lambda name, val: self._require(val is not None, f"case {cid} requires {name}")
        if cid == "1":
            self._require(_is_zero(k), "case 1 requires kappa = 0")
        elif cid in ("2", "2*"):
            need("kappa", k)
            self._require(not _is_zero(k), f"case {cid} requires kappa != 0")
            if cid == "2*":
                t0 = 0.0 if t is None else t
                self._require(k + t0 * t0 >= -_EQ_TOL,
                              "case 2* requires kappa + tau^2 >= 0 (real structure constants)")
        elif cid == "3":
            t0 = 2.0 if t is None else t
            self._require(_close(t0, 2.0), "case 3 requires tau = 2")
        elif cid == "4":
            need("tau", t)
            self._require(abs(t) > 2.0, "case 4 requires |tau| > 2")
        elif cid == "5":
            need("tau", t)
            self._require(abs(t) < 2.0, "case 5 requires |tau| < 2")
        elif cid in ("6", "8"):
            need("kappa", k)
            self._require(not _is_zero(k), f"case {cid} requires kappa != 0")
        elif cid == "7":
            need("tau", t)
        elif cid in ("9", "10"):
            need("kappa", k); need("chi", x)
            self._require(not _is_zero(x), f"case {cid} requires chi != 0")
            if cid == "9":
                self._require(abs(k) < -x, "case 9 requires |kappa| < -chi")
            else:
                self._require(abs(k) > -x, "case 10 requires |kappa| > -chi")
                self._require(not _close(x, k) and not _close(x, -k),
                              "case 10 requires chi != +-kappa")
        elif cid in ("11", "12"):
            need("kappa", k); need("chi", x)
            self._require(_close(x, k) or _close(x, -k), f"case {cid} requires chi = +-kappa")
            if cid == "11":
                self._require(x > _EQ_TOL, "case 11 requires chi = +-kappa > 0")
            else:
                self._require(x < -_EQ_TOL, "case 12 requires chi = +-kappa < 0")
        elif cid in ("13", "14", "15"):
            need("kappa", k); need("chi", x)
            self._require(not _is_zero(x), f"case {cid} requires chi != 0")
            self._require(k - x >= -_EQ_TOL,
                          f"case {cid} requires kappa >= chi (real structure constants)")
            if cid == "13":
                self._require(_close(k, -7.0 * x), "case 13 requires kappa = -7 chi")
            elif cid == "14":
                self._require(k < -7.0 * x, "case 14 requires kappa < -7 chi")
            else:
                self._require(k > -7.0 * x, "case 15 requires kappa > -7 chi")
        elif cid in ("16", "17", "18"):
            need("kappa", k); need("chi", x)
            self._require(not _is_zero(x), f"case {cid} requires chi != 0")
            self._require(-k - x >= -_EQ_TOL,
                          f"case {cid} requires kappa <= -chi (real structure constants)")
            if cid == "16":
                self._require(_close(k, 7.0 * x), "case 16 requires kappa = 7 chi")
            elif cid == "17":
                self._require(k > 7.0 * x, "case 17 requires kappa > 7 chi")
            else:
                self._require(k < 7.0 * x, "case 18 requires kappa < 7 chi")
        elif cid == "19":
            need("kappa", k); need("chi", x)
            self._require(not _is_zero(x), "case 19 requires chi != 0")

    @staticmethod
    def _require(cond: bool, message: str) -> None:
        if not cond:
            raise ValueError(message)

    @property
    def label(self) -> str:
        return CASE_LABELS[self.case_id]

    def h_matrix(self) -> np.ndarray:
        """Canonical 2x2 invariant pattern of the row (display use)."""
        cid, x = self.case_id, self.chi
        if cid in ("1", "2", "2*"):
            return np.zeros((2, 2))
        if cid in ("3", "4", "5", "6"):
            return np.array([[1.0, -1.0], [1.0, -1.0]]) if self.variant == 1 else np.array([[-1.0, -1.0], [1.0, 1.0]])
        if cid in ("7", "8"):
            return np.array([[1.0, 1.0], [-1.0, -1.0]]) if self.variant == 1 else np.array([[-1.0, 1.0], [-1.0, 1.0]])
        if cid == "19":
            return np.array([[x, 0.0], [0.0, -x]])
        return np.array([[0.0, -x], [x, 0.0]])

    def params(self) -> dict:
        out: dict = {}
        if self.kappa is not None:
            out["kappa"] = float(self.kappa)
        if self.tau is not None:
            out["tau"] = float(self.tau)
        if self.chi is not None:
            out["chi"] = float(self.chi)
        if self.case_id in ("3", "4", "5", "7"):
            out["variant"] = self.variant
        return out

    def structure_constants(self) -> np.ndarray:
        """The row's canonical 3x3 structure matrix."""
        cid, k, t, x = self.case_id, self.kappa, self.tau, self.chi
        if cid == "1":
            return np.array([[0., 0., 0.], [0., 0., 0.], [0., 0., 1.]])
        if cid == "2":
            return np.array([[0., k, 0.], [k, 0., 0.], [0., 0., 1.]])
        if cid == "2*":
            t0 = 0.0 if t is None else t
            s = math.sqrt(max(k + t0 * t0, 0.0))
            return np.array([[0., 0., 0.], [0., 0., 0.], [t0, s, 1.]])
        if cid in ("3", "4", "5", "7"):
            t0 = 2.0 if (cid == "3" and t is None) else t
            if self.variant == 1:
                return np.array([[1., 1., 0.], [-1., -1., 0.], [t0, t0, 1.]])
            return np.array([[1., -1., 0.], [1., -1., 0.], [t0, -t0, 1.]])
        if cid in ("6", "8"):
            s = 1.0 if cid == "6" else -1.0
            return np.array([[1., k - s, 0.], [k + s, -1., 0.], [0., 0., 1.]])
        if cid in ("9", "10"):
            return np.array([[0., k + x, 0.], [k - x, 0., 0.], [0., 0., 1.]])
        if cid in ("11", "12"):
            if _close(x, k):
                return np.array([[0., 2. * x, 0.], [0., 0., 0.], [0., 0., 1.]])
            return np.array([[0., 0., 0.], [-2. * x, 0., 0.], [0., 0., 1.]])
        if cid in ("13", "14", "15"):
            s = math.sqrt(max(k - x, 0.0))
            return np.array([[0., 2. * x, 0.], [0., 0., 0.], [0., s, 1.]])
        if cid in ("16", "17", "18"):
            s = math.sqrt(max(-k - x, 0.0))
            return np.array([[0., 0., 0.], [-2. * x, 0., 0.], [s, 0., 1.]])
        # case 19
        return np.array([[x, k, 0.], [k, -x, 0.], [0., 0., 1.]])


def algebra_from_structure_matrix(A, label: str = "") -> LieAlgebra3:
    """Invert the normalized-layout structure matrix back into bracket values."""
    A = np.asarray(A, dtype=float)
    if A.shape != (3, 3):
        raise ValueError("structure matrix must be 3x3")
    if abs(A[0, 2]) > _EQ_TOL or abs(A[1, 2]) > _EQ_TOL or abs(A[2, 2] - 1.0) > _EQ_TOL:
        raise ValueError("structure matrix is not in the normalized layout")
    if abs(A[0, 0] + A[1, 1]) > _EQ_TOL:
        raise ValueError("structure matrix must have a trace-free upper block")
    return LieAlgebra3(
        b12=(A[2, 0], A[2, 1], 1.0),
        b13=(A[0, 0], A[0, 1], 0.0),
        b23=(A[1, 0], A[1, 1], 0.0),
        label=label,
    )


def from_case(case: SubLorentzCase) -> LieAlgebra3:
    """Lie algebra of a classification-table row at its parameter point."""
    return algebra_from_structure_matrix(case.structure_constants(),
                                         label=f"case-{case.case_id}")


_BIANCHI = {
    "L(3,0)": lambda eta: ((0, 0, 0), (0, 0, 0), (0, 0, 0)),
    "L(3,1)": lambda eta: ((0, 0, 1), (0, 0, 0), (0, 0, 0)),
    "L(3,-1)": lambda eta: ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
    "L(3,2)": lambda eta: ((0, 0, 0), (1, 0, 0), (0, eta, 0)),
    "L(3,3)": lambda eta: ((0, 0, 0), (1, 0, 0), (1, 1, 0)),
    "L(3,4)": lambda eta: ((0, 0, 0), (eta, -1, 0), (1, eta, 0)),
    "L(3,5)": lambda eta: ((1, 0, 0), (0, -2, 0), (0, 0, 1)),
    "L(3,6)": lambda eta: ((0, 0, 1), (0, -1, 0), (1, 0, 0)),
}


def from_bianchi(label: str, eta: Optional[float] = None) -> LieAlgebra3:
    """Named 3D Lie algebra over generators (E1, E2, E3).

    ``eta`` is required for the one-parameter families ``L(3,2)``
    (0 < |eta| <= 1) and ``L(3,4)`` (eta >= 0) and rejected elsewhere.
    """
    if label not in _BIANCHI:
        raise ValueError(f"unknown algebra label {label!r}; expected one of {', '.join(_BIANCHI)}")
    if label == "L(3,2)":
        if eta is None or not (0.0 < abs(eta) <= 1.0):
            raise ValueError("L(3,2) requires eta with 0 < |eta| <= 1")
    elif label == "L(3,4)":
        if eta is None or eta < 0.0:
            raise ValueError("L(3,4) requires eta >= 0")
    elif eta is not None:
        raise ValueError(f"{label} does not take an eta parameter")
    b12, b13, b23 = _BIANCHI[label](eta)
    full_label = label if eta is None else f"{label[:-1]},{eta})"
    return LieAlgebra3(b12=b12, b13=b13, b23=b23, label=full_label)
