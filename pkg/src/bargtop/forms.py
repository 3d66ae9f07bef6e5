"""Complex quadratic forms on C^n, plurisubharmonic weights, and their
polarizations on C^{2n}.

Conventions (fixed once, used everywhere):

* A complex quadratic form is stored as three matrix blocks,

      q(x) = (1/2) x.Qxx x + xbar.Qxbx x + (1/2) xbar.Qxbxb xbar,

  with Qxx and Qxbxb symmetric.  The stored blocks then equal the
  Hessian blocks of q in (x, xbar).

* A weight is Phi(x) = xbar.H x + Re(x.P x) with H Hermitian positive
  definite (the Levi form) and P complex symmetric (the pluriharmonic
  coefficient).

* Realification C^m -> R^{2m} interleaves (Re z_1, Im z_1, Re z_2, ...),
  so every derived real matrix is reproducible bit for bit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ComplexQuadraticForm",
    "Weight",
    "PolarizedForm",
    "Admissibility",
    "polarize",
    "check_admissible",
    "split_herm_plh",
    "check_polar_nondegenerate",
    "classification_tolerance",
    "interleave",
    "uninterleave",
    "quadratic_matrix",
    "real_part_matrix",
    "classify_real_form",
]

_SYM_TOL = 1e-12
# degeneracy rejection at construction is not subject to the TOEPLITZ_TOL
# override; a wide classification band must not invalidate every weight
_DEGENERACY_TOL = 1e-9


def classification_tolerance() -> float:
    """Relative eigenvalue tolerance for definiteness decisions.

    Defaults to 1e-9; the environment variable TOEPLITZ_TOL overrides it.
    """
    return float(os.environ.get("TOEPLITZ_TOL", "1e-9"))


def interleave(z):
    """C^m -> R^{2m}, (Re z_1, Im z_1, Re z_2, Im z_2, ...)."""
    z = np.asarray(z, dtype=complex)
    t = np.empty(2 * z.size)
    t[0::2] = z.real
    t[1::2] = z.imag
    return t


def uninterleave(t):
    """Inverse of :func:`interleave`."""
    t = np.asarray(t, dtype=float)
    return t[0::2] + 1j * t[1::2]


def quadratic_matrix(fn, m):
    """Matrix of a homogeneous quadratic function on R^m.

    ``fn`` maps a length-m real vector to a scalar (real or complex) and
    must be a quadratic form; the matrix is recovered from evaluations on
    basis vectors and pair sums, so no block algebra can go wrong.
    """
    eye = np.eye(m)
    diag = np.array([fn(eye[a]) for a in range(m)])
    out = np.zeros((m, m), dtype=np.result_type(diag.dtype, float))
    for a in range(m):
        out[a, a] = diag[a]
        for b in range(a + 1, m):
            cross = (fn(eye[a] + eye[b]) - diag[a] - diag[b]) / 2.0
            out[a, b] = cross
            out[b, a] = cross
    if np.iscomplexobj(out) and np.max(np.abs(out.imag)) == 0.0:
        out = out.real
    return out


def classify_real_form(mat, tol=None):
    """Eigenvalue classification of a real symmetric matrix.

    Returns ``(label, margin, scale)`` where margin is the smallest
    eigenvalue, scale the largest magnitude eigenvalue, and label one of
    ``"definite"``, ``"semidefinite"``, ``"indefinite"``.  Eigenvalues
    within ``tol*scale`` of zero count as zero.
    """
    if tol is None:
        tol = classification_tolerance()
    eigs = np.linalg.eigvalsh(np.asarray(mat, dtype=float))
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    margin = float(eigs[0]) if eigs.size else 0.0
    band = tol * scale
    if scale <= 1e-13:
        # the whole matrix is rounding noise; it represents the zero form
        label = "semidefinite"
    elif margin > band:
        label = "definite"
    elif margin < -band:
        label = "indefinite"
    else:
        label = "semidefinite"
    return label, margin, scale


def _check_symmetric(mat, name):
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {mat.shape}")
    scale = np.max(np.abs(mat)) + 1.0
    if np.max(np.abs(mat - mat.T)) > _SYM_TOL * scale:
        raise ValueError(f"{name} must be symmetric")
    return (mat + mat.T) / 2.0


@dataclass
class ComplexQuadraticForm:
    """q(x) = (1/2) x.qxx x + xbar.qxbx x + (1/2) xbar.qxbxb xbar."""

    qxx: np.ndarray
    qxbx: np.ndarray
    qxbxb: np.ndarray

    def __post_init__(self):
        self.qxx = _check_symmetric(self.qxx, "qxx")
        self.qxbxb = _check_symmetric(self.qxbxb, "qxbxb")
        self.qxbx = np.asarray(self.qxbx, dtype=complex)
        n = self.qxx.shape[0]
        if self.qxbx.shape != (n, n) or self.qxbxb.shape != (n, n):
            raise ValueError("block dimensions disagree")

    @property
    def n(self) -> int:
        return self.qxx.shape[0]

    @classmethod
    def zero(cls, n: int) -> "ComplexQuadraticForm":
        z = np.zeros((n, n), dtype=complex)
        return cls(z.copy(), z.copy(), z.copy())

    def value(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        xb = np.conj(x)
        return complex(
            0.5 * x @ self.qxx @ x + xb @ self.qxbx @ x + 0.5 * xb @ self.qxbxb @ xb
        )

    def is_real_valued(self, tol: float = 1e-12) -> bool:
        """True iff Im q(x) = 0 for all x: qxbxb = conj(qxx), qxbx Hermitian."""
        scale = max(
            np.max(np.abs(self.qxx)), np.max(np.abs(self.qxbx)),
            np.max(np.abs(self.qxbxb)), 1.0,
        )
        ok_outer = np.max(np.abs(self.qxbxb - np.conj(self.qxx))) <= tol * scale
        ok_mixed = np.max(np.abs(self.qxbx - self.qxbx.conj().T)) <= tol * scale
        return bool(ok_outer and ok_mixed)

    def __add__(self, other):
        return ComplexQuadraticForm(
            self.qxx + other.qxx, self.qxbx + other.qxbx, self.qxbxb + other.qxbxb
        )

    def __sub__(self, other):
        return ComplexQuadraticForm(
            self.qxx - other.qxx, self.qxbx - other.qxbx, self.qxbxb - other.qxbxb
        )

    def __rmul__(self, c):
        return ComplexQuadraticForm(c * self.qxx, c * self.qxbx, c * self.qxbxb)


def real_part_matrix(form: ComplexQuadraticForm) -> np.ndarray:
    """Re(form) as a real symmetric 2n x 2n matrix in interleaved coordinates."""
    m = 2 * form.n
    return quadratic_matrix(lambda t: form.value(uninterleave(t)).real, m)


@dataclass
class Weight:
    """Strictly plurisubharmonic quadratic weight Phi(x) = xbar.H x + Re(x.P x)."""

    h: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=complex)
        n = self.h.shape[0]
        if self.h.shape != (n, n):
            raise ValueError("h must be square")
        scale = np.max(np.abs(self.h)) + 1.0
        if np.max(np.abs(self.h - self.h.conj().T)) > _SYM_TOL * scale:
            raise ValueError("h must be Hermitian")
        self.h = (self.h + self.h.conj().T) / 2.0
        eigs = np.linalg.eigvalsh(self.h)
        if eigs[0] <= _DEGENERACY_TOL * eigs[-1]:
            raise ValueError(
                f"weight is not strictly plurisubharmonic: min Levi eigenvalue {eigs[0]:.3e}"
            )
        self.p = _check_symmetric(self.p, "p")
        if self.p.shape != (n, n):
            raise ValueError("p must match the dimension of h")

    @property
    def n(self) -> int:
        return self.h.shape[0]

    @classmethod
    def model(cls, n: int = 1) -> "Weight":
        """The radial weight |x|^2 / 4."""
        return cls(np.eye(n) / 4.0, np.zeros((n, n)))

    @property
    def is_hermitian(self) -> bool:
        """True when the pluriharmonic part vanishes."""
        return float(np.max(np.abs(self.p))) <= 1e-14 * (np.max(np.abs(self.h)) + 1.0)

    def value(self, x) -> float:
        x = np.asarray(x, dtype=complex)
        return float((np.conj(x) @ self.h @ x).real + (x @ self.p @ x).real)

    def herm_value(self, x) -> float:
        """The Hermitian part, (Phi(x) + Phi(ix)) / 2 = xbar.H x."""
        x = np.asarray(x, dtype=complex)
        return float((np.conj(x) @ self.h @ x).real)

    def grad_x(self, x) -> np.ndarray:
        """Holomorphic gradient dPhi/dx = conj(H) xbar + P x."""
        x = np.asarray(x, dtype=complex)
        return np.conj(self.h) @ np.conj(x) + self.p @ x

    def as_form(self) -> ComplexQuadraticForm:
        """The weight rewritten as a complex quadratic form in (x, xbar)."""
        return ComplexQuadraticForm(self.p.copy(), self.h.copy(), np.conj(self.p))


@dataclass
class PolarizedForm:
    """Holomorphic quadratic form on C^{2n} obtained by the substitution
    xbar -> theta; restriction to theta = conj(y) recovers the source form.

    G(y, theta) = (1/2) y.gyy y + theta.gty y + (1/2) theta.gtt theta
    """

    gyy: np.ndarray
    gty: np.ndarray
    gtt: np.ndarray

    def __post_init__(self):
        self.gyy = _check_symmetric(self.gyy, "gyy")
        self.gtt = _check_symmetric(self.gtt, "gtt")
        self.gty = np.asarray(self.gty, dtype=complex)

    @property
    def n(self) -> int:
        return self.gyy.shape[0]

    def value(self, y, theta) -> complex:
        y = np.asarray(y, dtype=complex)
        theta = np.asarray(theta, dtype=complex)
        return complex(
            0.5 * y @ self.gyy @ y + theta @ self.gty @ y + 0.5 * theta @ self.gtt @ theta
        )

    def hessian(self) -> np.ndarray:
        """Full 2n x 2n Hessian in (y, theta)."""
        return np.block([[self.gyy, self.gty.T], [self.gty, self.gtt]])


def polarize(form) -> PolarizedForm:
    """Polarization of a quadratic form (or weight) on C^n.

    The unique holomorphic quadratic form on C^{2n} that equals the input
    on the anti-diagonal theta = conj(y).
    """
    if isinstance(form, Weight):
        form = form.as_form()
    return PolarizedForm(form.qxx.copy(), form.qxbx.copy(), form.qxbxb.copy())


def split_herm_plh(weight: Weight):
    """Split off the pluriharmonic part.

    Returns ``(herm, a_matrix)`` where ``herm`` has the same Levi form and
    no pluriharmonic part, and ``a_matrix = (2/i) P`` is the shear
    coefficient that moves the weight's phase-space graph onto the
    Hermitian one.
    """
    herm = Weight(weight.h.copy(), np.zeros_like(weight.p))
    a_matrix = -2j * weight.p
    return herm, a_matrix


@dataclass
class Admissibility:
    """Outcome of the two admissibility checks for a (weight, form) pair."""

    ok: bool
    herm_margin: float
    det_margin: float
    failures: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def check_admissible(weight: Weight, q: ComplexQuadraticForm, tol=None) -> Admissibility:
    """Check that Re q is strictly dominated by the Hermitian part of the
    weight and that the mixed Hessian of (2 Phi - q) is invertible.

    ``herm_margin`` is the smallest eigenvalue of the real form of
    (Phi_herm - Re q); ``det_margin`` is |det(2H - Qxbx)| normalized by the
    matrix scale.  Both must exceed the classification tolerance.
    """
    if tol is None:
        tol = classification_tolerance()
    if weight.n != q.n:
        raise ValueError("dimension mismatch between weight and form")
    herm_form = ComplexQuadraticForm(
        np.zeros_like(weight.h), weight.h.copy(), np.zeros_like(weight.h)
    )
    gap = real_part_matrix(herm_form - q)
    eigs = np.linalg.eigvalsh(gap)
    scale = float(np.max(np.abs(eigs))) if np.max(np.abs(eigs)) > 0 else 1.0
    herm_margin = float(eigs[0])

    d = 2.0 * weight.h - q.qxbx
    dscale = float(np.linalg.norm(d, 2))
    det_margin = float(abs(np.linalg.det(d)) / max(dscale, 1e-300) ** weight.n)

    failures = []
    if herm_margin <= tol * scale:
        failures.append(
            f"Re q - Phi_herm has a nonnegative direction (margin {herm_margin:.3e})"
        )
    if det_margin <= tol:
        failures.append(
            f"mixed Hessian of 2*Phi - q is numerically singular (margin {det_margin:.3e})"
        )
    return Admissibility(not failures, herm_margin, det_margin, failures)


def check_polar_nondegenerate(g: ComplexQuadraticForm, tol: float = 1e-12) -> bool:
    """Non-degeneracy of the polarization of a form with Re g < 0.

    Raises ValueError when the precondition Re g < 0 fails; a False return
    on a valid input signals a numerical failure, not mathematics.
    """
    label, margin, _scale = classify_real_form(-real_part_matrix(g))
    if label != "definite":
        raise ValueError(
            f"Re g is not negative definite (min eigenvalue of Re g = {-margin:.6e})"
        )
    hess = polarize(g).hessian()
    sv = np.linalg.svd(hess, compute_uv=False)
    return bool(sv[-1] > tol * sv[0])
