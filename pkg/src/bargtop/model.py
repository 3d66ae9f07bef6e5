"""The explicitly solvable family on the radial weight |x|^2 / 4.

Instances are q(x) = lam |x|^2 + A xbar.xbar with A complex symmetric.
Everything is closed form: admissibility is Re lam + ||A|| < 1/4, the
canonical transformation is triangular in gamma = 1/(1 - 2 lam), and the
operator is bounded iff 4 ||A|| <= (1 - |gamma|^2)/|gamma|^2, compact iff
the inequality is strict.  This family is the analytic ground truth the
general pipeline is validated against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleProblem
from .forms import ComplexQuadraticForm, Weight
from .symplectic import LinearCanonicalMap
from .toeplitz import (
    AGREEMENT_BAND,
    SubVerdict,
    ToeplitzProblem,
    Verdict,
    VerdictClass,
)

__all__ = [
    "ModelInstance",
    "model_problem",
    "detect_model",
    "classify_model",
    "model_subverdict",
    "closed_form_map",
    "positivity_coefficients",
]


@dataclass
class ModelInstance:
    """Parameters (lam, A) of one member of the radial family."""

    n: int
    lam: complex
    a: np.ndarray

    def __post_init__(self):
        self.lam = complex(self.lam)
        self.a = np.atleast_2d(np.asarray(self.a, dtype=complex))
        if self.a.shape != (self.n, self.n):
            raise ValueError("A must be n x n")
        if np.max(np.abs(self.a - self.a.T)) > 1e-12 * (np.max(np.abs(self.a)) + 1.0):
            raise ValueError("A must be symmetric")

    @property
    def gamma(self) -> complex:
        return 1.0 / (1.0 - 2.0 * self.lam)

    @property
    def norm_a(self) -> float:
        """Euclidean operator norm of A (largest singular value)."""
        return float(np.linalg.svd(self.a, compute_uv=False)[0])

    @property
    def admissibility_margin(self) -> float:
        return float(0.25 - self.lam.real - self.norm_a)

    @property
    def is_admissible(self) -> bool:
        return self.admissibility_margin > 0.0

    @property
    def boundedness_margin(self) -> float:
        """(1 - |gamma|^2)/|gamma|^2 - 4 ||A||; sign decides the verdict."""
        g2 = abs(self.gamma) ** 2
        return float((1.0 - g2) / g2 - 4.0 * self.norm_a)


def model_problem(instance: ModelInstance) -> ToeplitzProblem:
    """The instance as a general problem on the weight |x|^2 / 4."""
    n = instance.n
    q = ComplexQuadraticForm(
        np.zeros((n, n)), instance.lam * np.eye(n), 2.0 * instance.a
    )
    return ToeplitzProblem(Weight.model(n), q)


def detect_model(problem: ToeplitzProblem, tol: float = 1e-12) -> ModelInstance | None:
    """Recognize a problem of the radial family; None when it is not one."""
    n = problem.n
    w = problem.weight
    scale_h = np.max(np.abs(w.h)) + 1.0
    if np.max(np.abs(w.h - np.eye(n) / 4.0)) > tol * scale_h or not w.is_hermitian:
        return None
    q = problem.q
    scale_q = max(np.max(np.abs(q.qxx)), np.max(np.abs(q.qxbx)), np.max(np.abs(q.qxbxb)), 1.0)
    if np.max(np.abs(q.qxx)) > tol * scale_q:
        return None
    lam = complex(np.trace(q.qxbx) / n)
    if np.max(np.abs(q.qxbx - lam * np.eye(n))) > tol * scale_q:
        return None
    return ModelInstance(n, lam, q.qxbxb / 2.0)


def classify_model(instance: ModelInstance, band: float = AGREEMENT_BAND) -> Verdict:
    """Closed-form verdict: unbounded / bounded-not-compact / compact by
    the sign of the boundedness margin, with a tolerance band around the
    equality case."""
    if not instance.is_admissible:
        raise InadmissibleProblem(
            f"Re lam + ||A|| = {instance.lam.real + instance.norm_a:.6f} >= 1/4"
        )
    sub = model_subverdict(instance, band)
    return Verdict(sub.verdict, margin=sub.margin, boundary=not sub.confident,
                   witnesses={"model": sub})


def model_subverdict(instance: ModelInstance, band: float = AGREEMENT_BAND) -> SubVerdict:
    m = instance.boundedness_margin
    g2 = abs(instance.gamma) ** 2
    scale = max(1.0, abs((1.0 - g2) / g2), 4.0 * instance.norm_a)
    if m > band * scale:
        verdict = VerdictClass.COMPACT
    elif m < -band * scale:
        verdict = VerdictClass.UNBOUNDED
    else:
        verdict = VerdictClass.BOUNDED_NOT_COMPACT
    return SubVerdict("model", verdict, m, scale)


def closed_form_map(instance: ModelInstance) -> LinearCanonicalMap:
    """(y, eta) -> (y/gamma - 8i gamma A eta, gamma eta)."""
    if not instance.is_admissible:
        raise InadmissibleProblem("closed-form map defined for admissible instances")
    n = instance.n
    g = instance.gamma
    eye = np.eye(n)
    k = np.block([
        [eye / g, -8j * g * instance.a],
        [np.zeros((n, n)), g * eye],
    ])
    return LinearCanonicalMap(k)


def positivity_coefficients(instance: ModelInstance):
    """Coefficients (a, b, c) of the completed-square reduction of the
    positivity form, valid when |gamma| < 1, and the boundedness verdict
    c |eta|^2 >= (|a|^2 - b) |A eta|^2 they encode.

    a = 8|g|^2/(1-|g|^2) * g/conj(g),  b = 64|g|^4/(1-|g|^2),
    c = 4|g|^2, and |a|^2 - b = 64|g|^6/(1-|g|^2)^2.
    """
    g = instance.gamma
    g2 = abs(g) ** 2
    if g2 >= 1.0:
        raise ValueError("the completed-square reduction assumes |gamma| < 1")
    a = 8.0 * g2 / (1.0 - g2) * (g / np.conj(g))
    b = 64.0 * g2 ** 2 / (1.0 - g2)
    c = 4.0 * g2
    excess = abs(a) ** 2 - b  # = 64 |g|^6 / (1 - |g|^2)^2 > 0
    ok = bool(c >= excess * instance.norm_a ** 2)
    return complex(a), float(b), float(c), ok
