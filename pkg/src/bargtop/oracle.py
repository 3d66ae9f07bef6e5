"""Brute-force numerical ground truth at n <= 2.

Galerkin sections of the operator in the orthonormalized monomial basis,
direct quadrature of the Weyl heat flow, and coherent-state norms.  None
of it trusts the closed-form pipeline; agreement is the cross-check.

Quadrature design: integrands here are polynomials (or entire functions)
against a Gaussian e^{-t.Gt} whose exponent G is complex symmetric with
positive definite real part.  The rule therefore scales tensor
Gauss-Hermite nodes by G^{-1/2}: the nodes move onto a rotated contour on
which polynomial integrands are integrated exactly, with no cancellation.
A rule matched only to |e^{-t.Gt}| leaves an oscillatory factor whose
cancellation (condition number up to ~1e14 at basis size 40) destroys the
relative accuracy of the small matrix entries; the scaled rule does not.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import gammaln

from .errors import NotAbsolutelyConvergent, QuadratureDivergence
from .forms import ComplexQuadraticForm, Weight, quadratic_matrix
from .toeplitz import ToeplitzProblem

__all__ = [
    "QuadratureSpec",
    "TruncatedOperator",
    "truncated_matrix",
    "norm_trend",
    "is_plateau",
    "DecayEstimate",
    "singular_decay",
    "numeric_weyl",
    "numeric_coherent_norm",
]

_DEFAULT_ORDER = {1: 80, 2: 40}


@dataclass
class QuadratureSpec:
    rule: str
    order: int
    radius: float | None = None  # rules truncate themselves; kept for provenance


@dataclass
class TruncatedOperator:
    """Galerkin section of the operator in the monomial basis."""

    size: int
    t: np.ndarray
    spec: QuadratureSpec
    indices: list

    def spectral_norm(self) -> float:
        return float(np.linalg.svd(self.t, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# basis bookkeeping (diagonal Hermitian weights only)

def _block_complex(t):
    """Block realification (u_1..u_n, v_1..v_n) -> x = u + iv. Local to the
    oracle; distinct from the interleaved convention used elsewhere."""
    t = np.asarray(t, dtype=float)
    n = t.size // 2
    return t[:n] + 1j * t[n:]


def _require_oracle_weight(weight: Weight) -> np.ndarray:
    if not weight.is_hermitian:
        raise ValueError("oracle requires a weight without pluriharmonic part")
    h = weight.h
    off = h - np.diag(np.diag(h))
    if np.max(np.abs(off)) > 1e-13 * (np.max(np.abs(h)) + 1.0):
        raise ValueError(
            "oracle requires a diagonal Levi form; rotate coordinates unitarily first"
        )
    return np.real(np.diag(h))


def monomial_indices(n: int, size: int):
    """First ``size`` multi-indices ordered by total degree, then lexicographic."""
    if n == 1:
        return [(k,) for k in range(size)]
    idx = []
    deg = 0
    while len(idx) < size:
        layer = [a for a in itertools.product(range(deg + 1), repeat=n) if sum(a) == deg]
        idx.extend(sorted(layer))
        deg += 1
    return idx[:size]


def _log_monomial_norms_sq(hdiag, indices):
    """log ||x^alpha||^2 = sum_i log(pi alpha_i! / (2 h_i)^{alpha_i + 1})."""
    out = np.empty(len(indices))
    for j, alpha in enumerate(indices):
        out[j] = sum(
            math.log(math.pi) + gammaln(a + 1.0) - (a + 1.0) * math.log(2.0 * h)
            for a, h in zip(alpha, hdiag)
        )
    return out


def _monomials(points, indices, log_norms_sq):
    """Rows of normalized monomials evaluated at complex points (pts, n)."""
    out = np.empty((len(indices), points.shape[0]), dtype=complex)
    for j, alpha in enumerate(indices):
        vals = np.ones(points.shape[0], dtype=complex)
        for i, a in enumerate(alpha):
            if a:
                vals = vals * points[:, i] ** a
        out[j] = vals * math.exp(-0.5 * log_norms_sq[j])
    return out


# ---------------------------------------------------------------------------
# complex-scaled Gaussian rule

def _gaussian_exponent_matrix(problem: ToeplitzProblem) -> np.ndarray:
    """Complex symmetric matrix G with t.Gt = 2 Phi(x) - q(x) in block
    coordinates; its real part is positive definite exactly when the
    problem is admissible."""
    weight, q = problem.weight, problem.q

    def fn(t):
        x = _block_complex(t)
        return 2.0 * weight.value(x) - q.value(x)

    g = quadratic_matrix(fn, 2 * problem.n)
    re_eigs = np.linalg.eigvalsh(np.real(g))
    if re_eigs[0] <= 0.0:
        raise QuadratureDivergence(
            f"Gaussian weight is not integrable (min Re eigenvalue {re_eigs[0]:.3e})"
        )
    return g


def _scaled_rule(gmat: np.ndarray, order: int):
    """Substitution matrix M = G^{-1/2}, its det, and the 1d nodes/weights.

    integral of e^{-t.Gt} f(t) over R^m  =  det(M) * sum w_i f(M s_i)
    exactly for polynomial f of degree < 2*order.
    """
    sqrtg = scipy.linalg.sqrtm(gmat.astype(complex))
    minv = np.linalg.inv(sqrtg)
    detm = 1.0 / np.linalg.det(sqrtg)
    s, w = np.polynomial.hermite.hermgauss(order)
    return minv, complex(detm), s, w


def _tensor_product(s, w, dims):
    grids = np.meshgrid(*([s] * dims), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wg = np.meshgrid(*([w] * dims), indexing="ij")
    wts = np.prod(np.stack([g.ravel() for g in wg], axis=1), axis=1)
    return pts, wts


def _tensor_chunks(s, w, dims, max_points=500_000):
    """Yield (points, weights) pieces of the tensor rule; large rules are
    chunked on the first dimension to bound memory."""
    if dims == 1:
        yield s[:, None], w
        return
    if s.size ** dims <= max_points:
        yield _tensor_product(s, w, dims)
        return
    rest_pts, rest_w = _tensor_product(s, w, dims - 1)
    for i in range(s.size):
        pts = np.empty((rest_pts.shape[0], dims))
        pts[:, 0] = s[i]
        pts[:, 1:] = rest_pts
        yield pts, w[i] * rest_w


# ---------------------------------------------------------------------------
# truncated operator

def _is_radial(problem: ToeplitzProblem) -> bool:
    q = problem.q
    if problem.n != 1:
        return False
    scale = max(np.max(np.abs(q.qxbx)), 1.0)
    return (
        np.max(np.abs(q.qxx)) <= 1e-14 * scale
        and np.max(np.abs(q.qxbxb)) <= 1e-14 * scale
    )


def _radial_diagonal(problem: ToeplitzProblem, size: int, order: int) -> np.ndarray:
    """Diagonal entries for radial q at n=1 via Gauss-Laguerre on the
    rotated radial contour: entry k equals (2h/a)^{k+1} times an exact
    moment ratio, with a = 2h - lam."""
    h = float(np.real(problem.weight.h[0, 0]))
    lam = complex(problem.q.qxbx[0, 0])
    a = 2.0 * h - lam
    s, w = np.polynomial.laguerre.laggauss(order)
    ks = np.arange(size)
    # moment ratio  sum w s^k / k!  computed in log space, exact to rounding
    terms = np.exp(ks[:, None] * np.log(s)[None, :] - gammaln(ks + 1.0)[:, None])
    ratios = terms @ w
    scale = np.exp((ks + 1.0) * np.log(2.0 * h / a))
    return ratios * scale


def truncated_matrix(problem: ToeplitzProblem, size: int, order: int | None = None) -> TruncatedOperator:
    """T[j, k] = <e^q e_j, e_k> in the weighted inner product, for the
    orthonormalized monomial basis e_j.

    Rotation invariance makes the matrix exactly diagonal for radial q at
    n = 1, and those entries are computed by an exact 1d moment rule.
    """
    problem.require_admissible()
    if problem.n > 2:
        raise ValueError("oracle supports n <= 2")
    hdiag = _require_oracle_weight(problem.weight)
    if order is None:
        order = max(_DEFAULT_ORDER[problem.n], 2 * size)
    indices = monomial_indices(problem.n, size)

    if _is_radial(problem):
        order_radial = max(order, size + 10)
        t = np.diag(_radial_diagonal(problem, size, order_radial).astype(complex))
        spec = QuadratureSpec("gauss-laguerre-rotated", order_radial)
        return TruncatedOperator(size, t, spec, indices)

    gmat = _gaussian_exponent_matrix(problem)
    minv, detm, s, w = _scaled_rule(gmat, order)
    log_norms = _log_monomial_norms_sq(hdiag, indices)
    n = problem.n
    t = np.zeros((size, size), dtype=complex)
    for pts, wts in _tensor_chunks(s, w, 2 * n):
        tn = pts @ minv.T
        x = tn[:, :n] + 1j * tn[:, n:]
        xb = tn[:, :n] - 1j * tn[:, n:]  # analytic continuation of conj(x)
        sw = np.sqrt(wts)
        a = _monomials(x, indices, log_norms) * sw
        b = _monomials(xb, indices, log_norms) * sw
        t += a @ b.T
    t *= detm
    spec = QuadratureSpec("gauss-hermite-complex-scaled", order)
    return TruncatedOperator(size, t, spec, indices)


def norm_trend(problem: ToeplitzProblem, sizes) -> list:
    """Spectral norms of nested Galerkin sections; non-decreasing, and a
    plateau is the boundedness hint (never a verdict)."""
    sizes = sorted(int(s) for s in sizes)
    top = truncated_matrix(problem, sizes[-1])
    return [
        float(np.linalg.svd(top.t[:s, :s], compute_uv=False)[0]) for s in sizes
    ]


def is_plateau(norms, rtol: float = 1e-3) -> bool:
    """Relative increase below rtol between the last two sections."""
    if len(norms) < 2:
        return False
    a, b = norms[-2], norms[-1]
    return bool(b - a <= rtol * max(a, 1e-300))


@dataclass
class DecayEstimate:
    ratio: float
    singular_values: np.ndarray


def singular_decay(problem: ToeplitzProblem, size: int) -> DecayEstimate:
    """Least-squares geometric decay ratio of the singular values."""
    top = truncated_matrix(problem, size)
    sv = np.linalg.svd(top.t, compute_uv=False)
    keep = sv > sv[0] * 1e-12
    sv_kept = sv[keep]
    k = np.arange(sv_kept.size)
    if sv_kept.size < 2:
        return DecayEstimate(1.0, sv)
    slope = np.polyfit(k, np.log(sv_kept), 1)[0]
    return DecayEstimate(float(np.exp(slope)), sv)


# ---------------------------------------------------------------------------
# Weyl heat flow by direct convolution

def _q_values(q: ComplexQuadraticForm, xs: np.ndarray) -> np.ndarray:
    xb = np.conj(xs)
    return (
        0.5 * np.einsum("pi,ij,pj->p", xs, q.qxx, xs)
        + np.einsum("pi,ij,pj->p", xb, q.qxbx, xs)
        + 0.5 * np.einsum("pi,ij,pj->p", xb, q.qxbxb, xb)
    )


def numeric_weyl(problem: ToeplitzProblem, x, order: int | None = None) -> complex:
    """Weyl symbol at the graph point over x by Gaussian convolution.

    The heat flow is a convolution on R^{2n} with covariance built from
    H^{-1}/4; admissibility already guarantees absolute convergence, which
    is still checked and reported.
    """
    problem.require_admissible()
    n = problem.n
    if order is None:
        order = 150 if n == 1 else 40
    x = np.atleast_1d(np.asarray(x, dtype=complex))

    c = np.linalg.inv(problem.weight.h) / 4.0
    cr, ci = c.real, c.imag
    bmat = 0.5 * np.block([[cr, -ci], [ci, cr]])  # block (u; v) convention

    qre = quadratic_matrix(lambda t: problem.q.value(_block_complex(t)).real, 2 * n)
    shifted = qre - 0.5 * np.linalg.inv(bmat)
    if np.linalg.eigvalsh(shifted)[-1] >= 0.0:
        raise NotAbsolutelyConvergent(
            "shifted exponent of the convolution is not negative definite"
        )

    lmat = np.linalg.cholesky(bmat)
    s, w = np.polynomial.hermite.hermgauss(order)
    total = 0.0 + 0.0j
    for pts, wts in _tensor_chunks(s, w, 2 * n):
        wv = math.sqrt(2.0) * pts @ lmat.T
        wc = wv[:, :n] + 1j * wv[:, n:]
        total += np.sum(wts * np.exp(_q_values(problem.q, x[None, :] - wc)))
    return complex(total / math.pi ** n)


# ---------------------------------------------------------------------------
# coherent-state norms

def _coherent_coefficients(problem: ToeplitzProblem, w, nbasis: int, order: int):
    """Basis coefficients <e^q k_w, e_j> for the normalized coherent state
    k_w; their square sum is the squared norm of the operator image."""
    problem.require_admissible()
    hdiag = _require_oracle_weight(problem.weight)
    n = problem.n
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    indices = monomial_indices(n, nbasis)
    log_norms = _log_monomial_norms_sq(hdiag, indices)
    gmat = _gaussian_exponent_matrix(problem)
    minv, detm, s, wts1 = _scaled_rule(gmat, order)
    h = problem.weight.h
    wbar = np.conj(w)
    coeffs = np.zeros(nbasis, dtype=complex)
    for pts, wts in _tensor_chunks(s, wts1, 2 * n):
        tn = pts @ minv.T
        x = tn[:, :n] + 1j * tn[:, n:]
        xb = tn[:, :n] - 1j * tn[:, n:]
        kernel = np.exp(2.0 * (x @ h.T) @ wbar)  # e^{2 Psi(x, conj(w))}
        b = _monomials(xb, indices, log_norms)
        coeffs += b @ (wts * kernel)
    # coherent-state normalization ||k_w|| = 1: prefactor prod sqrt(2 h_i / pi)
    log_c = 0.5 * float(np.sum(np.log(2.0 * hdiag / math.pi)))
    coeffs *= detm * math.exp(log_c - problem.weight.value(w))
    return coeffs


def numeric_coherent_norm(
    problem: ToeplitzProblem, w, nbasis: int | None = None, order: int | None = None
) -> float:
    """Norm of the operator applied to the normalized coherent state at w,
    via basis expansion of the projected image (no stationary-phase
    constants involved)."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if nbasis is None:
        nbasis = 40 + int(6.0 * problem.weight.value(w))
    if order is None:
        order = max(120, 2 * nbasis + 20) if problem.n == 1 else 48
    coeffs = _coherent_coefficients(problem, w, nbasis, order)
    return float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))
