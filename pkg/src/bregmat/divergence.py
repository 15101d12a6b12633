"""The trace Bregman divergence of positive matrices.

Four independent representations are implemented and kept as separate
code paths on purpose; their pairwise agreement is a correctness check,
so none may be expressed through another:

* ``closed``       trace of f(X) - f(Y) - f'(Y)(X - Y)
* ``eigen``        double sum over both spectra weighted by eigenvector
                   overlaps
* ``integral-1d``  quadrature over s of (1-s) <X-Y, Df'[Y+s(X-Y)](X-Y)>
* ``integral-2d``  double quadrature with the second derivative of the
                   left/right multiplication mixture

``bregman_extended`` evaluates the continuity extension to positive
semidefinite matrices analytically: divergent boundary slopes produce the
value +inf instead of an overflow.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calculus import gauss_legendre_01
from .errors import ContractViolation, DomainError, UnsupportedFamilyError
from .functions import ScalarFunctionFamily, divided_difference, scalar_eval
from .linalg import as_hermitian, eigh

METHODS = ("closed", "eigen", "integral-1d", "integral-2d")

PSD_EIGENVALUE_FLOOR = -1e-10  # below this a matrix is rejected as not PSD
ZERO_EIGENVALUE_ATOL = 1e-11  # eigenvalues at or below this count as zero
ZERO_OVERLAP_ATOL = 1e-12  # squared overlaps at or below this count as zero


@dataclass(frozen=True)
class DivergenceValue:
    """A divergence value, the representation that produced it, and (when
    several representations were evaluated) the residual to ``closed``."""

    value: float
    method: str
    residual_to_closed: Optional[float] = None

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)


def _checked_pair(x, y):
    x = as_hermitian(x)
    y = as_hermitian(y)
    if x.shape != y.shape:
        raise ContractViolation(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def _strict_pd_pair(x, y):
    x, y = _checked_pair(x, y)
    dx, dy = eigh(x), eigh(y)
    low = min(float(dx.eigenvalues.min()), float(dy.eigenvalues.min()))
    if low <= ZERO_EIGENVALUE_ATOL:
        raise DomainError(
            f"inputs must be strictly positive definite (min eigenvalue {low:.3e}); "
            f"use bregman_extended for positive semidefinite matrices"
        )
    return x, y, dx, dy


def _closed(fam, x, y, dx, dy):
    tr_fx = float(np.sum(scalar_eval(fam, 0, dx.eigenvalues)))
    tr_fy = float(np.sum(scalar_eval(fam, 0, dy.eigenvalues)))
    uy = dy.eigenvectors
    fprime_y = (uy * scalar_eval(fam, 1, dy.eigenvalues)) @ uy.conj().T
    correction = float(np.real(np.sum(fprime_y * (x - y).T)))
    return tr_fx - tr_fy - correction


def _eigen(fam, x, y, dx, dy):
    lam = dx.eigenvalues
    mu = dy.eigenvalues
    overlap = np.abs(dx.eigenvectors.conj().T @ dy.eigenvectors) ** 2
    f_lam = scalar_eval(fam, 0, lam)
    f_mu = scalar_eval(fam, 0, mu)
    fp_mu = scalar_eval(fam, 1, mu)
    terms = f_lam[:, None] - f_mu[None, :] - fp_mu[None, :] * (lam[:, None] - mu[None, :])
    return float(np.sum(overlap * terms))


def _quadratic_form_along(fam, y, delta, s, second_order):
    """<delta, K(Y + s delta) delta> where K is the divided-difference kernel
    of f' (exact) or its inner t-quadrature (second_order=True)."""
    dec = eigh(y + s * delta)
    lam = dec.eigenvalues
    if float(lam.min()) <= ZERO_EIGENVALUE_ATOL:
        raise DomainError(
            f"segment point at s={s:.4f} is not strictly positive definite"
        )
    if second_order:
        t, wt = gauss_legendre_01()
        mix = t[None, None, :] * lam[:, None, None] + (1.0 - t[None, None, :]) * lam[None, :, None]
        kernel = np.einsum("ijt,t->ij", scalar_eval(fam, 2, mix), wt)
    else:
        kernel = divided_difference(fam, 1, lam[:, None], lam[None, :])
    u = dec.eigenvectors
    d_tilde = u.conj().T @ delta @ u
    return float(np.sum(kernel * np.abs(d_tilde) ** 2))


def _integral(fam, x, y, second_order):
    delta = x - y
    s_nodes, s_weights = gauss_legendre_01()
    total = 0.0
    for s, w in zip(s_nodes, s_weights):
        total += w * (1.0 - s) * _quadratic_form_along(fam, y, delta, s, second_order)
    return float(total)


def bregman(fam: ScalarFunctionFamily, x, y, method: str = "closed") -> DivergenceValue:
    """Bregman divergence of strictly positive definite X, Y via one of the
    four representations in :data:`METHODS`."""
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}, expected one of {METHODS}")
    x, y, dx, dy = _strict_pd_pair(x, y)
    if method == "closed":
        value = _closed(fam, x, y, dx, dy)
    elif method == "eigen":
        value = _eigen(fam, x, y, dx, dy)
    elif method == "integral-1d":
        value = _integral(fam, x, y, second_order=False)
    else:
        value = _integral(fam, x, y, second_order=True)
    return DivergenceValue(value=value, method=method)


def all_methods(fam: ScalarFunctionFamily, x, y) -> dict:
    """Evaluate every representation; residuals are measured against ``closed``."""
    results = {}
    closed = bregman(fam, x, y, "closed")
    results["closed"] = DivergenceValue(closed.value, "closed", 0.0)
    for method in METHODS[1:]:
        v = bregman(fam, x, y, method)
        results[method] = DivergenceValue(v.value, method, abs(v.value - closed.value))
    return results


def bregman_extended(fam: ScalarFunctionFamily, x, y) -> DivergenceValue:
    """Continuity extension of the divergence to positive semidefinite X, Y.

    Evaluates the regularized limit analytically through the eigen
    representation.  A zero eigenvalue of Y seen by a nonzero eigenvalue of
    X through a nonvanishing overlap contributes the boundary slope of f:
    finite slope gives a finite term, a divergent slope gives +inf.
    """
    if not fam.continuous_at_zero:
        raise UnsupportedFamilyError(
            f"{fam.label} does not extend continuously to zero"
        )
    x, y = _checked_pair(x, y)
    dx, dy = eigh(x), eigh(y)
    for name, vals in (("X", dx.eigenvalues), ("Y", dy.eigenvalues)):
        if float(vals.min()) < PSD_EIGENVALUE_FLOOR:
            raise DomainError(
                f"{name} is not positive semidefinite (min eigenvalue {float(vals.min()):.3e})"
            )

    lam = np.where(dx.eigenvalues <= ZERO_EIGENVALUE_ATOL, 0.0, dx.eigenvalues)
    mu = np.where(dy.eigenvalues <= ZERO_EIGENVALUE_ATOL, 0.0, dy.eigenvalues)
    overlap = np.abs(dx.eigenvectors.conj().T @ dy.eigenvectors) ** 2
    coupled = overlap > ZERO_OVERLAP_ATOL

    lam_pos = lam > 0.0
    mu_pos = mu > 0.0
    kernel_hit = coupled & lam_pos[:, None] & ~mu_pos[None, :]
    if np.any(kernel_hit) and fam.fprime_at_zero == -math.inf:
        return DivergenceValue(value=math.inf, method="eigen")

    f_lam = np.where(lam_pos, fam.f(np.where(lam_pos, lam, 1.0)), fam.f_at_zero)
    f_mu = np.where(mu_pos, fam.f(np.where(mu_pos, mu, 1.0)), fam.f_at_zero)
    fp_mu = np.where(mu_pos, fam.fprime(np.where(mu_pos, mu, 1.0)), fam.fprime_at_zero)
    # -inf * 0 products below are masked out; silence the transient NaNs
    with np.errstate(invalid="ignore"):
        terms = f_lam[:, None] - f_mu[None, :] - fp_mu[None, :] * (lam[:, None] - mu[None, :])
        # coincident zero eigenvalues contribute exactly zero in the limit
        zero_pair = ~lam_pos[:, None] & ~mu_pos[None, :]
        terms = np.where(zero_pair, 0.0, terms)
        value = float(np.sum(np.where(coupled, overlap * terms, 0.0)))
    return DivergenceValue(value=value, method="eigen")


def tsallis_closed_form(q: float, a, b) -> float:
    """Closed form of the deformed-logarithm divergence for q != 1:
    Tr B^q + (Tr A^q - q Tr A B^(q-1)) / (q - 1), on positive definite input."""
    if abs(q - 1.0) <= 1e-9:
        raise DomainError("q = 1 has no power-form expression; use the entropy family")
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    da, db = eigh(a), eigh(b)
    low = min(float(da.eigenvalues.min()), float(db.eigenvalues.min()))
    if low <= ZERO_EIGENVALUE_ATOL:
        raise DomainError(f"inputs must be positive definite (min eigenvalue {low:.3e})")
    tr_aq = float(np.sum(da.eigenvalues**q))
    tr_bq = float(np.sum(db.eigenvalues**q))
    ub = db.eigenvectors
    b_pow = (ub * db.eigenvalues ** (q - 1.0)) @ ub.conj().T
    tr_ab = float(np.real(np.sum(a * b_pow.T)))
    return tr_bq + (tr_aq - q * tr_ab) / (q - 1.0)
