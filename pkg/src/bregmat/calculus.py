"""Standard matrix functions and their Fréchet derivatives.

Three equivalent computational routes are provided and cross-checked by
the test suite:

* the divided-difference (Schur multiplier) form in the eigenbasis of the
  base point,
* the left/right-multiplication mixture f''(t L_A + (1-t) R_A), and
* the superoperator matrix of B -> Df'[A](B) in a fixed orthonormal
  Hermitian basis, which makes maps at different base points directly
  comparable in the semidefinite order.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConditioningError, ContractViolation, DomainError
from .functions import ScalarFunctionFamily, divided_difference, scalar_eval
from .linalg import as_hermitian, eigh

EIGENVALUE_ZERO_ATOL = 1e-11
QUADRATURE_NODES = 64


@lru_cache(maxsize=None)
def gauss_legendre_01(nodes: int = QUADRATURE_NODES):
    """Gauss-Legendre nodes and weights on [0, 1]; fixed count keeps runs deterministic."""
    x, w = leggauss(nodes)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def hermitian_basis(n: int) -> np.ndarray:
    """Orthonormal real basis of the n x n Hermitian matrices, shape (n^2, n, n).

    Order: diagonal units E_ii, then (E_ij + E_ji)/sqrt2 and
    i(E_ij - E_ji)/sqrt2 for i < j in lexicographic order.  The basis is
    expressed in standard coordinates, never in any eigenbasis, so
    superoperators at different base points share one representation.
    """
    basis = np.zeros((n * n, n, n), dtype=np.complex128)
    k = 0
    for i in range(n):
        basis[k, i, i] = 1.0
        k += 1
    s = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            basis[k, i, j] = s
            basis[k, j, i] = s
            k += 1
    for i in range(n):
        for j in range(i + 1, n):
            basis[k, i, j] = 1j * s
            basis[k, j, i] = -1j * s
            k += 1
    basis.flags.writeable = False
    return basis


def to_basis_coords(h) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in :func:`hermitian_basis`."""
    a = as_hermitian(h)
    basis = hermitian_basis(a.shape[0])
    return np.einsum("kij,ji->k", basis, a).real


def from_basis_coords(coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    n = int(round(np.sqrt(coords.shape[0])))
    if n * n != coords.shape[0]:
        raise ContractViolation(f"coordinate vector length {coords.shape[0]} is not a square")
    return np.einsum("k,kij->ij", coords, hermitian_basis(n))


def _positive_spectrum(fam, dec, order):
    """Domain-check eigenvalues; zeros are legal only for order 0 of a family
    that extends continuously to 0."""
    vals = dec.eigenvalues
    zero = np.abs(vals) <= EIGENVALUE_ZERO_ATOL
    if np.any(vals < -EIGENVALUE_ZERO_ATOL):
        raise DomainError(
            f"eigenvalue {float(vals.min()):.6e} outside the domain of {fam.label}"
        )
    if np.any(zero) and not (order == 0 and fam.continuous_at_zero):
        raise DomainError(
            f"singular matrix (eigenvalue {float(vals[zero][0]):.3e}) needs a family "
            f"continuous at zero; {fam.label} order {order} does not qualify"
        )
    return vals, zero


def matrix_function(fam: ScalarFunctionFamily, order: int, a) -> np.ndarray:
    """U diag(g(lambda)) U* with g = f, f' or f''; unitary covariant."""
    dec = eigh(a)
    vals, zero = _positive_spectrum(fam, dec, order)
    g = np.empty_like(vals)
    if np.any(zero):
        g[zero] = fam.f_at_zero
    pos = ~zero
    if np.any(pos):
        g[pos] = scalar_eval(fam, order, vals[pos])
    u = dec.eigenvectors
    return (u * g) @ u.conj().T


def _strictly_pd(fam, a):
    dec = eigh(a)
    if np.any(dec.eigenvalues <= EIGENVALUE_ZERO_ATOL):
        raise DomainError(
            f"base point must be strictly positive definite for {fam.label}: "
            f"min eigenvalue {float(dec.eigenvalues.min()):.3e}"
        )
    return dec


def frechet_derivative(fam: ScalarFunctionFamily, order: int, a, b) -> np.ndarray:
    """Directional derivative of the matrix function f (order 0) or f' (order 1)
    at the positive definite base point ``a`` in the Hermitian direction ``b``.

    Computed as a Schur product with the divided-difference kernel in the
    eigenbasis of ``a``; linear in ``b`` and Hermitian.
    """
    dec = _strictly_pd(fam, a)
    b = as_hermitian(b)
    if b.shape != np.asarray(a).shape:
        raise ContractViolation(f"dimension mismatch: {np.asarray(a).shape} vs {b.shape}")
    lam = dec.eigenvalues
    kernel = divided_difference(fam, order, lam[:, None], lam[None, :])
    u = dec.eigenvectors
    b_tilde = u.conj().T @ b @ u
    return u @ (kernel * b_tilde) @ u.conj().T


def lr_apply(fam: ScalarFunctionFamily, a, t: float, b) -> np.ndarray:
    """Apply f''(t L_A + (1-t) R_A) to ``b``, where L_A/R_A are left/right
    multiplication by the positive definite matrix ``a``.

    In the eigenbasis of ``a`` this multiplies entry (i, j) by
    f''(t lambda_i + (1-t) lambda_j).
    """
    dec = _strictly_pd(fam, a)
    b = as_hermitian(b)
    lam = dec.eigenvalues
    mix = t * lam[:, None] + (1.0 - t) * lam[None, :]
    kernel = scalar_eval(fam, 2, mix)
    u = dec.eigenvectors
    b_tilde = u.conj().T @ b @ u
    return u @ (kernel * b_tilde) @ u.conj().T


@dataclass(frozen=True)
class Superoperator:
    """A Hilbert-Schmidt-self-adjoint linear map on Hermitian n x n matrices,
    stored as its real symmetric n^2 x n^2 matrix in :func:`hermitian_basis`."""

    n: int
    mat: np.ndarray

    def apply(self, h) -> np.ndarray:
        return from_basis_coords(self.mat @ to_basis_coords(h))


def superoperator_of(fam: ScalarFunctionFamily, a) -> Superoperator:
    """Matrix of B -> Df'[A](B) in the fixed Hermitian basis.

    Its eigenvalues are the divided differences of f' over pairs of
    eigenvalues of ``a``, so f'' > 0 on the spectrum makes it positive
    definite.
    """
    dec = _strictly_pd(fam, a)
    lam = dec.eigenvalues
    u = dec.eigenvectors
    n = lam.shape[0]
    kernel = divided_difference(fam, 1, lam[:, None], lam[None, :])
    basis = hermitian_basis(n)
    g_tilde = np.einsum("ij,bjk,kl->bil", u.conj().T, basis, u)
    mapped = np.einsum("ij,bjk,kl->bil", u, kernel[None, :, :] * g_tilde, u.conj().T)
    s = np.einsum("aij,bji->ab", basis, mapped).real
    # the map is exactly self-adjoint; averaging removes rounding asymmetry
    return Superoperator(n=n, mat=(s + s.T) / 2.0)


def superop_inverse(s: Superoperator, rtol: float = 1e-12) -> Superoperator:
    """Invert a positive definite superoperator; refuses near-singular input."""
    vals, vecs = np.linalg.eigh(s.mat)
    top = float(vals.max(initial=0.0))
    if top <= 0.0 or float(vals.min()) <= rtol * top:
        ratio = float(vals.min()) / top if top > 0.0 else np.inf
        raise ConditioningError(
            f"superoperator is numerically singular (eigenvalue ratio {ratio:.3e})",
            eigenvalue_ratio=ratio,
        )
    inv = (vecs / vals) @ vecs.T
    return Superoperator(n=s.n, mat=(inv + inv.T) / 2.0)
