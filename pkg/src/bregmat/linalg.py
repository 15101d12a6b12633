"""Complex Hermitian linear algebra: spectral decompositions, tensor
products, partial traces, the Hilbert-Schmidt inner product, and seeded
random matrix generation.

All functions are pure; matrices are plain ``numpy`` arrays of
``complex128`` and randomness is explicit through seeds or generators.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, HermiticityError, NumericalFailureError

HERMITIAN_ATOL = 1e-12
RECONSTRUCTION_RTOL = 1e-10


def as_matrix(entries) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ContractViolation("matrix contains non-finite entries")
    return a


def as_hermitian(entries, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate Hermiticity entrywise; reject rather than symmetrize."""
    a = as_matrix(entries)
    asym = np.abs(a - a.conj().T)
    worst = float(asym.max()) if a.size else 0.0
    if worst > atol:
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        raise HermiticityError(
            f"matrix is not Hermitian: |A[{i},{j}] - conj(A[{j},{i}])| = {worst:.3e} "
            f"exceeds {atol:.1e}"
        )
    return a


def check_dims(dims, total: int) -> tuple:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ContractViolation(f"tensor factor dimensions must be >= 1, got {dims}")
    if int(np.prod(dims)) != total:
        raise ContractViolation(
            f"tensor factors {dims} have product {int(np.prod(dims))}, "
            f"but the matrix dimension is {total}"
        )
    return dims


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (real, ascending) and a unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def eigh(h) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix.

    Raises :class:`NumericalFailureError` carrying the reconstruction
    residual if the solver does not meet its accuracy contract.
    """
    a = as_hermitian(h)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver did not converge: {exc}") from exc
    dec = SpectralDecomposition(vals, vecs)
    scale = 1.0 + float(np.linalg.norm(a))
    residual = float(np.linalg.norm(dec.reconstruct() - a))
    if residual > RECONSTRUCTION_RTOL * scale:
        raise NumericalFailureError(
            f"eigendecomposition residual {residual:.3e} exceeds "
            f"{RECONSTRUCTION_RTOL:.1e} * (1 + |A|)",
            residual=residual,
        )
    return dec


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the first factor is the slow index."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(x, dims, keep) -> np.ndarray:
    """Trace out all tensor factors not listed in ``keep`` (0-based indices).

    The kept factors stay in their original order; trace and Hermiticity
    are preserved.
    """
    a = as_matrix(x)
    dims = check_dims(dims, a.shape[0])
    k = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep or any(i < 0 or i >= k for i in keep):
        raise ContractViolation(f"keep={keep} is not a nonempty subset of factors 0..{k - 1}")

    t = a.reshape(dims + dims)
    # trace out the discarded factors from highest index down so the
    # remaining axis numbers stay valid
    remaining = list(range(k))
    for i in reversed([i for i in range(k) if i not in keep]):
        pos = remaining.index(i)
        n_ax = len(remaining)
        t = np.trace(t, axis1=pos, axis2=pos + n_ax)
        remaining.remove(i)
    d_keep = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d_keep, d_keep)


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product Tr(AB) of two Hermitian matrices."""
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise ContractViolation(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.real(np.sum(a * b.T)))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a)))


# ---------------------------------------------------------------------------
# random ensembles (all deterministic given a seed or a Generator)
# ---------------------------------------------------------------------------


def _rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def random_ginibre(n: int, rng) -> np.ndarray:
    """n x n matrix with independent standard complex Gaussian entries."""
    g = _rng(rng)
    return g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))


def random_hermitian(n: int, rng) -> np.ndarray:
    g = random_ginibre(n, rng)
    return (g + g.conj().T) / 2.0


def random_unitary(n: int, rng) -> np.ndarray:
    """Unitary from the eigenvectors of a random Hermitian matrix."""
    return eigh(random_hermitian(n, rng)).eigenvectors


def random_density(n: int, seed) -> np.ndarray:
    """Normalized Ginibre state G G*/Tr(G G*): positive semidefinite, trace one.

    Identical output for identical seed, independent of call context.
    """
    if n < 1:
        raise ContractViolation(f"dimension must be >= 1, got {n}")
    g = random_ginibre(n, _rng(seed))
    p = g @ g.conj().T
    return p / np.real(np.trace(p))


def random_pd(n: int, rng, floor: float = 0.1) -> np.ndarray:
    """Well-conditioned positive definite matrix: normalized Ginibre + floor*I.

    Eigenvalues lie in [floor, floor + 1], which keeps every integral
    representation well inside its analytic-accuracy regime.
    """
    return random_density(n, _rng(rng)) + floor * np.eye(n)


def random_pd_floored(n: int, rng, floor: float = 0.05) -> np.ndarray:
    """Unnormalized Ginibre covariance G G* + floor*I (convexity-probe ensemble)."""
    g = random_ginibre(n, _rng(rng))
    return g @ g.conj().T + floor * np.eye(n)


def random_contraction(n: int, rng) -> np.ndarray:
    """Random square matrix rescaled so its largest singular value lies in
    [0.3, 1]; almost surely full rank, so compressions keep full support."""
    g = _rng(rng)
    m = random_ginibre(n, g)
    top = float(np.linalg.svd(m, compute_uv=False).max())
    return m * (g.uniform(0.3, 1.0) / top)
