"""Density matrices, deformed entropies, and the monotonicity experiments.

Sign convention: ``tsallis_entropy`` reports the trace of x ln_q x over the
spectrum, which is *negative* for q > 1 and equals Tr(rho ln rho) at q = 1,
i.e. minus the conventional von Neumann entropy.  Both conventions are
exposed (:func:`tsallis_entropy` and :func:`von_neumann_entropy`); every
report labels which one a number uses.
"""

import math
from dataclasses import dataclass

import numpy as np

from .divergence import bregman_extended
from .errors import (
    ContractViolation,
    DomainError,
    NumericalFailureError,
    StateValidationError,
)
from .functions import ScalarFunctionFamily, tsallis
from .linalg import as_hermitian, check_dims, eigh, partial_trace, tensor

DENSITY_TRACE_ATOL = 1e-10
DENSITY_EIGENVALUE_FLOOR = -1e-10
UNITARITY_ATOL = 1e-10
PINCH_RESIDUAL_ATOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """A trace-one positive semidefinite matrix with tensor-factor metadata."""

    entries: np.ndarray
    dims: tuple

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def density(entries, dims=None) -> DensityMatrix:
    """Validate and wrap a density matrix; dims defaults to a single factor."""
    a = as_hermitian(entries)
    n = a.shape[0]
    dims = check_dims(dims if dims is not None else (n,), n)
    tr = float(np.real(np.trace(a)))
    if abs(tr - 1.0) > DENSITY_TRACE_ATOL:
        raise StateValidationError(f"trace is {tr!r}, must be 1 within {DENSITY_TRACE_ATOL}")
    low = float(eigh(a).eigenvalues.min())
    if low < DENSITY_EIGENVALUE_FLOOR:
        raise StateValidationError(
            f"matrix is not positive semidefinite: min eigenvalue {low:.3e}"
        )
    return DensityMatrix(entries=a, dims=dims)


def tripartite(entries, dims) -> DensityMatrix:
    dims = tuple(dims)
    if len(dims) != 3:
        raise ContractViolation(f"expected three tensor factors, got {dims}")
    return density(entries, dims)


def _spectrum(rho) -> np.ndarray:
    entries = rho.entries if isinstance(rho, DensityMatrix) else rho
    vals = eigh(entries).eigenvalues
    return np.maximum(vals, 0.0)  # clear harmless negative rounding noise


def trace_power(rho, q: float) -> float:
    """Tr rho^q over the clamped spectrum (0^q := 0 for q > 0)."""
    vals = _spectrum(rho)
    return float(np.sum(np.power(vals[vals > 0.0], q)))


def tsallis_entropy(q: float, rho) -> float:
    """Trace of x ln_q x over the spectrum (see the module note on sign)."""
    if q <= 0.0:
        raise DomainError(f"deformation parameter must be positive, got {q}")
    if abs(q - 1.0) <= 1e-9:
        vals = _spectrum(rho)
        pos = vals[vals > 0.0]
        return float(np.sum(pos * np.log(pos)))
    return (trace_power(rho, q) - 1.0) / (q - 1.0)


def von_neumann_entropy(rho) -> float:
    """Conventional nonnegative entropy -Tr rho ln rho."""
    vals = _spectrum(rho)
    pos = vals[vals > 0.0]
    return float(-np.sum(pos * np.log(pos)))


def reduced(state: DensityMatrix, keep) -> np.ndarray:
    return partial_trace(state.entries, state.dims, keep)


def saturating_state() -> DensityMatrix:
    """The 8x8 three-qubit density that makes the weighted subadditivity
    inequality an equality: an equal mixture of (|010> + |100>)/sqrt2 and
    (|011> + |101>)/sqrt2, i.e. a Bell-like pair on factors 1-2 tensored
    with a maximally mixed third qubit."""
    psi = np.zeros(4)
    psi[1] = psi[2] = 1.0 / np.sqrt(2.0)  # (|01> + |10>)/sqrt2
    pair = np.outer(psi, psi)
    rho = tensor(pair, np.eye(2) / 2.0)
    return tripartite(rho, (2, 2, 2))


def weighted_ssa_sides(q: float, state: DensityMatrix) -> tuple:
    """Both sides of the dimension-weighted Tsallis subadditivity inequality.

    Returns (lhs, rhs) with
    lhs = d3^(1-q) Tr rho_12^q + d1^(1-q) Tr rho_23^q and
    rhs = Tr rho_123^q + (d1 d3)^(1-q) Tr rho_2^q; rhs >= lhs for q in (1, 2].
    """
    if len(state.dims) != 3:
        raise ContractViolation(f"state must be tripartite, got dims {state.dims}")
    d1, _, d3 = state.dims
    rho12 = reduced(state, (0, 1))
    rho23 = reduced(state, (1, 2))
    rho2 = reduced(state, (1,))
    lhs = d3 ** (1.0 - q) * trace_power(rho12, q) + d1 ** (1.0 - q) * trace_power(rho23, q)
    rhs = trace_power(state.entries, q) + (d1 * d3) ** (1.0 - q) * trace_power(rho2, q)
    return lhs, rhs


def weighted_ssa_slack(q: float, state: DensityMatrix) -> float:
    """Slack of the weighted subadditivity inequality; nonnegative for
    q in [1, 2].

    At q = 1 the power form degenerates to 0 <= 0, so the limit is reported
    instead: the strong subadditivity slack of the conventional von Neumann
    entropy.
    """
    if not 1.0 <= q <= 2.0:
        raise DomainError(f"the inequality is established for q in [1, 2], got {q}")
    if len(state.dims) != 3:
        raise ContractViolation(f"state must be tripartite, got dims {state.dims}")
    if abs(q - 1.0) <= 1e-9:
        s123 = von_neumann_entropy(state.entries)
        s12 = von_neumann_entropy(reduced(state, (0, 1)))
        s23 = von_neumann_entropy(reduced(state, (1, 2)))
        s2 = von_neumann_entropy(reduced(state, (1,)))
        return s23 + s12 - s123 - s2
    lhs, rhs = weighted_ssa_sides(q, state)
    return rhs - lhs


def plain_ssa_gap(q: float, state: DensityMatrix) -> float:
    """Unweighted subadditivity gap Tr rho_12^q + Tr rho_23^q
    - Tr rho_123^q - Tr rho_2^q; a positive gap at q > 1 witnesses the
    failure of the plain (dimension-free) Tsallis strong subadditivity."""
    rho12 = reduced(state, (0, 1))
    rho23 = reduced(state, (1, 2))
    rho2 = reduced(state, (1,))
    return (
        trace_power(rho12, q)
        + trace_power(rho23, q)
        - trace_power(state.entries, q)
        - trace_power(rho2, q)
    )


# ---------------------------------------------------------------------------
# stochastic maps
# ---------------------------------------------------------------------------


def weyl_unitaries(n: int) -> list:
    """The n^2 products shift^a clock^b on C^n; averaging conjugations over
    the family sends any matrix to Tr(.) I/n."""
    omega = np.exp(2j * np.pi / n)
    shift = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        shift[(i + 1) % n, i] = 1.0
    clock = np.diag(omega ** np.arange(n))
    out = []
    power_of_shift = np.eye(n, dtype=np.complex128)
    for _ in range(n):
        power_of_clock = np.eye(n, dtype=np.complex128)
        for _ in range(n):
            out.append(power_of_shift @ power_of_clock)
            power_of_clock = power_of_clock @ clock
        power_of_shift = power_of_shift @ shift
    return out


def pinching_unitaries(dims, traced_factor: int) -> list:
    """Unitaries realizing the pinch-to-uniform map as a uniform mixture."""
    m, n = dims
    if traced_factor == 2:
        return [tensor(np.eye(m), w) for w in weyl_unitaries(n)]
    if traced_factor == 1:
        return [tensor(w, np.eye(n)) for w in weyl_unitaries(m)]
    raise ContractViolation(f"traced factor must be 1 or 2, got {traced_factor}")


def pinch_to_uniform(x, dims, traced_factor: int = 2) -> np.ndarray:
    """Replace one tensor factor by the normalized identity, e.g.
    X -> (Tr_2 X) (x) I/n.

    Also evaluates the equivalent uniform unitary mixture and verifies that
    both routes agree; trace is preserved.
    """
    a = as_hermitian(x)
    dims = check_dims(dims, a.shape[0])
    if len(dims) != 2:
        raise ContractViolation(f"pinching needs exactly two factors, got {dims}")
    m, n = dims
    if traced_factor == 2:
        direct = tensor(partial_trace(a, dims, (0,)), np.eye(n) / n)
    elif traced_factor == 1:
        direct = tensor(np.eye(m) / m, partial_trace(a, dims, (1,)))
    else:
        raise ContractViolation(f"traced factor must be 1 or 2, got {traced_factor}")

    unitaries = pinching_unitaries(dims, traced_factor)
    mixture = unitary_mixture_apply(a, unitaries, [1.0 / len(unitaries)] * len(unitaries))
    residual = float(np.abs(mixture - direct).max())
    if residual > PINCH_RESIDUAL_ATOL:
        raise NumericalFailureError(
            f"unitary-mixture route disagrees with the direct pinch by {residual:.3e}",
            residual=residual,
        )
    return direct


def unitary_mixture_apply(x, unitaries, weights) -> np.ndarray:
    """Sum of weighted unitary conjugations; trace and Hermiticity preserved."""
    a = as_hermitian(x)
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > 1e-12:
        raise ContractViolation(
            f"weights must be nonnegative and sum to 1, got sum {float(weights.sum())!r}"
        )
    if len(unitaries) != weights.shape[0]:
        raise ContractViolation("one weight per unitary is required")
    out = np.zeros_like(a)
    eye = np.eye(a.shape[0])
    for c, u in zip(weights, unitaries):
        u = np.asarray(u, dtype=np.complex128)
        residual = float(np.abs(u.conj().T @ u - eye).max())
        if residual > UNITARITY_ATOL:
            raise ContractViolation(f"member is not unitary: residual {residual:.3e}")
        out = out + c * (u @ a @ u.conj().T)
    return out


def contraction_monotonicity_check(fam: ScalarFunctionFamily, a, b, x) -> float:
    """Divergence drop under the compression A -> X A X* by a contraction X.

    Returns H(A, B) - H(XAX*, XBX*); nonnegative slack is the expected
    (empirically probed) monotonicity.  The compressed matrices may be
    singular, so the family must extend continuously to zero.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[1] != a.shape[0]:
        raise ContractViolation(
            f"contraction shape {x.shape} does not map dimension {a.shape[0]}"
        )
    top = float(np.linalg.svd(x, compute_uv=False).max(initial=0.0))
    if top > 1.0 + 1e-10:
        raise ContractViolation(f"largest singular value {top!r} exceeds 1")
    before = bregman_extended(fam, a, b).value
    after = bregman_extended(fam, x @ a @ x.conj().T, x @ b @ x.conj().T).value
    return before - after


def partial_trace_monotonicity_demo(q: float) -> dict:
    """Reproduce the failure of monotonicity under the partial trace.

    For the saturating three-qubit state, the divergence of the reduced
    pair (rho_12 against I/2 (x) rho_2) strictly exceeds the divergence of
    the full state (rho_123 against I/2 (x) rho_23), with the exact ratio
    2^(q-1).  Raises if the identity fails numerically.
    """
    if not 1.0 < q <= 2.0:
        raise DomainError(f"the construction needs q in (1, 2], got {q}")
    fam = tsallis(q)
    state = saturating_state()
    rho12 = reduced(state, (0, 1))
    rho23 = reduced(state, (1, 2))
    rho2 = reduced(state, (1,))
    half_eye = np.eye(2) / 2.0
    lhs = bregman_extended(fam, rho12, tensor(half_eye, rho2)).value
    rhs = bregman_extended(fam, state.entries, tensor(half_eye, rho23)).value
    ratio = lhs / rhs
    expected = 2.0 ** (q - 1.0)
    if not (lhs > rhs and math.isfinite(ratio) and abs(ratio - expected) <= 1e-8):
        raise NumericalFailureError(
            f"partial-trace demo failed at q={q}: lhs={lhs!r} rhs={rhs!r} "
            f"ratio={ratio!r} expected {expected!r}"
        )
    return {"q": q, "lhs": lhs, "rhs": rhs, "ratio": ratio, "expected_ratio": expected}
