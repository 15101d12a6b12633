"""Catalog of convex scalar functions with first and second derivatives.

Families are immutable descriptors carrying vectorized callables plus the
domain metadata needed to extend trace divergences to singular matrices:
whether f extends continuously to 0 and the limit of f' at 0+ (which may
be -inf).

Every constructor validates convexity (f'' >= -1e-12 on a log grid over
[1e-6, 1e6]) and cross-checks the supplied derivatives against central
finite differences on the same grid.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UnsupportedFamilyError

Q_LOG_SWITCH = 1e-9  # |q - 1| below this uses the logarithm limit
DD_COINCIDENCE_RTOL = 1e-7  # divided-difference coincidence threshold
_CHECK_GRID = np.logspace(-6.0, 6.0, 25)
# step is relative to x; larger than sqrt(eps) to keep the difference
# quotient above cancellation noise when f' has an O(1) constant term
_FD_REL_STEP = 1e-4
_FD_RTOL = 1e-6
_CONVEXITY_FLOOR = -1e-12


@dataclass(frozen=True, eq=False)
class ScalarFunctionFamily:
    """A convex function f on (0, inf) with derivatives and domain metadata.

    ``fsecond`` may be None (order-2 operations then raise
    :class:`UnsupportedFamilyError`).  ``f_at_zero`` is the continuity
    limit of f at 0 (NaN when the family is not continuous at zero);
    ``fprime_at_zero`` is the limit of f' at 0+, with ``-inf`` allowed.
    """

    kind: str
    label: str
    f: Callable
    fprime: Callable
    fsecond: Optional[Callable]
    continuous_at_zero: bool
    f_at_zero: float
    fprime_at_zero: float

    def __repr__(self):
        return f"ScalarFunctionFamily({self.label})"


def _check_positive(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError(f"argument must be positive, got min {arr.min()}")
    return arr


def _central_diff(g, x, h):
    return (g(x + h) - g(x - h)) / (2.0 * h)


def _fd_disagreement(g, g_exact_vals, x, h):
    """Relative disagreement between central differences of g and exact
    values, after subtracting the unavoidable cancellation noise of the
    difference quotient."""
    fd = _central_diff(g, x, h)
    noise = np.finfo(float).eps * np.abs(g(x)) / (2.0 * h)
    excess = np.maximum(np.abs(fd - g_exact_vals) - noise, 0.0)
    return np.max(excess / np.maximum(1.0, np.abs(g_exact_vals)))


def _validate_family(fam: ScalarFunctionFamily) -> ScalarFunctionFamily:
    x = _CHECK_GRID
    h = _FD_REL_STEP * x

    err = _fd_disagreement(fam.f, fam.fprime(x), x, h)
    if err > _FD_RTOL:
        raise DomainError(
            f"{fam.label}: f' disagrees with finite differences of f "
            f"(max relative error {err:.2e})"
        )

    fpp = fam.fsecond(x) if fam.fsecond is not None else _central_diff(fam.fprime, x, h)
    err2 = _fd_disagreement(fam.fprime, fpp, x, h)
    if err2 > _FD_RTOL:
        raise DomainError(
            f"{fam.label}: f'' disagrees with finite differences of f' "
            f"(max relative error {err2:.2e})"
        )
    if np.min(fpp) < _CONVEXITY_FLOOR:
        raise DomainError(
            f"{fam.label}: not convex, f''({x[int(np.argmin(fpp))]:.3e}) = {np.min(fpp):.3e}"
        )
    return fam


def ln_q(q: float, x) -> np.ndarray:
    """Deformed logarithm: (x^(q-1) - 1)/(q - 1), with the ln x limit at q = 1."""
    x = _check_positive(x)
    if abs(q - 1.0) <= Q_LOG_SWITCH:
        return np.log(x)
    return (np.power(x, q - 1.0) - 1.0) / (q - 1.0)


def entropy() -> ScalarFunctionFamily:
    """The standard entropy function x log x."""
    return _validate_family(
        ScalarFunctionFamily(
            kind="entropy",
            label="entropy",
            f=lambda x: x * np.log(x),
            fprime=lambda x: np.log(x) + 1.0,
            fsecond=lambda x: 1.0 / x,
            continuous_at_zero=True,
            f_at_zero=0.0,
            fprime_at_zero=-math.inf,
        )
    )


def tsallis(q: float) -> ScalarFunctionFamily:
    """x ln_q x, i.e. (x^q - x)/(q - 1) away from q = 1 and x ln x at q = 1.

    Convex only for q >= 0; other q are rejected by the convexity check.
    """
    q = float(q)
    if abs(q - 1.0) <= Q_LOG_SWITCH:
        base = entropy()
        return ScalarFunctionFamily(
            kind="tsallis",
            label=f"tsallis:q={q:g}",
            f=base.f,
            fprime=base.fprime,
            fsecond=base.fsecond,
            continuous_at_zero=True,
            f_at_zero=0.0,
            fprime_at_zero=-math.inf,
        )

    def f(x, q=q):
        return (np.power(x, q) - x) / (q - 1.0)

    def fprime(x, q=q):
        return (q * np.power(x, q - 1.0) - 1.0) / (q - 1.0)

    def fsecond(x, q=q):
        return q * np.power(x, q - 2.0)

    if q > 1.0:
        fprime0 = -1.0 / (q - 1.0)
    elif q == 0.0:  # the affine x - 1; q < 0 fails the convexity check below
        fprime0 = 1.0
    else:
        fprime0 = -math.inf
    return _validate_family(
        ScalarFunctionFamily(
            kind="tsallis",
            label=f"tsallis:q={q:g}",
            f=f,
            fprime=fprime,
            fsecond=fsecond,
            continuous_at_zero=q >= 0.0,
            f_at_zero=(0.0 if q > 0.0 else -1.0) if q >= 0.0 else math.nan,
            fprime_at_zero=float(fprime0),
        )
    )


def shifted_entropy(lam: float) -> ScalarFunctionFamily:
    """(x + lam) log(x + lam) for lam >= 0; lam = 0 is the plain entropy."""
    lam = float(lam)
    if lam < 0.0:
        raise DomainError(f"shift must be nonnegative, got {lam}")
    if lam == 0.0:
        return entropy()
    return _validate_family(
        ScalarFunctionFamily(
            kind="shifted-entropy",
            label=f"shifted-entropy:lambda={lam:g}",
            f=lambda x, c=lam: (x + c) * np.log(x + c),
            fprime=lambda x, c=lam: np.log(x + c) + 1.0,
            fsecond=lambda x, c=lam: 1.0 / (x + c),
            continuous_at_zero=True,
            f_at_zero=lam * math.log(lam),
            fprime_at_zero=math.log(lam) + 1.0,
        )
    )


def quadratic(gamma: float) -> ScalarFunctionFamily:
    """gamma * x^2 / 2 for gamma >= 0."""
    gamma = float(gamma)
    if gamma < 0.0:
        raise DomainError(f"coefficient must be nonnegative, got {gamma}")
    return _validate_family(
        ScalarFunctionFamily(
            kind="quadratic",
            label=f"quadratic:gamma={gamma:g}",
            f=lambda x, g=gamma: 0.5 * g * np.square(x),
            fprime=lambda x, g=gamma: g * np.asarray(x, dtype=float),
            fsecond=lambda x, g=gamma: g * np.ones_like(np.asarray(x, dtype=float)),
            continuous_at_zero=True,
            f_at_zero=0.0,
            fprime_at_zero=0.0,
        )
    )


def power(p: float) -> ScalarFunctionFamily:
    """x^p; convex on (0, inf) only for p >= 1 or p <= 0."""
    p = float(p)
    if p > 1.0:
        continuous, f0, fp0 = True, 0.0, 0.0
    elif p == 1.0:
        continuous, f0, fp0 = True, 0.0, 1.0
    elif p == 0.0:
        continuous, f0, fp0 = True, 1.0, 0.0
    else:
        continuous, f0, fp0 = False, math.nan, -math.inf
    return _validate_family(
        ScalarFunctionFamily(
            kind="power",
            label=f"power:p={p:g}",
            f=lambda x, p=p: np.power(x, p),
            fprime=lambda x, p=p: p * np.power(x, p - 1.0),
            fsecond=lambda x, p=p: p * (p - 1.0) * np.power(x, p - 2.0),
            continuous_at_zero=continuous,
            f_at_zero=f0,
            fprime_at_zero=fp0,
        )
    )


def custom_family(
    f,
    fprime,
    fsecond=None,
    *,
    continuous_at_zero: bool = False,
    f_at_zero: float = math.nan,
    fprime_at_zero: float = -math.inf,
    label: str = "custom",
) -> ScalarFunctionFamily:
    """Wrap user-supplied callables; no automatic differentiation is attempted,
    the finite-difference cross-checks are the only guard."""
    return _validate_family(
        ScalarFunctionFamily(
            kind="custom",
            label=label,
            f=f,
            fprime=fprime,
            fsecond=fsecond,
            continuous_at_zero=continuous_at_zero,
            f_at_zero=f_at_zero,
            fprime_at_zero=fprime_at_zero,
        )
    )


def scalar_eval(fam: ScalarFunctionFamily, order: int, x):
    """Evaluate f, f', or f'' of the family at positive x (scalar or array)."""
    x = _check_positive(x)
    if order == 0:
        return fam.f(x)
    if order == 1:
        return fam.fprime(x)
    if order == 2:
        if fam.fsecond is None:
            raise UnsupportedFamilyError(f"{fam.label} carries no second derivative")
        return fam.fsecond(x)
    raise DomainError(f"derivative order must be 0, 1 or 2, got {order}")


def divided_difference(fam: ScalarFunctionFamily, order: int, a, b):
    """First divided difference of f (order 0) or of f' (order 1).

    Returns (g(a) - g(b))/(a - b) where the gap is resolvable, and the
    midpoint derivative g'((a+b)/2) where |a - b| <= 1e-7 * max(1,|a|,|b|).
    Broadcasts over array arguments; symmetric in (a, b).
    """
    if order == 0:
        g, gp = fam.f, fam.fprime
    elif order == 1:
        g, gp = fam.fprime, fam.fsecond
    else:
        raise DomainError(f"divided-difference order must be 0 or 1, got {order}")

    a = _check_positive(a)
    b = _check_positive(b)
    a, b = np.broadcast_arrays(a, b)
    diff = a - b
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    coincident = np.abs(diff) <= DD_COINCIDENCE_RTOL * scale

    if np.any(coincident) and gp is None:
        raise UnsupportedFamilyError(
            f"{fam.label} carries no second derivative (needed at coincident arguments)"
        )
    safe = np.where(coincident, 1.0, diff)
    quotient = (g(a) - g(b)) / safe
    if np.any(coincident):
        midpoint = gp(0.5 * (a + b))
        out = np.where(coincident, midpoint, quotient)
    else:
        out = quotient
    return out if out.ndim else float(out)


# CLI family syntax: "entropy", "tsallis:q=1.5", "shifted-entropy:lambda=0.3",
# "quadratic:gamma=1", "power:p=3"
_PARAM_OF_KIND = {
    "tsallis": ("q", tsallis),
    "shifted-entropy": ("lambda", shifted_entropy),
    "quadratic": ("gamma", quadratic),
    "power": ("p", power),
}


def parse_family(text: str) -> ScalarFunctionFamily:
    """Parse the CLI function-family syntax; raises ValueError on bad input."""
    text = text.strip()
    if text == "entropy":
        return entropy()
    kind, sep, rest = text.partition(":")
    if kind not in _PARAM_OF_KIND:
        raise ValueError(f"unknown function family {text!r}")
    name, ctor = _PARAM_OF_KIND[kind]
    if not sep:
        raise ValueError(f"family {kind!r} needs a parameter, e.g. '{kind}:{name}=1'")
    key, sep2, value = rest.partition("=")
    if key != name or not sep2 or not value:
        raise ValueError(f"malformed family parameter {rest!r}, expected '{name}=<number>'")
    try:
        num = float(value)
    except ValueError as exc:
        raise ValueError(f"family parameter is not a number: {value!r}") from exc
    try:
        return ctor(num)
    except DomainError as exc:
        raise ValueError(str(exc)) from exc
