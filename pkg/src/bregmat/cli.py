"""Command-line harness.

Exit codes: 0 all checks passed, 2 usage or input error, 3 a mathematical
check failed (an inequality expected to hold was violated, or a searched
counterexample was found), 4 numerical failure.

Every report echoes its full configuration including the seed, so any
reported witness can be replayed with a single invocation.
"""

import argparse
import sys
import time

import numpy as np

from . import __version__
from .convexity import CRITERIA, entropy_class_probe
from .divergence import (
    METHODS,
    ZERO_EIGENVALUE_ATOL,
    all_methods,
    bregman,
    bregman_extended,
)
from .errors import (
    ContractViolation,
    DomainError,
    HermiticityError,
    NumericalFailureError,
    SchemaError,
    StateValidationError,
    UnsupportedFamilyError,
)
from .functions import parse_family
from .io import load_density, load_matrix
from .linalg import eigh, random_contraction, random_density, random_pd, random_unitary
from .reports import CheckRecord, Report, render_csv, render_json
from .states import (
    contraction_monotonicity_check,
    density,
    partial_trace_monotonicity_demo,
    saturating_state,
    weighted_ssa_sides,
    weighted_ssa_slack,
)
from .workers import ordered_map

DEFAULT_FAMILIES = (
    "entropy",
    "tsallis:q=1.3",
    "tsallis:q=2",
    "shifted-entropy:lambda=0.5",
    "quadratic:gamma=1",
)

SLACK_TOL = 1e-9
SATURATION_TOL = 1e-10
AGREEMENT_TOL = 1e-8


def _family_arg(text):
    try:
        return parse_family(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _grid_arg(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError(f"empty value grid: {text!r}")
    return values


def _dims_arg(text):
    try:
        dims = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"factor dimensions must be positive: {text!r}")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bregmat",
        description="Trace Bregman divergences, convexity probing, and entropy inequalities.",
    )
    parser.add_argument("--version", action="version", version=f"bregmat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")

    p = sub.add_parser("divergence", help="divergence of two matrices from files")
    p.add_argument("--f", type=_family_arg, required=True, metavar="FAMILY")
    p.add_argument("--x", required=True, metavar="FILE")
    p.add_argument("--y", required=True, metavar="FILE")
    p.add_argument("--method", choices=METHODS, default="closed")
    p.add_argument("--all-methods", action="store_true")
    add_output(p)

    p = sub.add_parser("verify-identities", help="cross-check all four representations")
    p.add_argument("--f", type=_family_arg, action="append", default=None, metavar="FAMILY")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)

    p = sub.add_parser("entropy-class", help="sample the matrix entropy class criteria")
    p.add_argument("--f", type=_family_arg, required=True, metavar="FAMILY")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--criterion",
        choices=("concavity", "joint-convexity", "both"),
        default="both",
    )
    add_output(p)

    p = sub.add_parser("tsallis-ssa", help="weighted Tsallis subadditivity slacks")
    p.add_argument("--q", type=_grid_arg, required=True, metavar="GRID")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--saturating", action="store_true")
    src.add_argument("--state", default=None, metavar="FILE")
    src.add_argument("--random", type=int, default=None, metavar="N")
    p.add_argument("--dims", type=_dims_arg, default=(2, 2, 2))
    p.add_argument("--seed", type=int, default=0)
    add_output(p)

    p = sub.add_parser("monotonicity-demo", help="partial-trace monotonicity failure")
    p.add_argument("--q", type=_grid_arg, required=True, metavar="GRID")
    p.add_argument("--seed", type=int, default=0)
    add_output(p)

    p = sub.add_parser("contraction", help="compression monotonicity sampling")
    p.add_argument("--f", type=_family_arg, required=True, metavar="FAMILY")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)

    p = sub.add_parser(
        "counterexample-search",
        help="random search for convexity violations; exit 3 when one is found",
    )
    p.add_argument("--f", type=_family_arg, required=True, metavar="FAMILY")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--criterion",
        choices=("concavity", "joint-convexity", "both"),
        default="both",
    )
    add_output(p)

    return parser


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _min_eigenvalue(a) -> float:
    return float(eigh(a).eigenvalues.min())


def _cmd_divergence(args):
    fam = args.f
    x, _ = load_matrix(args.x)
    y, _ = load_matrix(args.y)
    config = {
        "f": fam.label,
        "x": args.x,
        "y": args.y,
        "method": args.method,
        "all_methods": bool(args.all_methods),
        "seed": 0,
    }
    records = []
    pd = min(_min_eigenvalue(x), _min_eigenvalue(y)) > ZERO_EIGENVALUE_ATOL
    if args.all_methods:
        results = all_methods(fam, x, y)  # raises DomainError on singular input
        closed = results["closed"].value
        tol = AGREEMENT_TOL * (1.0 + abs(closed))
        for method in METHODS:
            r = results[method]
            records.append(
                CheckRecord(
                    name=f"divergence[{method}]",
                    check="divergence-value",
                    values={"value": r.value, "residual_to_closed": r.residual_to_closed},
                    slack=None if method == "closed" else tol - r.residual_to_closed,
                    tolerance=tol,
                    passed=r.residual_to_closed <= tol,
                )
            )
    else:
        if pd:
            result = bregman(fam, x, y, args.method)
        elif args.method == "eigen":
            result = bregman_extended(fam, x, y)
        else:
            raise DomainError(
                "input is singular positive semidefinite; the continuity extension "
                "is only available through --method eigen"
            )
        records.append(
            CheckRecord(
                name=f"divergence[{result.method}]",
                check="divergence-value",
                values={"value": result.value, "method": result.method},
                passed=True,
            )
        )
    return records, config


def _cmd_verify_identities(args):
    families = args.f if args.f else [parse_family(s) for s in DEFAULT_FAMILIES]
    config = {
        "f": [fam.label for fam in families],
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
    }

    def one_pair(index):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed % 2**63, index]))
        x = random_pd(args.dim, rng)
        y = random_pd(args.dim, rng)
        residuals = []
        for fam in families:
            results = all_methods(fam, x, y)
            values = [results[m].value for m in METHODS]
            scale = 1.0 + abs(results["closed"].value)
            worst = 0.0
            for i in range(len(values)):
                for j in range(i + 1, len(values)):
                    worst = max(worst, abs(values[i] - values[j]) / scale)
            residuals.append(worst)
        return residuals

    tol = args.tol if args.tol is not None else AGREEMENT_TOL
    per_pair = ordered_map(one_pair, range(args.trials))
    records = []
    for column, fam in enumerate(families):
        worst = max((row[column] for row in per_pair), default=0.0)
        records.append(
            CheckRecord(
                name=f"representation-agreement[{fam.label}]",
                check="divergence-representations",
                values={"value": worst},
                slack=tol - worst,
                tolerance=tol,
                passed=worst <= tol,
            )
        )
    return records, config


def _criteria_of(arg: str):
    if arg == "both":
        return CRITERIA
    if arg == "concavity":
        return ("operator-concavity",)
    return ("joint-convexity",)


def _cmd_entropy_class(args):
    criteria = _criteria_of(args.criterion)
    tol = args.tol if args.tol is not None else 1e-8
    config = {
        "f": args.f.label,
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
        "criterion": args.criterion,
        "tol": tol,
    }
    probe = entropy_class_probe(
        args.f, args.dim, args.trials, args.seed, criteria, tol, map_fn=ordered_map
    )
    records = []
    for criterion in criteria:
        rep = probe[criterion]
        records.append(
            CheckRecord(
                name=f"{criterion}[{args.f.label}]",
                check=f"entropy-class/{criterion}",
                values=rep.as_dict(),
                slack=rep.min_slack,
                tolerance=tol,
                passed=rep.verdict == "held",
            )
        )
    return records, config


def _cmd_counterexample_search(args):
    criteria = _criteria_of(args.criterion)
    tol = args.tol if args.tol is not None else 1e-8
    config = {
        "f": args.f.label,
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
        "criterion": args.criterion,
        "tol": tol,
    }
    probe = entropy_class_probe(
        args.f, args.dim, args.trials, args.seed, criteria, tol, map_fn=ordered_map
    )
    records = []
    for criterion in criteria:
        rep = probe[criterion]
        found = rep.verdict == "violated"
        values = rep.as_dict()
        # a completed search that finds nothing is inconclusive, never a
        # membership claim
        values["search_outcome"] = "found" if found else "inconclusive"
        records.append(
            CheckRecord(
                name=f"search[{criterion}][{args.f.label}]",
                check=f"counterexample-search/{criterion}",
                values=values,
                slack=rep.min_slack,
                tolerance=tol,
                passed=not found,
            )
        )
    return records, config


def _cmd_tsallis_ssa(args):
    config = {
        "q": list(args.q),
        "saturating": bool(args.saturating),
        "state": args.state,
        "random": args.random,
        "dims": list(args.dims),
        "seed": args.seed,
    }
    if args.saturating:
        states = [("saturating", saturating_state())]
    elif args.state is not None:
        loaded = load_density(args.state)
        if len(loaded.dims) != 3:
            raise ContractViolation(
                f"{args.state}: a tripartite state needs three factors, got {loaded.dims}"
            )
        states = [(args.state, loaded)]
    else:
        if args.random < 1:
            raise DomainError(f"--random must be >= 1, got {args.random}")
        total = int(np.prod(args.dims))
        states = [
            (
                f"random-{i}",
                density(
                    random_density(total, np.random.SeedSequence([args.seed % 2**63, i])),
                    args.dims,
                ),
            )
            for i in range(args.random)
        ]

    records = []
    for q in args.q:
        slacks = ordered_map(lambda sv: weighted_ssa_slack(q, sv[1]), states)
        worst_i = int(np.argmin(slacks))
        worst = float(slacks[worst_i])
        if args.saturating:
            tol = args.tol if args.tol is not None else SATURATION_TOL
            lhs, rhs = weighted_ssa_sides(q, states[0][1]) if q > 1.0 else (None, None)
            expected = 2.0 ** (1.0 - q) * (1.0 + 4.0 ** (1.0 - q))
            sides_ok = q <= 1.0 or (
                abs(lhs - expected) <= tol and abs(rhs - expected) <= tol
            )
            records.append(
                CheckRecord(
                    name=f"saturation[q={q:g}]",
                    check="weighted-tsallis-ssa-saturation",
                    values={
                        "value": worst,
                        "lhs": lhs,
                        "rhs": rhs,
                        "expected_sides": expected,
                    },
                    slack=worst,
                    tolerance=tol,
                    passed=abs(worst) <= tol and sides_ok,
                )
            )
        else:
            tol = args.tol if args.tol is not None else SLACK_TOL
            check = "ssa-von-neumann" if abs(q - 1.0) <= 1e-9 else "weighted-tsallis-ssa"
            records.append(
                CheckRecord(
                    name=f"slack[q={q:g}]",
                    check=check,
                    values={"value": worst, "worst_state": states[worst_i][0]},
                    slack=worst,
                    tolerance=tol,
                    passed=worst >= -tol,
                )
            )
    return records, config


def _cmd_monotonicity_demo(args):
    config = {"q": list(args.q), "seed": args.seed}
    records = []
    for q in args.q:
        demo = partial_trace_monotonicity_demo(q)
        records.append(
            CheckRecord(
                name=f"partial-trace-increase[q={q:g}]",
                check="partial-trace-increase",
                values=demo,
                slack=demo["lhs"] - demo["rhs"],
                tolerance=1e-8,
                passed=True,  # the demo raises when the identity fails
            )
        )
    return records, config


def _cmd_contraction(args):
    fam = args.f
    if not fam.continuous_at_zero:
        raise DomainError(
            f"{fam.label} does not extend continuously to zero; compressed "
            f"matrices may be singular"
        )
    tol = args.tol if args.tol is not None else SLACK_TOL
    config = {
        "f": fam.label,
        "dim": args.dim,
        "trials": args.trials,
        "seed": args.seed,
        "tol": tol,
    }

    def sampled(i):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed % 2**63, i, 0]))
        a = random_pd(args.dim, rng)
        b = random_pd(args.dim, rng)
        x = random_contraction(args.dim, rng)
        return contraction_monotonicity_check(fam, a, b, x)

    def unitary(i):
        rng = np.random.default_rng(np.random.SeedSequence([args.seed % 2**63, i, 1]))
        a = random_pd(args.dim, rng)
        b = random_pd(args.dim, rng)
        u = random_unitary(args.dim, rng)
        return contraction_monotonicity_check(fam, a, b, u)

    slacks = ordered_map(sampled, range(args.trials))
    min_slack = float(min(slacks))
    unit_slacks = ordered_map(unitary, range(min(args.trials, 20)))
    max_abs_unit = float(max(abs(s) for s in unit_slacks))
    records = [
        CheckRecord(
            name=f"compression[{fam.label}]",
            check="contraction-monotonicity",
            values={"value": min_slack, "trials": args.trials},
            slack=min_slack,
            tolerance=tol,
            passed=min_slack >= -tol,
        ),
        CheckRecord(
            name=f"unitary-invariance[{fam.label}]",
            check="contraction-unitary-invariance",
            values={"value": max_abs_unit, "trials": len(unit_slacks)},
            slack=tol - max_abs_unit,
            tolerance=tol,
            passed=max_abs_unit <= tol,
        ),
    ]
    return records, config


_COMMANDS = {
    "divergence": _cmd_divergence,
    "verify-identities": _cmd_verify_identities,
    "entropy-class": _cmd_entropy_class,
    "tsallis-ssa": _cmd_tsallis_ssa,
    "monotonicity-demo": _cmd_monotonicity_demo,
    "contraction": _cmd_contraction,
    "counterexample-search": _cmd_counterexample_search,
}

_USAGE_ERRORS = (
    SchemaError,
    HermiticityError,
    StateValidationError,
    ContractViolation,
    DomainError,
    UnsupportedFamilyError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        records, config = _COMMANDS[args.command](args)
    except _USAGE_ERRORS as exc:
        print(f"bregmat: error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailureError as exc:
        print(f"bregmat: numerical failure: {exc}", file=sys.stderr)
        return 4
    report = Report(
        command=args.command,
        config=config,
        version=__version__,
        records=records,
        duration_seconds=time.perf_counter() - started,
    )
    text = render_csv(report) if args.format == "csv" else render_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    return 0 if report.all_passed else 3


if __name__ == "__main__":
    sys.exit(main())
