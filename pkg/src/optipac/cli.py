"""
optipac's command-line entry point.

Every command prints its effective configuration (TOML) to stdout before doing any work, and results
as plain tables after. Logs go to stderr.
Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations
from typing import Any, Callable
import argparse
import math
import statistics
import sys
import tomlkit
from . import __version__
from .analysis import (c5_constant, exact_error, high_level_complexity, monte_carlo_error, optimal_error_bound,
                       ramp_generalization_bound, uniform_convergence_bound)
from .boost import margin_bound_base, margin_loss_bound, round_success_tail, step_size
from .core import MajorityVote
from .errors import BadParams, NotSerializable
from .experiments import (DISTRIBUTIONS, LEARNERS, build_learner, load_spec, make_distribution, run_error_sweep,
                          run_perceptron_complexity, sample_dataset)
from .log import log, set_console_level
from .settings import settings, profile as lookup_profile
from .storage import ResultStore, load_model
from .verify import SUITES, run_suites

BOUNDS = ("margin", "uc", "tail", "ramp", "optimal", "complexity")


def print_config(command: str, args: argparse.Namespace, extra: dict[str, Any] | None = None) -> None:
    """Print the resolved configuration of this run as TOML."""
    flags = {k: list(v) if isinstance(v, tuple) else v for k, v in vars(args).items()
             if k not in ("handler", "command") and v is not None}
    doc = tomlkit.document()
    doc.add("command", command)
    doc.add("version", __version__)
    doc.add("flags", flags)
    for k, v in (extra or {}).items():
        doc.add(k, v)
    doc.add("settings", settings.to_plain())
    print(tomlkit.dumps(doc))
    log.debug(f"Effective configuration printed command={command}")


def print_table(rows: list[tuple[Any, ...]], header: tuple[str, ...] | None = None) -> None:
    cells = [tuple(_cell(v) for v in row) for row in ([header] if header else []) + rows]
    if not cells:
        return
    widths = [max(len(row[i]) for row in cells) for i in range(len(cells[0]))]
    for row in cells:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _require(args: argparse.Namespace, which: str, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise BadParams(f"--which {which} needs {', '.join(missing)}.")


# Commands

def cmd_train(args: argparse.Namespace) -> int:
    prof = lookup_profile(args.profile)
    dist = make_distribution(args.distribution, args.m)
    d = args.d or dist.d
    print_config("train", args, {"profile": {"name": args.profile, **prof.to_plain()}, "resolved": {"d": d}})

    S = sample_dataset(dist.universe, args.m, args.seed)
    learner = build_learner(args.learner, delta=args.delta, d=d, seed=args.seed, profile=args.profile, frac=args.frac,
                            jobs=args.jobs, cache_rows=not args.no_cache)
    report = learner.fit(S, dist.erm)
    error = exact_error(report.predictor, dist.universe)

    store = ResultStore(args.output_dir)
    filename = args.out or f"model-{args.learner}-{args.distribution}-m{report.m_effective}-s{args.seed}.json"
    extra = {"distribution": args.distribution, "seed": args.seed, "delta": args.delta, "d": d, "profile": args.profile, "error": error}
    try:
        path = store.save_model(filename, store.model_descriptor(report, learner, dist.erm, extra))
    except NotSerializable as e:
        raise NotSerializable(f"The trained model can't be written: {e}") from None

    voters = len(report.predictor.voters) if isinstance(report.predictor, MajorityVote) else 1
    rows: list[tuple[Any, ...]] = [
        ("model", path),
        ("m_input", report.m_input),
        ("m_effective", report.m_effective),
        ("voters", voters),
        ("fallbacks", report.fallback_count),
        ("cache_hits", report.cache_hits),
        ("error", error),
    ]
    rows += [(name, getattr(report.ledger, name)) for name in report.ledger.COUNTERS]
    print_table(rows)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    predictor, descriptor = load_model(args.model)
    name = args.distribution or descriptor.get("distribution")
    if name is None:
        raise BadParams(f"{args.model} doesn't name its distribution; pass --distribution.")
    m = args.m or descriptor.get("m_input", 1)
    print_config("eval", args, {"resolved": {"distribution": name, "m": m}})

    dist = make_distribution(name, m)
    rows: list[tuple[Any, ...]] = [("model", args.model), ("distribution", name), ("error", exact_error(predictor, dist.universe))]
    if args.draws:
        p, stderr = monte_carlo_error(predictor, dist.universe, args.draws, args.seed)
        rows += [("monte_carlo_error", p), ("monte_carlo_stderr", stderr)]
    print_table(rows)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    overrides = {"distribution": args.distribution, "m": args.m, "delta": args.delta, "seeds": args.seeds,
                 "learners": args.learners, "profile": args.profile, "d": args.d, "frac": args.frac, "output": args.output}
    spec = load_spec(args.spec, overrides)
    print_config("sweep", args, {"spec": spec.to_dict()})

    rows = run_error_sweep(spec, jobs=args.jobs)
    csv_path, _ = ResultStore(args.output_dir).append_rows(spec.output, rows)

    failed = [r for r in rows if "failure" in r]
    if failed:
        log.warning(f"{len(failed)} of {len(rows)} trials failed; see the failure column of {spec.output}.jsonl")
    table = []
    for learner in spec.learners:
        for m in sorted({r["m"] for r in rows if r["learner"] == learner}):
            errors = [r["error"] for r in rows if r["learner"] == learner and r["m"] == m and not math.isnan(r["error"])]
            table.append((learner, m, len(errors), statistics.fmean(errors) if errors else math.nan, max(errors, default=math.nan)))
    print_table(table, ("learner", "m", "trials", "mean_error", "max_error"))
    print(f"rows: {csv_path}")
    return 0


def cmd_perceptron_bench(args: argparse.Namespace) -> int:
    print_config("perceptron-bench", args)
    report = run_perceptron_complexity(args.m, args.trials, args.seed, delta=args.delta, frac=args.frac,
                                       boosted_rounds=args.rounds, c=args.c, jobs=args.jobs)
    path = ResultStore(args.output_dir).save_report(args.out, report.to_dict())
    print_table(sorted(report.derived.items()), ("quantity", "value"))
    print(f"report: {path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    print_config("verify", args)
    results = run_suites(args.suite)
    print_table([(name, "pass" if msg is None else f"FAIL {msg}") for name, msg in results.items()], ("suite", "status"))
    failing = [name for name, msg in results.items() if msg is not None]
    if failing:
        print(f"failing suites: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    print_config("bounds", args)
    theta = settings.boost.theta if args.theta is None else args.theta
    gamma = settings.boost.gamma if args.gamma is None else args.gamma
    rows: list[tuple[Any, ...]] = []
    which = args.which
    if which == "margin":
        _require(args, which, "t")
        rows += [("alpha", step_size(theta, gamma)), ("per_round_base", margin_bound_base(theta, gamma)),
                 ("margin_loss_bound", margin_loss_bound(theta, gamma, args.t))]
    elif which == "uc":
        _require(args, which, "d", "m", "delta")
        rows.append(("uniform_convergence_bound", uniform_convergence_bound(args.d, args.m, args.delta)))
    elif which == "tail":
        _require(args, which, "n")
        rows.append(("round_success_tail", round_success_tail(args.n)))
    elif which == "ramp":
        _require(args, which, "d", "m", "delta", "xi")
        rows.append(("ramp_slack", ramp_generalization_bound(args.d, args.m, args.delta, gamma, args.xi, args.C)))
    elif which == "optimal":
        _require(args, which, "d", "m", "delta")
        rows += [("c5", c5_constant(args.C)), ("optimal_error_bound", optimal_error_bound(args.d, args.m, args.delta, args.C))]
    elif which == "complexity":
        _require(args, which, "d", "m", "delta")
        rows += sorted(high_level_complexity(args.m, args.delta, args.d, args.u_train, args.u_inf).items())
    print_table(rows, ("quantity", "value"))
    return 0


# Parser

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a number strictly between 0 and 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="optipac", description="Sample-optimal PAC learning with a black-box ERM.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG on the console")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="only log warnings and errors on the console")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output-dir", default=None, help="directory for artifacts (default: OPTIPAC_OUTPUT_DIR or config.output_dir)")

    def add_jobs(p: argparse.ArgumentParser) -> None:
        p.add_argument("--jobs", type=_positive_int, default=settings.learner.jobs, help="worker processes")

    p = sub.add_parser("train", help="train one learner on a seeded sample and save the model")
    p.add_argument("--learner", choices=LEARNERS, default="optimal")
    p.add_argument("--distribution", choices=sorted(DISTRIBUTIONS), default="threshold")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--delta", type=_probability, default=settings.learner.delta)
    p.add_argument("--d", type=_positive_int, default=None, help="VC dimension (default: the distribution's class)")
    p.add_argument("--seed", type=int, default=settings.learner.seed)
    p.add_argument("--profile", default="full", help="scale profile (full or desk)")
    p.add_argument("--frac", type=float, default=None, help="bootstrap fraction for bagging")
    p.add_argument("--no-cache", action="store_true", help="boost every sampled row, even repeated ones")
    p.add_argument("--out", default=None, help="model descriptor filename")
    add_jobs(p)
    add_output(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("eval", help="report the exact error of a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--distribution", choices=sorted(DISTRIBUTIONS), default=None)
    p.add_argument("--m", type=_positive_int, default=None, help="universe size parameter (perceptron only)")
    p.add_argument("--draws", type=_positive_int, default=None, help="also estimate the error from this many draws")
    p.add_argument("--seed", type=int, default=settings.learner.seed)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("sweep", help="error-vs-m sweep over learners and seeds")
    p.add_argument("--spec", default=None, help="TOML sweep spec; flags override its keys")
    p.add_argument("--distribution", choices=sorted(DISTRIBUTIONS), default=None)
    p.add_argument("--m", type=_positive_int, nargs="+", default=None)
    p.add_argument("--delta", type=_probability, default=None)
    p.add_argument("--seeds", type=_positive_int, default=None, help="number of seeds (0..N-1)")
    p.add_argument("--learners", choices=LEARNERS, nargs="+", default=None)
    p.add_argument("--profile", default=None)
    p.add_argument("--d", type=_positive_int, default=None)
    p.add_argument("--frac", type=float, default=None)
    p.add_argument("--output", default=None, help="file stem for the CSV and JSON-lines rows")
    add_jobs(p)
    add_output(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("perceptron-bench", help="bagging vs boosting training cost on the adversarial perceptron universe")
    p.add_argument("--m", type=_positive_int, default=2200)
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--seed", type=int, default=settings.learner.seed)
    p.add_argument("--delta", type=_probability, default=settings.learner.delta)
    p.add_argument("--frac", type=float, default=0.02)
    p.add_argument("--rounds", type=_positive_int, default=3, help="boosting rounds per trial")
    p.add_argument("--c", type=float, default=4.0, help="constant of the m²/c cost threshold")
    p.add_argument("--out", default="perceptron_bench.json")
    add_jobs(p)
    add_output(p)
    p.set_defaults(handler=cmd_perceptron_bench)

    p = sub.add_parser("verify", help="run the shipped invariant suites")
    p.add_argument("--suite", action="append", choices=list(SUITES), default=None, help="run only this suite (repeatable)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bounds", help="evaluate the analytic bounds")
    p.add_argument("--which", choices=BOUNDS, required=True)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--xi", type=float, default=None)
    p.add_argument("--C", type=float, default=None, help="ramp-loss constant (default: analysis.ramp_constant)")
    p.add_argument("--u-train", type=float, default=1.0)
    p.add_argument("--u-inf", type=float, default=1.0)
    p.set_defaults(handler=cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 on --help/--version
        return e.code if isinstance(e.code, int) else 2

    if args.verbose:
        set_console_level("DEBUG")
    elif args.quiet:
        set_console_level("WARNING")

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except ValueError as e:
        log.error(f"Usage error: {e}")
        return 2
    except Exception as e:
        log.smart_error(f"{args.command} failed: {e}")
        return 1
    finally:
        if args.verbose or args.quiet:
            set_console_level(settings.logging.console_log_level)


if __name__ == "__main__":
    sys.exit(main())
