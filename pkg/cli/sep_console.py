"""
Command-line front end.

    python -m cli.sep_console estimate --scenario two-qubit-bures --n 1e7 --threads 8
    python -m cli.sep_console estimate --resume results/two-qubit-bures.csv --n 1e7
    python -m cli.sep_console exact all
    python -m cli.sep_console plot results/two-qubit-bures.csv --conjecture bures_two_qubit

Exit codes: 0 success, 1 usage, 2 runtime, 3 exact-check failure.
"""

import argparse
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from algorithms.checkpoint import CheckpointError, CheckpointWriter, resume, scenario_params
from algorithms.estimator import SAMPLERS, default_interval, run
from data import paths
from data.scenarios import SCENARIOS, custom_id, parse_custom, resolve
from exact.hypergeometric import (
    ConvergenceError,
    chi_dk,
    chi_master,
    psep_hs,
    q_det_partition,
    sep_function_10d,
)
from exact.registry import constants_registry, lookup, registry_names, write_csv
from exact.xstate import verify_xstate_identities
from frontend.ratio_plot import write_ratio_plot
from frontend.ui_components import (
    COLOR_CYAN,
    RESET,
    RULE_WIDTH,
    RunLogger,
    format_table,
    status_text,
)
from sequence.qrng import DEFAULT_ALPHA0, make_sequence
from states.rmt import Scenario, variate_count

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_CHECK_FAILED = 3

EXACT_CHOICES = ("all", "psep", "chi", "registry", "xstate")
# alpha -> registry entry holding its known probability
KNOWN_PSEP = {1.0: "hs_two_rebit", 2.0: "hs_two_qubit", 4.0: "hs_two_quaterbit"}
PSEP_TOL = 1e-6
CHI_TOL = 1e-10
SEP10_TOL = 1e-8
CHI_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
NO_CONJECTURE = "none"


class UsageError(ValueError):
    """Bad flag combination or value; maps to exit code 1."""


class ConsoleParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with EXIT_USAGE."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def parse_count(text):
    """Non-negative integer count, accepting forms like 1e7."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0 or not value.is_integer():
        raise argparse.ArgumentTypeError(f"need a non-negative integer, got {text!r}")
    return int(value)


@dataclass(frozen=True)
class RunConfig:
    scenario_id: Optional[str]
    scenario: Optional[Scenario]
    conjecture: Optional[str]
    alpha0: float
    n_start: int
    n: int
    interval: Optional[int]
    threads: int
    out: Optional[str]
    resume: Optional[str]
    realign: bool
    sampler: str
    seed: int
    quiet: bool = False
    # on resume, use the conjecture recorded in the checkpoint
    keep_checkpoint_conjecture: bool = False


def build_parser():
    parser = ConsoleParser(
        prog="sep_console",
        description="Quasirandom separability/PPT probability estimation and exact checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run (or resume) a sampling estimate")
    est.add_argument("--scenario", help="catalog scenario name: " + ", ".join(SCENARIOS))
    est.add_argument("--custom", help="explicit system nA,nB,field,measure[,k|x] (e.g. 2,3,real,osz,0.5)")
    est.add_argument("--alpha0", type=float, default=DEFAULT_ALPHA0,
                     help=f"sequence offset in [0, 1) (default {DEFAULT_ALPHA0})")
    est.add_argument("--n", type=parse_count, default=10_000_000,
                     help="number of sequence indices to process in this invocation (accepts 1e7)")
    est.add_argument("--start", type=parse_count, default=0, help="first sequence index (default 0)")
    est.add_argument("--interval", type=parse_count, default=None,
                     help="checkpoint interval (default 5e6 for 4x4 systems, 1e6 otherwise)")
    est.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")
    est.add_argument("--out", help="checkpoint CSV path (default results/<scenario>.csv)")
    est.add_argument("--resume", help="continue the run recorded in this checkpoint CSV")
    est.add_argument("--realign", action="store_true", help="also apply the realignment criterion")
    est.add_argument("--conjecture", help="registry constant to divide estimates by, or 'none'")
    est.add_argument("--sampler", choices=SAMPLERS, default="quasi",
                     help="quasi (default) or pseudo independent-sampling baseline")
    est.add_argument("--seed", type=int, default=0, help="seed for --sampler pseudo (default 0)")
    est.add_argument("--quiet", action="store_true", help="suppress per-checkpoint lines")

    ex = sub.add_parser("exact", help="evaluate closed forms and verify exact identities")
    ex.add_argument("which", choices=EXACT_CHOICES, nargs="?", default="all")
    ex.add_argument("--alpha", type=float, action="append",
                    help="Dyson-type index for psep (repeatable; default 1, 2, 4)")
    ex.add_argument("--csv", help="also write the table(s) as CSV")

    pl = sub.add_parser("plot", help="SVG of estimate/conjecture ratio against iterations")
    pl.add_argument("csv_path", help="checkpoint CSV")
    pl.add_argument("--conjecture", help="registry constant to divide p_ppt by (default: CSV ratio column)")
    pl.add_argument("--out", help="SVG path (default: CSV path with .svg)")
    return parser


def _resolve_conjecture(name, default):
    if name is None:
        return default
    if name == NO_CONJECTURE:
        return None
    if name not in registry_names():
        raise UsageError(f"unknown conjecture {name!r}")
    return name


def build_run_config(args):
    """RunConfig from parsed estimate flags; UsageError on bad combinations."""
    if args.scenario and args.custom:
        raise UsageError("use either --scenario or --custom, not both")
    if not (args.scenario or args.custom or args.resume):
        raise UsageError("one of --scenario, --custom or --resume is required")
    if args.resume and args.custom:
        raise UsageError("--resume takes its scenario from the checkpoint; drop --custom")
    if not 0.0 <= args.alpha0 < 1.0:
        raise UsageError(f"--alpha0 must lie in [0, 1), got {args.alpha0}")
    if args.threads < 1:
        raise UsageError(f"--threads must be >= 1, got {args.threads}")
    if args.interval == 0:
        raise UsageError("--interval must be positive")

    scenario_id = scenario = default_conjecture = None
    try:
        if args.scenario:
            entry = resolve(args.scenario)
            scenario_id, scenario, default_conjecture = entry.name, entry.scenario, entry.conjecture
        elif args.custom:
            scenario = parse_custom(args.custom)
            scenario_id = custom_id(scenario)
        if scenario is not None:
            variate_count(scenario)
    except ValueError as e:
        raise UsageError(str(e)) from None

    return RunConfig(
        scenario_id=scenario_id,
        scenario=scenario,
        conjecture=_resolve_conjecture(args.conjecture, default_conjecture),
        alpha0=args.alpha0,
        n_start=args.start,
        n=args.n,
        interval=args.interval,
        threads=args.threads,
        out=args.out,
        resume=args.resume,
        realign=args.realign,
        sampler=args.sampler,
        seed=args.seed,
        quiet=args.quiet,
        keep_checkpoint_conjecture=bool(args.resume) and args.conjecture is None,
    )


def print_header(title):
    print("=" * RULE_WIDTH)
    print(f"      {title}")
    print("=" * RULE_WIDTH)


def cmd_estimate(config):
    """Run the estimator, streaming checkpoints to CSV; returns an exit code."""
    logger = RunLogger(quiet=config.quiet)
    scenario_id, scenario = config.scenario_id, config.scenario
    alpha0, conjecture = config.alpha0, config.conjecture
    interval, realign = config.interval, config.realign
    sampler, seed = config.sampler, config.seed
    n_start, first_index, initial, out = config.n_start, config.n_start, None, config.out

    if config.resume:
        point = resume(config.resume, expected_scenario=scenario_id)
        saved = point.params
        scenario_id, scenario = point.scenario_id, point.scenario
        alpha0 = float(saved["alpha0"])
        interval = interval or saved.get("interval")
        realign = bool(saved.get("realign", False))
        sampler = saved.get("sampler", "quasi")
        seed = int(saved.get("seed", 0))
        if config.keep_checkpoint_conjecture:
            conjecture = saved.get("conjecture")
        first_index = int(saved.get("n_start", 0))
        n_start, initial, out = point.n, point.counters, config.resume

    interval = interval or default_interval(scenario)
    out = out or paths.checkpoint_path(scenario_id)
    n_end = n_start + config.n
    d = variate_count(scenario)
    spec = make_sequence(d, alpha0)
    conjecture_value = lookup(conjecture).value if conjecture else None

    params = dict(
        scenario_params(scenario),
        scenario=scenario_id,
        d=d,
        alpha0=alpha0,
        interval=interval,
        realign=realign,
        conjecture=conjecture,
        sampler=sampler,
        seed=seed,
        n_start=first_index,
        # advanced by the writer as checkpoints land
        n_end=n_start,
    )
    writer = CheckpointWriter(out, params, append=bool(config.resume))

    if not config.quiet:
        print_header("SEPARABILITY PROBABILITY ESTIMATE")
        entry = SCENARIOS.get(scenario_id)
        about = entry.description if entry is not None else scenario.describe()
        print(f"{COLOR_CYAN}Scenario:{RESET} {scenario_id} ({about})")
        print(f"{COLOR_CYAN}Sequence:{RESET} d={d}, alpha0={alpha0}, sampler={sampler}")
        print(f"{COLOR_CYAN}Indices:{RESET} [{n_start:,}, {n_end:,}) every {interval:,}, threads={config.threads}")
        if conjecture:
            print(f"{COLOR_CYAN}Conjecture:{RESET} {conjecture} = {conjecture_value!r}")
        print("-" * RULE_WIDTH)

    started = time.perf_counter()
    result = run(
        scenario, spec, n_start, n_end, interval, realign,
        threads=config.threads,
        scenario_id=scenario_id,
        conjecture_value=conjecture_value,
        writer=writer,
        initial=initial,
        sampler=sampler,
        seed=seed,
        logger=logger,
    )
    elapsed = time.perf_counter() - started

    c = result.counters
    logger.banner("SUMMARY")
    if not config.quiet:
        print(f"Samples:          {c.n_total:,} ({c.n_skipped:,} skipped)")
        print(f"PPT:              {c.n_ppt:,}")
        print(f"p_ppt:            {_fmt(c.p_ppt)}")
        print(f"det-greater frac: {_fmt(c.det_greater_frac)}")
        if realign:
            print(f"realign frac:     {_fmt(c.realign_frac)}")
            print(f"bound frac:       {_fmt(c.bound_frac)}")
        if result.checkpoints and result.checkpoints[-1].conjecture_ratio is not None:
            print(f"ratio to {conjecture}: {result.checkpoints[-1].conjecture_ratio!r}")
        print(f"Time:             {elapsed:.1f}s")
        print(f"Checkpoints:      {out}")
    return EXIT_OK


def _fmt(value):
    return "n/a" if value is None else repr(value)


def _psep_rows(alphas):
    rows, failed = [], False
    for alpha in alphas:
        value = psep_hs(alpha)
        known = KNOWN_PSEP.get(float(alpha))
        if known is None:
            rows.append([alpha, repr(value), repr(q_det_partition(alpha)), "", "", ""])
            continue
        entry = lookup(known)
        diff = abs(value - entry.value)
        passed = diff <= PSEP_TOL
        failed |= not passed
        rows.append([alpha, repr(value), repr(value / 2), entry.closed_form, f"{diff:.2e}",
                     status_text(passed, False)])
    header = ["alpha", "psep_hs", "q_det_partition", "known", "abs_diff", "status"]
    return header, rows, failed


def _chi_rows():
    rows, failed = [], False
    for d in (2, 4, 6):
        diff = max(abs(chi_dk(d, 0, e * e) - chi_master(d, e)) for e in CHI_GRID)
        passed = diff <= CHI_TOL
        failed |= not passed
        rows.append([f"chi_dk({d},0,eps^2) vs chi_master({d},eps)", f"{diff:.2e}", CHI_TOL,
                     status_text(passed, False)])
    diff = max(abs(sep_function_10d(e) - chi_master(1, e)) for e in CHI_GRID)
    passed = diff <= SEP10_TOL
    failed |= not passed
    rows.append(["sep_function_10d(eps) vs chi_master(1,eps)", f"{diff:.2e}", SEP10_TOL,
                 status_text(passed, False)])
    for d in (1, 2, 4):
        passed = chi_master(d, 1.0) == 1.0 and chi_master(d, 0.0) == 0.0
        failed |= not passed
        rows.append([f"chi_master({d},1) = 1, chi_master({d},0) = 0", "", "", status_text(passed, False)])
    return ["check", "max_abs_diff", "tol", "status"], rows, failed


def _registry_rows():
    rows = [[e.name, e.closed_form, repr(e.value), e.status, e.location, e.provenance]
            for e in constants_registry()]
    return ["name", "closed_form", "value", "status", "location", "provenance"], rows, False


def _xstate_rows():
    checks = verify_xstate_identities()
    rows = []
    for c in checks:
        published = f"{c.published_form} = {c.published!r}" if c.known_discrepancy else ""
        rows.append([c.name, c.closed_form, repr(c.expected), repr(c.computed), f"{c.relative_error:.2e}",
                     published, status_text(c.passed, False, known=c.passed and c.known_discrepancy)])
    failed = not all(c.passed for c in checks)
    header = ["identity", "closed_form", "expected", "computed", "rel_error", "published", "status"]
    return header, rows, failed


def cmd_exact(which, alphas=None, csv_path=None):
    """Print the requested exact tables; EXIT_CHECK_FAILED if any check misses tolerance."""
    sections = EXACT_CHOICES[1:] if which == "all" else (which,)
    builders = {
        "psep": lambda: _psep_rows(alphas or (1.0, 2.0, 4.0)),
        "chi": _chi_rows,
        "registry": _registry_rows,
        "xstate": _xstate_rows,
    }
    any_failed = False
    for section in sections:
        header, rows, failed = builders[section]()
        any_failed |= failed
        print(f"\n{'=' * RULE_WIDTH}")
        print(f"{section.upper()}  {status_text(not failed)}")
        print(f"{'=' * RULE_WIDTH}")
        print(format_table(header, rows))
        if csv_path:
            target = csv_path
            if len(sections) > 1:
                stem, ext = os.path.splitext(csv_path)
                target = f"{stem}_{section}{ext or '.csv'}"
            write_csv(target, header, rows)
    return EXIT_CHECK_FAILED if any_failed else EXIT_OK


def cmd_plot(csv_path, conjecture=None, out=None):
    """Write the ratio SVG for a checkpoint CSV."""
    conjecture = _resolve_conjecture(conjecture, None)
    value = lookup(conjecture).value if conjecture else None
    out = out or paths.plot_path(csv_path)
    title = os.path.basename(csv_path)
    if conjecture:
        title += f" / {conjecture}"
    count = write_ratio_plot(csv_path, out, value, title)
    print(f"Wrote {count} points to {out}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "estimate":
            return cmd_estimate(build_run_config(args))
        if args.command == "exact":
            return cmd_exact(args.which, args.alpha, args.csv)
        return cmd_plot(args.csv_path, args.conjecture, args.out)
    except UsageError as e:
        print(f"sep_console: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CheckpointError, ConvergenceError, OSError, RuntimeError, ValueError) as e:
        print(f"sep_console: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
