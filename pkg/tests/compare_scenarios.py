"""
Acceptance benchmark: long estimator runs compared with known or conjectured values.
Runs each scenario once, checks every tolerance attached to it, and reports
PASS/FAIL per check plus run times. Also checks that worker count and
resuming do not change the counters.

These runs take minutes each at the default 10^7 samples, so they are a
script rather than part of the pytest suite.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from algorithms.estimator import run
from data import paths
from data.scenarios import SCENARIOS
from exact.registry import lookup
from frontend.ui_components import RULE_WIDTH, RunLogger, format_table, status_text
from sequence.qrng import make_sequence
from states.rmt import variate_count


@dataclass(frozen=True)
class Check:
    """
    One acceptance tolerance: metric of a scenario within target +- tol (or inside [low, high]).

    known holds the reason when the target is a documented discrepancy; such a
    check is reported as KNOWN and does not fail the run.
    """
    scenario: str
    metric: str
    target: Optional[float] = None
    tol: Optional[float] = None
    low: Optional[float] = None
    high: Optional[float] = None
    known: Optional[str] = None

    def passes(self, value):
        if value is None:
            return False
        if self.low is not None:
            return self.low <= value <= self.high
        return abs(value - self.target) <= self.tol

    def describe(self):
        if self.low is not None:
            return f"[{self.low:g}, {self.high:g}]"
        return f"{self.target:.9g} +- {self.tol:g}"


# the trace-norm realignment test flags about 1.8% of HS 2x4 states and no PPT ones
REALIGN_DISCREPANCY = "published realignment fractions not reproduced (observed ~0.018 entangled, 0 bound)"

CHECKS = [
    Check("two-rebit-hs", "p_ppt", lookup("hs_two_rebit").value, 7e-4),
    Check("two-qubit-hs", "p_ppt", lookup("hs_two_qubit").value, 6e-4),
    Check("two-qubit-hs", "det_greater_frac", 0.5, 0.002),
    Check("two-qubit-bures", "p_ppt", lookup("bures_two_qubit").value, 4e-4),
    Check("two-qubit-bures", "det_greater_frac", 0.659, 0.004),
    Check("two-rebit-bures", "p_ppt", 0.157096, 6e-4),
    Check("qubit-qutrit-hs", "p_ppt", lookup("hs_qubit_qutrit").value, 3e-4),
    Check("rebit-retrit-hs", "p_ppt", lookup("hs_rebit_retrit").value, 6e-4),
    Check("qubit-qutrit-bures", "p_ppt", lookup("bures_qubit_qutrit").value, 6e-5),
    Check("qubit-qudit-2x4-hs", "p_ppt", lookup("hs_2x4_ppt").value, 6e-5),
    Check("qubit-qudit-2x4-hs", "realign_frac", 0.9423, 0.002, known=REALIGN_DISCREPANCY),
    Check("qubit-qudit-2x4-hs", "bound_frac", low=1e-4, high=4e-4, known=REALIGN_DISCREPANCY),
    Check("two-qutrit-hs", "p_ppt", 1.02e-4, 2e-5),
]

# only meaningful at 10^8 samples
EXTENDED_CHECKS = [
    Check("qubit-qudit-2x4-bures", "p_ppt", low=3e-6, high=9e-6),
]
EXTENDED_N = 100_000_000

REALIGN_SCENARIOS = {"qubit-qudit-2x4-hs"}
DETERMINISM_N = 1_000_000
DETERMINISM_SCENARIO = "two-qubit-hs"


def run_scenario(name, n, threads, quiet=True):
    """
    Run one catalog scenario over [0, n) and collect its final metrics.
    """
    entry = SCENARIOS[name]
    scenario = entry.scenario
    with_realign = name in REALIGN_SCENARIOS

    print(f"\n{'=' * RULE_WIDTH}")
    print(f"Running {name} ({scenario.describe()}), n={n:,}")
    print(f"{'=' * RULE_WIDTH}")

    spec = make_sequence(variate_count(scenario))
    logger = RunLogger(quiet=quiet)
    start = time.perf_counter()
    result = run(scenario, spec, 0, n, max(n // 10, 1), with_realign,
                 threads=threads, scenario_id=name, logger=logger)
    elapsed = time.perf_counter() - start

    c = result.counters
    stats = {
        'scenario': name,
        'n': n,
        'n_total': c.n_total,
        'n_skipped': c.n_skipped,
        'p_ppt': c.p_ppt,
        'det_greater_frac': c.det_greater_frac,
        'realign_frac': c.realign_frac if with_realign else None,
        'bound_frac': c.bound_frac if with_realign else None,
        'time_seconds': elapsed,
    }
    print(f"p_ppt = {c.p_ppt!r}  ({elapsed:.1f}s)")
    return stats


def check_determinism(threads, n=DETERMINISM_N):
    """1 worker vs `threads` workers, and a midpoint resume, over [0, n)."""
    scenario = SCENARIOS[DETERMINISM_SCENARIO].scenario
    spec = make_sequence(variate_count(scenario))
    interval = n // 4

    single = run(scenario, spec, 0, n, interval, threads=1)
    pooled = run(scenario, spec, 0, n, interval, threads=threads)
    half = run(scenario, spec, 0, n // 2, interval, threads=threads)
    resumed = run(scenario, spec, n // 2, n, interval, threads=threads, initial=half.counters)

    return {
        'threads_identical': single.counters == pooled.counters,
        'resume_identical': single.counters == resumed.counters,
    }


def print_summary(all_stats, outcomes):
    """Print one row per acceptance check."""
    print(f"\n{'=' * 80}")
    print("SUMMARY - ACCEPTANCE CHECKS")
    print(f"{'=' * 80}")
    rows = []
    for check, value, passed in outcomes:
        shown = "n/a" if value is None else f"{value:.9g}"
        rows.append([check.scenario, check.metric, shown, check.describe(),
                     status_text(passed, known=check.known is not None)])
    print(format_table(["Scenario", "Metric", "Value", "Target", "Status"], rows))
    for reason in dict.fromkeys(c.known for c, _, _ in outcomes if c.known):
        print(f"KNOWN: {reason}")

    print(f"\n{'Scenario':<26}{'Samples':>14}{'Time (s)':>12}")
    print("-" * 52)
    for stats in all_stats.values():
        print(f"{stats['scenario']:<26}{stats['n_total']:>14,}{stats['time_seconds']:>12.1f}")


def main():
    parser = argparse.ArgumentParser(
        description="Acceptance runs: estimator results against known and conjectured probabilities"
    )
    parser.add_argument("--n", type=int, default=10_000_000,
                        help="Samples per scenario (default 10^7)")
    parser.add_argument("--limit", type=int, default=None,
                        help="Run only the first LIMIT scenarios (for quick testing)")
    parser.add_argument("--scenarios", type=str, default=None,
                        help="Comma-separated list of catalog scenarios to run")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="Worker processes (default: all cores)")
    parser.add_argument("--extended", action="store_true",
                        help=f"Also run the {EXTENDED_N:,}-sample Bures 2x4 check (1-2 hours)")
    parser.add_argument("--skip-determinism", action="store_true",
                        help="Skip the worker-count and resume comparison")
    parser.add_argument("--verbose", action="store_true", help="Print per-checkpoint lines")
    parser.add_argument("--output", type=str, default=paths.ACCEPTANCE_JSON,
                        help="Output JSON file for detailed results")
    args = parser.parse_args()

    checks = list(CHECKS)
    names = list(dict.fromkeys(c.scenario for c in checks))
    if args.scenarios:
        requested = [s.strip() for s in args.scenarios.split(',')]
        unknown = [s for s in requested if s not in SCENARIOS]
        if unknown:
            raise SystemExit(f"Unknown scenarios: {', '.join(unknown)}")
        names = requested
    if args.limit:
        names = names[:args.limit]
    print(f"Scenarios to run: {names}")

    all_stats = {}
    for name in names:
        all_stats[name] = run_scenario(name, args.n, args.threads, quiet=not args.verbose)
    if args.extended:
        for check in EXTENDED_CHECKS:
            all_stats[check.scenario] = run_scenario(check.scenario, EXTENDED_N, args.threads,
                                                     quiet=not args.verbose)
        checks.extend(EXTENDED_CHECKS)

    outcomes = []
    for check in checks:
        if check.scenario not in all_stats:
            continue
        value = all_stats[check.scenario][check.metric]
        outcomes.append((check, value, check.passes(value)))

    print_summary(all_stats, outcomes)

    determinism = None
    if not args.skip_determinism:
        print(f"\nDeterminism: 1 vs {args.threads} workers over [0, {DETERMINISM_N:,})...")
        determinism = check_determinism(args.threads)
        for key, ok in determinism.items():
            print(f"  {key:<20} {status_text(ok)}")

    output_data = {
        'config': {
            'n': args.n,
            'threads': args.threads,
            'scenarios': list(all_stats),
        },
        'results': all_stats,
        'checks': [
            {
                'scenario': c.scenario,
                'metric': c.metric,
                'value': v,
                'target': c.describe(),
                'passed': ok,
                'known_discrepancy': c.known,
            }
            for c, v, ok in outcomes
        ],
        'determinism': determinism,
    }
    os.makedirs(os.path.dirname(os.path.abspath(args.output)), exist_ok=True)
    with open(args.output, "w", encoding="utf-8") as f:
        json.dump(output_data, f, indent=2)

    print(f"\n{'=' * 60}")
    print(f"Detailed results saved to: {args.output}")
    print(f"{'=' * 60}")

    failed = [c for c, _, ok in outcomes if not ok and c.known is None]
    if determinism is not None and not all(determinism.values()):
        failed.append("determinism")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
