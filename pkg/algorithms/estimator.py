"""
Sampling loop: sequence points -> normals -> density matrices -> verdicts -> counters.

One sequence index is one sample; skipped samples still use up their index.
The index range is cut at absolute multiples of BLOCK_SIZE (work units for
the process pool) and of the checkpoint interval, and each block is
vectorized in absolute BATCH_SIZE slices. The partition therefore depends
only on the index range, never on the worker count, and the integer
counters merge to the same totals for any schedule.
"""

import multiprocessing
from dataclasses import dataclass

import numpy as np

from algorithms.checkpoint import Checkpoint, Counters, merge
from sequence.normal import inv_norm_cdf_array
from sequence.qrng import points_block
from states.criteria import classify_batch
from states.rmt import DensityMatrix, make_sampler, variate_count

BLOCK_SIZE = 8192
BATCH_SIZE = 1024
SAMPLERS = ("quasi", "pseudo")

DEFAULT_INTERVAL_SMALL = 5_000_000
DEFAULT_INTERVAL = 1_000_000


@dataclass(frozen=True)
class RunResult:
    checkpoints: list
    counters: Counters


def default_interval(scenario):
    """Checkpoint spacing: 5,000,000 for N = 4 systems, 1,000,000 above."""
    return DEFAULT_INTERVAL_SMALL if scenario.N == 4 else DEFAULT_INTERVAL


def checkpoint_indices(n_start, n_end, interval):
    """Absolute multiples of interval inside (n_start, n_end), then n_end itself."""
    if n_end <= n_start:
        return []
    first = (n_start // interval + 1) * interval
    marks = list(range(first, n_end, interval))
    marks.append(n_end)
    return marks


def split_aligned(lo, hi, size):
    """Cut [lo, hi) at absolute multiples of size."""
    pieces = []
    while lo < hi:
        stop = min(hi, (lo // size + 1) * size)
        pieces.append((lo, stop))
        lo = stop
    return pieces


def pseudo_uniforms(d, lo, hi, seed):
    """
    Independent uniforms for indices [lo, hi), counter-addressed.

    Every absolute block of BLOCK_SIZE indices has its own generator seeded
    by (seed, block index), so a row depends only on its index.
    """
    out = np.empty((hi - lo, d))
    for a, b in split_aligned(lo, hi, BLOCK_SIZE):
        block = a // BLOCK_SIZE
        base = block * BLOCK_SIZE
        rng = np.random.default_rng([seed, block])
        out[a - lo:b - lo] = rng.random((b - base, d))[a - base:]
    return out


def uniform_block(spec, lo, hi, sampler="quasi", seed=0):
    if sampler == "quasi":
        return points_block(spec, lo, hi)
    if sampler == "pseudo":
        return pseudo_uniforms(spec.d, lo, hi, seed)
    raise ValueError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")


def _tally_batch(model, spec, lo, hi, with_realign, sampler, seed, debug):
    s = model.scenario
    u = uniform_block(spec, lo, hi, sampler, seed)
    # an exact 0 coordinate has no normal quantile; the sample is skipped
    usable = np.all((u > 0.0) & (u < 1.0), axis=1)
    normals = inv_norm_cdf_array(np.where(usable[:, None], u, 0.5))

    rho, ok = model.sample_batch(normals)
    ok &= usable
    if not ok.all():
        rho = np.where(ok[:, None, None], rho, np.eye(s.N) / s.N)

    if debug:
        for i in np.flatnonzero(ok):
            problems = DensityMatrix(rho[i], s.n_a, s.n_b).violations()
            if problems:
                raise RuntimeError(f"index {lo + i}: {', '.join(problems)}")

    verdict = classify_batch(rho, s.n_a, s.n_b, with_realign)
    ok &= verdict.ok
    ppt = verdict.ppt & ok
    n_total = int(ok.sum())

    entangled = 0
    bound = 0
    if with_realign:
        flagged = verdict.realign_entangled & ok
        entangled = int(flagged.sum())
        bound = int((flagged & ppt).sum())

    return Counters(
        n_total=n_total,
        n_skipped=len(ok) - n_total,
        n_ppt=int(ppt.sum()),
        n_ppt_det_greater=int((ppt & verdict.det_pt_greater).sum()),
        n_realign_entangled=entangled,
        n_bound_entangled=bound,
        realign=with_realign,
    )


def tally_block(scenario, spec, lo, hi, with_realign=False, sampler="quasi", seed=0, debug=False):
    """Counters for indices [lo, hi); the unit of work handed to pool workers."""
    model = make_sampler(scenario)
    counters = Counters(realign=with_realign)
    for a, b in split_aligned(lo, hi, BATCH_SIZE):
        counters = merge(counters, _tally_batch(model, spec, a, b, with_realign, sampler, seed, debug))
    return counters


def _pool_context():
    methods = multiprocessing.get_all_start_methods()
    return multiprocessing.get_context("fork" if "fork" in methods else "spawn")


def run(scenario, spec, n_start, n_end, interval, with_realign=False, *,
        threads=1, scenario_id=None, conjecture_value=None, writer=None,
        initial=None, sampler="quasi", seed=0, logger=None, debug=False):
    """
    Estimate over sequence indices [n_start, n_end).

    :param interval: checkpoint spacing; checkpoints fall on absolute multiples
                     of it plus n_end
    :param initial: Counters carried over from a resumed run
    :param writer: CheckpointWriter receiving every checkpoint in order
    :param logger: RunLogger for one line per checkpoint
    :return: RunResult with the ordered checkpoints and final cumulative counters
    """
    d = variate_count(scenario)
    if spec.d != d:
        raise ValueError(f"{scenario.describe()} needs a {d}-dimensional sequence, got d={spec.d}")
    if n_start < 0 or n_end < n_start:
        raise ValueError(f"bad index range [{n_start}, {n_end})")
    if interval <= 0:
        raise ValueError(f"checkpoint interval must be positive, got {interval}")
    if sampler not in SAMPLERS:
        raise ValueError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    scenario_id = scenario_id or scenario.describe()
    counters = initial if initial is not None else Counters(realign=with_realign)
    checkpoints = []
    marks = checkpoint_indices(n_start, n_end, interval)

    pool = _pool_context().Pool(threads) if threads > 1 and marks else None
    try:
        lo = n_start
        for mark in marks:
            jobs = [
                (scenario, spec, a, b, with_realign, sampler, seed, debug)
                for a, b in split_aligned(lo, mark, BLOCK_SIZE)
            ]
            if pool is not None:
                results = pool.starmap(tally_block, jobs)
            else:
                results = [tally_block(*job) for job in jobs]
            for part in results:
                counters = merge(counters, part)

            checkpoint = Checkpoint(
                scenario_id=scenario_id,
                n=mark,
                counters=counters,
                realign=with_realign,
                conjecture_value=conjecture_value,
            )
            checkpoints.append(checkpoint)
            if writer is not None:
                writer.append(checkpoint)
            if logger is not None:
                ratio = checkpoint.conjecture_ratio
                ratio_text = f"  ratio={ratio:.9f}" if ratio is not None else ""
                p_text = f"{checkpoint.p_ppt:.9g}" if checkpoint.p_ppt is not None else "n/a"
                logger.add_log(f"n={mark:,}  p_ppt={p_text}{ratio_text}")
            lo = mark
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    return RunResult(checkpoints=checkpoints, counters=counters)
