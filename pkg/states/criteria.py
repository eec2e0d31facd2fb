"""
Entanglement tests on density matrices: PPT (Peres-Horodecki), the
determinant partition |rho^PT| > |rho|, and the realignment (computable
cross-norm) criterion.

Composite indices are (a, b) -> a * n_b + b. Batched helpers work on
stacks of shape (..., N, N) and are what the estimator calls; classify
wraps them for one matrix.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

REALIGN_SLACK = 1e-12


@dataclass(frozen=True)
class Verdict:
    ppt: bool
    min_pt_eigenvalue: float
    det_pt_greater: bool
    realign_norm: Optional[float] = None
    realign_entangled: Optional[bool] = None
    bound_entangled: Optional[bool] = None


@dataclass(frozen=True)
class VerdictBatch:
    """Per-sample verdict arrays for a stack; ok is False where a kernel failed."""
    ok: np.ndarray
    ppt: np.ndarray
    min_pt_eigenvalue: np.ndarray
    det_pt_greater: np.ndarray
    realign_norm: Optional[np.ndarray] = None
    realign_entangled: Optional[np.ndarray] = None


def _unpack(rho, dims):
    if hasattr(rho, "entries"):
        return np.asarray(rho.entries), rho.n_a, rho.n_b
    if dims is None:
        raise ValueError("dims=(n_a, n_b) is required for a bare matrix")
    return np.asarray(rho), dims[0], dims[1]


def partial_transpose_array(m, n_a, n_b, side="b"):
    """Partial transpose of a matrix stack on subsystem A or B."""
    n = m.shape[-1]
    if n_a * n_b != n:
        raise ValueError(f"dims {n_a}x{n_b} do not match matrix size {n}")
    blocks = m.reshape(m.shape[:-2] + (n_a, n_b, n_a, n_b))
    if side == "b":
        blocks = np.swapaxes(blocks, -3, -1)
    elif side == "a":
        blocks = np.swapaxes(blocks, -4, -2)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    return blocks.reshape(m.shape)


def partial_transpose(rho, dims=None, side="b"):
    """
    output[(a,b),(a',b')] = rho[(a,b'),(a',b)] for side "b".

    :param rho: DensityMatrix, or a bare matrix together with dims
    """
    m, n_a, n_b = _unpack(rho, dims)
    return partial_transpose_array(m, n_a, n_b, side)


def realign_array(m, n_a, n_b):
    """R[(a,a'),(b,b')] = rho[(a,b),(a',b')] over a matrix stack."""
    blocks = m.reshape(m.shape[:-2] + (n_a, n_b, n_a, n_b))
    blocks = np.swapaxes(blocks, -3, -2)
    return blocks.reshape(m.shape[:-2] + (n_a * n_a, n_b * n_b))


def realign(rho, dims=None):
    m, n_a, n_b = _unpack(rho, dims)
    return realign_array(m, n_a, n_b)


def realign_norm(rho, dims=None):
    """Trace norm (sum of singular values) of the realigned matrix."""
    r = realign(rho, dims)
    return float(np.sum(np.linalg.svd(r, compute_uv=False)))


def _classify_stack(m, n_a, n_b, with_realign):
    pt_eigs = np.linalg.eigvalsh(partial_transpose_array(m, n_a, n_b))
    eigs = np.linalg.eigvalsh(m)
    min_pt = pt_eigs[..., 0]
    # determinants as eigenvalue products; a tie counts as not greater
    det_greater = np.prod(pt_eigs, axis=-1) > np.prod(eigs, axis=-1)
    norms = None
    if with_realign:
        norms = np.sum(np.linalg.svd(realign_array(m, n_a, n_b), compute_uv=False), axis=-1)
    return min_pt, det_greater, norms


def classify_batch(m, n_a, n_b, with_realign=False):
    """
    Verdicts for a stack of density matrices of shape (batch, N, N).

    A LAPACK failure on the stack falls back to one matrix at a time, and
    the matrices that still fail come back with ok=False.
    """
    m = np.asarray(m)
    batch = m.shape[0]
    try:
        min_pt, det_greater, norms = _classify_stack(m, n_a, n_b, with_realign)
        ok = np.ones(batch, dtype=bool)
    except np.linalg.LinAlgError:
        ok = np.ones(batch, dtype=bool)
        min_pt = np.zeros(batch)
        det_greater = np.zeros(batch, dtype=bool)
        norms = np.zeros(batch) if with_realign else None
        for i in range(batch):
            try:
                one = _classify_stack(m[i:i + 1], n_a, n_b, with_realign)
            except np.linalg.LinAlgError:
                ok[i] = False
                continue
            min_pt[i] = one[0][0]
            det_greater[i] = one[1][0]
            if with_realign:
                norms[i] = one[2][0]

    ok &= np.isfinite(min_pt)
    ppt = ok & (min_pt >= 0.0)
    entangled = None
    if with_realign:
        ok &= np.isfinite(norms)
        entangled = ok & (norms > 1.0 + REALIGN_SLACK)
    return VerdictBatch(
        ok=ok,
        ppt=ppt,
        min_pt_eigenvalue=min_pt,
        det_pt_greater=ok & det_greater,
        realign_norm=norms,
        realign_entangled=entangled,
    )


def classify(rho, with_realign=False, dims=None):
    """
    Verdict for one density matrix.

    ppt is the strict comparison min eigenvalue of rho^PT >= 0. Eigensolver
    or SVD failure raises numpy.linalg.LinAlgError.
    """
    m, n_a, n_b = _unpack(rho, dims)
    min_pt, det_greater, norms = _classify_stack(m[None], n_a, n_b, with_realign)
    min_pt = float(min_pt[0])
    ppt = min_pt >= 0.0
    if not with_realign:
        return Verdict(ppt=ppt, min_pt_eigenvalue=min_pt, det_pt_greater=bool(det_greater[0]))

    norm = float(norms[0])
    entangled = norm > 1.0 + REALIGN_SLACK
    return Verdict(
        ppt=ppt,
        min_pt_eigenvalue=min_pt,
        det_pt_greater=bool(det_greater[0]),
        realign_norm=norm,
        realign_entangled=entangled,
        bound_entangled=ppt and entangled,
    )
