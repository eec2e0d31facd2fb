"""
Random density matrices built from standard normal variates.

Each sample consumes one block of normals laid out as: Ginibre block first,
then (for the interpolated Bures-type measure) the block for the Haar factor.
Inside a block entries are filled row-major, complex entries taking
consecutive (real, imaginary) pairs.

All kernels also accept stacked input (leading batch axes), which is what the
estimator feeds them; the single-sample functions raise SkippedSample where
the batched path returns a validity mask instead.
"""

from dataclasses import dataclass

import numpy as np

FIELDS = ("real", "complex")
MEASURES = ("induced", "osz")
SUPPORTED_DIMENSIONS = (4, 6, 8, 9, 10)

BURES_X = 0.5
# |r_jj| below this fraction of the column scale is treated as a singular draw
SINGULAR_TOL = 1e-14
DENSITY_TOL = 1e-12


class SkippedSample(RuntimeError):
    """Probability-zero draw (singular Ginibre block or vanishing trace)."""


@dataclass(frozen=True)
class Scenario:
    """
    Bipartite system and sampling measure.

    measure "induced" uses k (k=0 is Hilbert-Schmidt); measure "osz" uses
    the interpolation parameter x (x=1/2 is Bures).
    """
    n_a: int
    n_b: int
    field: str = "complex"
    measure: str = "induced"
    k: int = 0
    x: float = 0.0

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 1:
            raise ValueError(f"subsystem dimensions must be positive, got {self.n_a}x{self.n_b}")
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}, got {self.field!r}")
        if self.measure not in MEASURES:
            raise ValueError(f"measure must be one of {MEASURES}, got {self.measure!r}")
        if self.k < 0:
            raise ValueError(f"induced measure needs k >= 0, got {self.k}")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"interpolation parameter must lie in [0, 1], got {self.x}")

    @property
    def N(self):
        return self.n_a * self.n_b

    @property
    def is_real(self):
        return self.field == "real"

    @property
    def ginibre_shape(self):
        extra = 1 if self.is_real else 0
        if self.measure == "induced":
            return self.N, self.N + extra + self.k
        return self.N, self.N + extra

    @property
    def has_haar_factor(self):
        return self.measure == "osz"

    def describe(self):
        if self.measure == "induced":
            label = "hs" if self.k == 0 else f"induced(k={self.k})"
        else:
            label = "bures" if self.x == BURES_X else f"osz(x={self.x})"
        return f"{self.n_a}x{self.n_b} {self.field} {label}"


def hilbert_schmidt(n_a, n_b, field="complex"):
    return Scenario(n_a, n_b, field, "induced", k=0)


def bures(n_a, n_b, field="complex"):
    return Scenario(n_a, n_b, field, "osz", x=BURES_X)


@dataclass(frozen=True)
class DensityMatrix:
    """N x N Hermitian, unit-trace, PSD matrix with its subsystem split."""
    entries: np.ndarray
    n_a: int
    n_b: int

    @property
    def N(self):
        return self.n_a * self.n_b

    def violations(self, tol=DENSITY_TOL):
        """Names of the density-matrix invariants this matrix breaks (empty when valid)."""
        m = self.entries
        problems = []
        if m.shape != (self.N, self.N):
            problems.append(f"shape {m.shape} != ({self.N}, {self.N})")
            return problems
        if np.max(np.abs(m - m.conj().T)) > tol:
            problems.append("not Hermitian")
        if abs(np.trace(m).real - 1.0) > tol:
            problems.append("trace != 1")
        if np.linalg.eigvalsh(m)[0] < -tol:
            problems.append("not positive semidefinite")
        return problems


def _entries_per(field):
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
    return 2 if field == "complex" else 1


def _as_values(normals):
    values = normals.values if hasattr(normals, "values") else normals
    return np.asarray(values, dtype=np.float64)


def variate_count(s):
    """Normals consumed per sample for scenario s."""
    if s.N not in SUPPORTED_DIMENSIONS:
        raise ValueError(
            f"unsupported system {s.n_a}x{s.n_b}: N={s.N} not in {SUPPORTED_DIMENSIONS}"
        )
    per = _entries_per(s.field)
    rows, cols = s.ginibre_shape
    count = rows * cols * per
    if s.has_haar_factor:
        count += s.N * s.N * per
    return count


def ginibre(rows, cols, field, normals):
    """
    Fill a rows x cols matrix from normals, row-major.

    :param normals: NormalBlock or array whose last axis has rows*cols
                    (real) or 2*rows*cols (complex) entries
    """
    values = _as_values(normals)
    per = _entries_per(field)
    if values.shape[-1] != rows * cols * per:
        raise ValueError(
            f"{field} {rows}x{cols} Ginibre needs {rows * cols * per} normals, "
            f"got {values.shape[-1]}"
        )
    batch = values.shape[:-1]
    if per == 2:
        pairs = values.reshape(batch + (rows, cols, 2))
        return pairs[..., 0] + 1j * pairs[..., 1]
    return values.reshape(batch + (rows, cols)).copy()


def _haar_masked(n, field, normals):
    """Haar factors from Ginibre draws plus a mask of non-singular draws."""
    z = ginibre(n, n, field, normals)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    magnitude = np.abs(diag)
    scale = np.sqrt(np.sum(np.abs(z) ** 2, axis=(-2, -1)))
    ok = np.all(magnitude > SINGULAR_TOL * scale[..., None], axis=-1)
    # phase (or sign) fix makes the distribution exactly Haar
    phases = diag / np.where(magnitude > 0, magnitude, 1.0)
    return q * phases[..., None, :], ok


def haar_factor(n, field, normals):
    """
    Haar-random unitary (complex) or orthogonal (real) n x n matrix.

    QR of a Ginibre matrix, with column j of Q multiplied by r_jj / |r_jj|.
    """
    u, ok = _haar_masked(n, field, normals)
    if not np.all(ok):
        raise SkippedSample(f"singular {n}x{n} Ginibre draw for Haar factor")
    return u


def _dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def _normalized_gram(b):
    """B B-dagger over its trace, symmetrized, with a mask of usable traces."""
    gram = b @ _dagger(b)
    trace = np.real(np.trace(gram, axis1=-2, axis2=-1))
    ok = np.isfinite(trace) & (trace > 0.0)
    rho = gram / np.where(ok, trace, 1.0)[..., None, None]
    return 0.5 * (rho + _dagger(rho)), ok


def _osz_product(a, u, x):
    n = a.shape[-2]
    return ((1.0 - x) * np.eye(n) + x * u) @ a


def osz_density(A, U, x, dims=None):
    """
    Interpolated density matrix rho = B B-dagger / Tr, with B = (y I + x U) A, y = 1 - x.

    x = 0 gives the Hilbert-Schmidt matrix of A, x = 1/2 the Bures measure.
    dims defaults to (N, 1) when no subsystem split is given.
    """
    A = np.asarray(A)
    U = np.asarray(U)
    if U.shape[-1] != A.shape[-2] or U.shape[-2] != A.shape[-2]:
        raise ValueError(f"U shape {U.shape} does not match A rows {A.shape[-2]}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"interpolation parameter must lie in [0, 1], got {x}")
    rho, ok = _normalized_gram(_osz_product(A, U, x))
    if not np.all(ok):
        raise SkippedSample("zero trace in interpolated density matrix")
    n_a, n_b = dims if dims is not None else (A.shape[-2], 1)
    return DensityMatrix(entries=rho, n_a=n_a, n_b=n_b)


def induced_density(A, dims=None):
    """rho = A A-dagger / Tr(A A-dagger)."""
    A = np.asarray(A)
    rho, ok = _normalized_gram(A)
    if not np.all(ok):
        raise SkippedSample("zero trace in induced density matrix")
    n_a, n_b = dims if dims is not None else (A.shape[-2], 1)
    return DensityMatrix(entries=rho, n_a=n_a, n_b=n_b)


class BaseSampler:
    """
    Turns normal-variate blocks into density matrices for one scenario.

    Subclasses implement _build, which maps a stack of variate rows to a
    stack of density matrices and a validity mask.
    """

    def __init__(self, scenario):
        self.scenario = scenario
        self.variate_count = variate_count(scenario)
        self.rows, self.cols = scenario.ginibre_shape
        self.ginibre_size = self.rows * self.cols * _entries_per(scenario.field)

    def _build(self, values):
        raise NotImplementedError

    def sample_batch(self, normals):
        """
        :param normals: array of shape (batch, variate_count)
        :return: (rho stack of shape (batch, N, N), boolean mask of usable samples)
        """
        values = _as_values(normals)
        if values.shape[-1] != self.variate_count:
            raise ValueError(
                f"{self.scenario.describe()} needs {self.variate_count} normals per sample, "
                f"got {values.shape[-1]}"
            )
        return self._build(values)

    def sample(self, normals):
        """Single DensityMatrix; raises SkippedSample on a probability-zero draw."""
        rho, ok = self.sample_batch(_as_values(normals)[None, :])
        if not ok[0]:
            raise SkippedSample(f"probability-zero draw for {self.scenario.describe()}")
        return DensityMatrix(entries=rho[0], n_a=self.scenario.n_a, n_b=self.scenario.n_b)


class InducedSampler(BaseSampler):
    """Induced measure: Ginibre block only, no unitary factor."""

    def _build(self, values):
        a = ginibre(self.rows, self.cols, self.scenario.field, values)
        return _normalized_gram(a)


class OSZSampler(BaseSampler):
    """Interpolated measure: Ginibre block followed by a Haar factor block."""

    def _build(self, values):
        s = self.scenario
        a = ginibre(self.rows, self.cols, s.field, values[..., :self.ginibre_size])
        u, haar_ok = _haar_masked(s.N, s.field, values[..., self.ginibre_size:])
        rho, trace_ok = _normalized_gram(_osz_product(a, u, s.x))
        return rho, haar_ok & trace_ok


def make_sampler(scenario):
    if scenario.measure == "osz":
        return OSZSampler(scenario)
    return InducedSampler(scenario)
