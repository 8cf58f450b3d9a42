"""Simulation of Z_n(x) and zeta(1/2 + i S_n) along Cauchy walks.

Every replicate ``r`` uses the Philox substream keyed by ``(seed, r)``.
Averages are taken with :func:`math.fsum`, which is exactly rounded and
therefore independent of summation order, so no result depends on how work
was split between threads.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kernels import set_workers
from .cauchy_walk import RngStreamKey, WalkPath, generate_walk, walk_positions
from .errors import DomainError
from .second_order import MomentQuery, SecondMomentSet, second_moment
from .zeta_eval import ZetaEvalConfig, truncated_parts, zeta_critical_many

N_BATCHES = 30
DEFAULT_THRESHOLD = 4.0
BLOCKS = ("c11", "c12", "c21", "c22", "combined")


# -- statistics helpers --------------------------------------------------------


def fmean(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=np.float64)
    return math.fsum(values.tolist()) / values.size


def batch_stderr(values: np.ndarray, batches: int = N_BATCHES) -> float:
    """Standard error of the mean from ``batches`` contiguous batch means.

    Falls back to the i.i.d. formula when there are fewer values than batches.
    """
    values = np.asarray(values, dtype=np.float64)
    R = values.size
    if R < 2:
        return math.inf
    if R < batches:
        mu = fmean(values)
        var = math.fsum(((values - mu) ** 2).tolist()) / (R - 1)
        return math.sqrt(var / R)
    edges = np.linspace(0, R, batches + 1).round().astype(int)
    means = np.array([fmean(values[a:b]) for a, b in zip(edges[:-1], edges[1:])])
    sizes = np.diff(edges)
    grand = fmean(values)
    # weighted batch-means variance of the grand mean
    var = math.fsum((sizes * (means - grand) ** 2).tolist()) / (batches - 1)
    return math.sqrt(var / R)


def cmean(values: np.ndarray) -> complex:
    values = np.asarray(values, dtype=np.complex128)
    return complex(fmean(values.real), fmean(values.imag))


def cstderr(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=np.complex128)
    return batch_stderr(values.real), batch_stderr(values.imag)


# -- Z_n(x) ---------------------------------------------------------------------


def _z_parts(sigma: float, u: np.ndarray, x: float) -> tuple[np.ndarray, np.ndarray]:
    return truncated_parts(sigma, np.asarray(u, dtype=np.float64), x)


def simulate_Z(n: int, sigma: float, x: float, walk: WalkPath) -> complex:
    """Z_n(x) = sum_{k<=x} k^-(sigma + i S_n) - x^(1-sigma-iS_n)/(1-sigma-iS_n)."""
    if walk.length < n:
        raise DomainError(f"walk of length {walk.length} has no S_{n}")
    if not x >= 1:
        raise DomainError(f"x must be >= 1, got {x}")
    z1, z2 = _z_parts(sigma, np.array([walk[n]]), x)
    return complex(z1[0] - z2[0])


def cross_samples(za: np.ndarray, zb: np.ndarray) -> np.ndarray:
    """Per-replicate products ``za * conj(zb)``."""
    return np.asarray(za) * np.conj(np.asarray(zb))


@dataclass
class MomentEstimate:
    """Sample moments of Z_n(x) and Z_m(x) over R walks.

    ``blocks`` holds sample means of the four products Z_ni conj(Z_mj) and of
    Z_n conj(Z_m); ``block_stderr`` the batch-means standard errors of their
    real and imaginary parts.
    """

    n: int
    m: int
    sigma: float
    x: float
    mean: complex
    second_moment_abs: float
    cross_moment: complex
    stderr_mean: float
    stderr_second: float
    R: int
    seed: int
    stderr_mean_imag: float = 0.0
    stderr_cross: tuple[float, float] = (0.0, 0.0)
    second_moment_abs_n2: float = 0.0
    stderr_second_n2: float = 0.0
    blocks: dict[str, complex] = field(default_factory=dict)
    block_stderr: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.R < 2:
            raise DomainError("an estimate needs at least 2 replicates")


def estimate_moments(
    n: int,
    m: int,
    sigma: float,
    x: float,
    R: int,
    seed: int,
    workers: int | None = None,
) -> MomentEstimate:
    """Estimate E Z_n, E|Z_n|^2 and E Z_n conj(Z_m) from R independent walks."""
    if R < 100:
        raise DomainError(f"estimate_moments needs R >= 100, got {R}")
    if not (1 <= n <= m):
        raise DomainError(f"need 1 <= n <= m, got n={n}, m={m}")
    set_workers(workers)
    S = walk_positions(m, seed, range(R), [n, m])
    zn1, zn2 = _z_parts(sigma, S[:, 0], x)
    if m == n:
        zm1, zm2 = zn1, zn2
    else:
        zm1, zm2 = _z_parts(sigma, S[:, 1], x)
    zn = zn1 - zn2
    zm = zm1 - zm2
    samples = {
        "c11": cross_samples(zn1, zm1),
        "c12": cross_samples(zn1, zm2),
        "c21": cross_samples(zn2, zm1),
        "c22": cross_samples(zn2, zm2),
        "combined": cross_samples(zn, zm),
    }
    abs2 = np.abs(zn) ** 2
    abs2_n2 = np.abs(zn2) ** 2
    se_re, se_im = cstderr(zn)
    return MomentEstimate(
        n=n,
        m=m,
        sigma=sigma,
        x=x,
        mean=cmean(zn),
        second_moment_abs=fmean(abs2),
        cross_moment=cmean(samples["combined"]),
        stderr_mean=se_re,
        stderr_second=batch_stderr(abs2),
        R=R,
        seed=seed,
        stderr_mean_imag=se_im,
        stderr_cross=cstderr(samples["combined"]),
        second_moment_abs_n2=fmean(abs2_n2),
        stderr_second_n2=batch_stderr(abs2_n2),
        blocks={k: cmean(v) for k, v in samples.items()},
        block_stderr={k: cstderr(v) for k, v in samples.items()},
    )


# -- verification --------------------------------------------------------------


def z_score(estimate: float, exact: float, stderr: float) -> float:
    diff = estimate - exact
    if stderr > 0:
        return diff / stderr
    return 0.0 if diff == 0 else math.copysign(math.inf, diff)


@dataclass
class BlockCheck:
    name: str
    exact: float
    estimate: complex
    stderr_re: float
    stderr_im: float
    z: float
    z_imag: float


@dataclass
class VerificationReport:
    query: MomentQuery
    exact: float
    estimate: MomentEstimate
    z_score: float
    passed: bool
    threshold: float = DEFAULT_THRESHOLD
    quadrature_fallback: bool = False
    blocks: list[BlockCheck] = field(default_factory=list)
    wall_time: float = 0.0

    def block_gate(self, soft: float = 4.0, hard: float = 6.0) -> bool:
        """At most one block beyond ``soft`` standard errors, none beyond ``hard``."""
        zs = [abs(b.z) for b in self.blocks]
        return sum(z > soft for z in zs) <= 1 and all(z <= hard for z in zs)

    def rows(self) -> list[dict]:
        out = []
        for b in self.blocks:
            out.append(
                {
                    "n": self.query.n,
                    "m": self.query.m,
                    "sigma": self.query.sigma,
                    "x": self.query.x,
                    "R": self.estimate.R,
                    "seed": self.estimate.seed,
                    "block": b.name,
                    "exact": b.exact,
                    "estimate_re": b.estimate.real,
                    "estimate_im": b.estimate.imag,
                    "stderr_re": b.stderr_re,
                    "stderr_im": b.stderr_im,
                    "z": b.z,
                    "z_imag": b.z_imag,
                    "quadrature_fallback": self.quadrature_fallback,
                    "passed": self.passed,
                }
            )
        return out


def verify_second_order(
    n: int,
    m: int,
    sigma: float,
    x: float,
    R: int,
    seed: int,
    threshold: float = DEFAULT_THRESHOLD,
    workers: int | None = None,
) -> VerificationReport:
    """Compare Monte Carlo block moments with the exact finite-x values.

    Passes when the combined moment's z-score is within ``threshold``.  The
    case m = n + 1 at sigma = 1/2 is routed to the quadrature reference.
    """
    started = time.perf_counter()
    q = MomentQuery(n, m, sigma, x)
    exact: SecondMomentSet = second_moment(q, quadrature_fallback=True)
    est = estimate_moments(n, m, sigma, x, R, seed, workers=workers)
    checks = []
    for name in BLOCKS:
        target = getattr(exact, name).real
        got = est.blocks[name]
        se_re, se_im = est.block_stderr[name]
        checks.append(
            BlockCheck(
                name,
                target,
                got,
                se_re,
                se_im,
                z_score(got.real, target, se_re),
                z_score(got.imag, 0.0, se_im),
            )
        )
    z = checks[-1].z
    return VerificationReport(
        query=q,
        exact=exact.combined.real,
        estimate=est,
        z_score=z,
        passed=abs(z) <= threshold,
        threshold=threshold,
        quadrature_fallback=exact.quadrature_fallback,
        blocks=checks,
        wall_time=time.perf_counter() - started,
    )


# -- L^2 approximation -----------------------------------------------------------


@dataclass(frozen=True)
class GapEstimate:
    x: float
    gap: float
    stderr: float


def approximation_gap(
    n: int,
    x_list: list[float],
    x_ref: float,
    R: int,
    seed: int,
    sigma: float = 0.5,
    workers: int | None = None,
) -> list[GapEstimate]:
    """Estimate E|Z_n(x) - Z_n(x_ref)|^2 for each x, reusing the same walks."""
    x_list = [float(v) for v in x_list]
    if not x_list or any(b <= a for a, b in zip(x_list, x_list[1:])):
        raise DomainError("x_list must be non-empty and strictly ascending")
    if x_ref < x_list[-1]:
        raise DomainError("x_ref must be at least max(x_list)")
    if x_ref < 10 * x_list[-1]:
        warnings.warn("x_ref below 10 * max(x_list); the proxy may be biased", stacklevel=2)
    if R < 2:
        raise DomainError("need R >= 2")
    set_workers(workers)
    S = walk_positions(n, seed, range(R), [n])[:, 0]
    z1, z2 = _z_parts(sigma, S, x_ref)
    ref = z1 - z2
    out = []
    for x in x_list:
        if x == x_ref:
            z = ref
        else:
            a, b = _z_parts(sigma, S, x)
            z = a - b
        d = np.abs(z - ref) ** 2
        out.append(GapEstimate(x, fmean(d), batch_stderr(d)))
    return out


# -- partial-sum trajectories ----------------------------------------------------


def checkpoints(N: int) -> list[int]:
    """3, then ceil(10^(j/4)) for j = 0, 1, ... up to N, then N itself."""
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    pts = {3, N}
    j = 0
    while True:
        v = math.ceil(10 ** (j / 4))
        if v > N:
            break
        if v >= 3:
            pts.add(v)
        j += 1
    return sorted(pts)


@dataclass(frozen=True)
class TrajectoryRecord:
    seed: int
    replicate_index: int
    n: int
    s_n: float
    zeta_n: complex
    running_sum: complex
    normalized_stat: float
    capped: bool

    def as_row(self) -> dict:
        return {
            "seed": self.seed,
            "replicate_index": self.replicate_index,
            "n": self.n,
            "s_n": self.s_n,
            "zeta_re": self.zeta_n.real,
            "zeta_im": self.zeta_n.imag,
            "running_sum_re": self.running_sum.real,
            "running_sum_im": self.running_sum.imag,
            "normalized_stat": self.normalized_stat,
            "capped": self.capped,
        }


@dataclass
class Trajectory:
    """Full path of one run: zeta values, running sums and the normalised statistic."""

    key: RngStreamKey
    b: float
    walk: WalkPath
    zeta: np.ndarray
    capped: np.ndarray
    running_sum: np.ndarray
    stat: np.ndarray  # index n-1; nan for n < 3

    @property
    def capped_count(self) -> int:
        return int(self.capped.sum())

    def records(self, points: list[int] | None = None) -> list[TrajectoryRecord]:
        N = self.walk.length
        points = checkpoints(N) if points is None else points
        out = []
        prev = 0
        for n in points:
            out.append(
                TrajectoryRecord(
                    self.key.seed,
                    self.key.replicate_index,
                    n,
                    float(self.walk.values[n - 1]),
                    complex(self.zeta[n - 1]),
                    complex(self.running_sum[n - 1]),
                    float(self.stat[n - 1]),
                    bool(self.capped[prev:n].any()),
                )
            )
            prev = n
        return out


def normalized_stat(running_sum: complex, n: int, b: float) -> float:
    """|M_n - n| / (sqrt(n) (log n)^b), defined for n >= 3."""
    if n < 3:
        raise DomainError("the normaliser is defined for n >= 3")
    return abs(running_sum - n) / (math.sqrt(n) * math.log(n) ** b)


def _stat_array(running_sum: np.ndarray, b: float) -> np.ndarray:
    n = np.arange(1, running_sum.size + 1, dtype=np.float64)
    stat = np.full(running_sum.size, np.nan)
    k = n >= 3
    stat[k] = np.abs(running_sum[k] - n[k]) / (np.sqrt(n[k]) * np.log(n[k]) ** b)
    return stat


def simulate_trajectory(
    N: int,
    b: float,
    key: RngStreamKey,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
    walk: WalkPath | None = None,
) -> Trajectory:
    """Run M_n = sum_{k<=n} zeta(sigma + i S_k) for n = 1..N.

    Heights beyond ``cfg.t_cap`` contribute 1 and are flagged.  ``walk``
    replaces the generated walk (used by tests to force specific paths).
    """
    if N < 3:
        raise DomainError(f"N must be >= 3, got {N}")
    if walk is None:
        walk = generate_walk(N, key)
    elif walk.length < N:
        raise DomainError(f"supplied walk has length {walk.length} < N = {N}")
    else:
        walk = WalkPath(walk.seed, walk.replicate_index, walk.values[:N])
    zeta, capped = zeta_critical_many(walk.values, cfg)
    zeta[capped] = 1.0
    running = np.cumsum(zeta)
    return Trajectory(key, b, walk, zeta, capped, running, _stat_array(running, b))


def _warn_b(b: float) -> None:
    if b <= 2:
        warnings.warn(f"b = {b} <= 2 lies outside the regime b > 2", stacklevel=3)


@dataclass
class TrajectoryRun:
    records: list[TrajectoryRecord]
    capped_count: int
    total_samples: int

    @property
    def capped_fraction(self) -> float:
        return self.capped_count / self.total_samples


def theorem2_run(
    N: int,
    b: float,
    seed: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
    replicate_index: int = 0,
    walk: WalkPath | None = None,
    workers: int | None = None,
) -> TrajectoryRun:
    """Checkpoint records of one trajectory keyed by ``(seed, replicate_index)``."""
    _warn_b(b)
    set_workers(workers)
    tr = simulate_trajectory(N, b, RngStreamKey(seed, replicate_index), cfg, walk=walk)
    return TrajectoryRun(tr.records(), tr.capped_count, N)


@dataclass
class SupStatEstimate:
    b: float
    N: int
    R: int
    estimate: float
    stderr: float
    capped_fraction: float


def _sup_estimate(sups: np.ndarray, b: float, N: int, capped: int) -> SupStatEstimate:
    sq = np.asarray(sups) ** 2
    R = sq.size
    mu = fmean(sq)
    var = math.fsum(((sq - mu) ** 2).tolist()) / (R - 1)
    return SupStatEstimate(b, N, R, mu, math.sqrt(var / R), capped / (R * N))


def ensemble_sup_curve(
    b: float,
    N_list: list[int],
    R: int,
    seed: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
    workers: int | None = None,
) -> list[SupStatEstimate]:
    """E[sup_{3<=n<=N} stat_n^2] for each N in ``N_list``, from one set of R walks.

    Trajectory r uses the substream ``(seed, r)``; shorter horizons reuse the
    prefixes of the longest run.
    """
    if R < 20:
        raise DomainError(f"ensemble needs R >= 20, got {R}")
    N_list = sorted(int(v) for v in N_list)
    if N_list[0] < 3:
        raise DomainError("every N must be >= 3")
    _warn_b(b)
    set_workers(workers)
    N_max = N_list[-1]
    sups = np.empty((len(N_list), R))
    capped = np.zeros((len(N_list),), dtype=np.int64)
    for r in range(R):
        tr = simulate_trajectory(N_max, b, RngStreamKey(seed, r), cfg)
        running_max = np.fmax.accumulate(np.nan_to_num(tr.stat, nan=0.0))
        cum_capped = np.cumsum(tr.capped)
        for i, N in enumerate(N_list):
            sups[i, r] = running_max[N - 1]
            capped[i] += cum_capped[N - 1]
    return [_sup_estimate(sups[i], b, N, int(capped[i])) for i, N in enumerate(N_list)]


def ensemble_sup_stat(
    b: float,
    N: int,
    R: int,
    seed: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
    workers: int | None = None,
) -> SupStatEstimate:
    """Second moment of sup_{3<=n<=N} of the normalised statistic over R runs."""
    return ensemble_sup_curve(b, [N], R, seed, cfg, workers)[0]


@dataclass
class ZetaMeanEstimate:
    n: int
    R: int
    mean: complex
    stderr_re: float
    stderr_im: float
    capped_count: int


def estimate_zeta_mean(
    n: int,
    R: int,
    seed: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
    workers: int | None = None,
) -> ZetaMeanEstimate:
    """Sample mean of zeta(sigma + i S_n) over R walks; capped heights count as 1."""
    if R < 2:
        raise DomainError("need R >= 2")
    set_workers(workers)
    S = walk_positions(n, seed, range(R), [n])[:, 0]
    z, capped = zeta_critical_many(S, cfg)
    z[capped] = 1.0
    se_re, se_im = cstderr(z)
    return ZetaMeanEstimate(n, R, cmean(z), se_re, se_im, int(capped.sum()))
