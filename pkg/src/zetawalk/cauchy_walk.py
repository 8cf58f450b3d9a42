"""Reproducible standard-Cauchy random walks.

Each replicate draws from its own Philox stream keyed by ``(seed,
replicate_index)``.  The key fully determines the stream, so a walk can be
regenerated anywhere, in any order, by any worker.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStreamKey:
    seed: int
    replicate_index: int = 0

    def __post_init__(self):
        for name in ("seed", "replicate_index"):
            v = getattr(self, name)
            if not (0 <= int(v) <= _U64):
                raise DomainError(f"{name} must fit in 64 unsigned bits, got {v}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.replicate_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class WalkPath:
    seed: int
    replicate_index: int
    values: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return int(self.values.size)

    def __getitem__(self, n: int) -> float:
        """S_n, 1-based."""
        if not 1 <= n <= self.values.size:
            raise IndexError(f"walk has no S_{n}")
        return float(self.values[n - 1])

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.values, prepend=0.0)


def cauchy_quantile(u):
    """Inverse CDF of the standard Cauchy law, ``tan(pi (u - 1/2))``."""
    arr = np.asarray(u, dtype=np.float64)
    if np.any(~((arr > 0) & (arr < 1))):
        raise DomainError("cauchy_quantile needs 0 < u < 1")
    out = np.tan(np.pi * (arr - 0.5))
    return float(out) if out.ndim == 0 else out


def open_uniforms(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms on (0, 1): exact zeros from the generator are redrawn in order."""
    u = rng.random(size)
    bad = np.flatnonzero(u == 0.0)
    while bad.size:
        u[bad] = rng.random(bad.size)
        bad = bad[u[bad] == 0.0]
    return u


def cauchy_increments(key: RngStreamKey, size: int) -> np.ndarray:
    return cauchy_quantile(open_uniforms(key.generator(), size))


def generate_walk(N: int, key: RngStreamKey) -> WalkPath:
    """Partial sums S_1..S_N of N i.i.d. standard Cauchy steps from ``key``'s stream.

    The first N steps do not depend on N, so walks of different lengths from
    one key share their common prefix.
    """
    if N < 1:
        raise DomainError(f"walk length must be >= 1, got {N}")
    steps = np.atleast_1d(cauchy_increments(key, int(N)))
    values = np.cumsum(steps)
    if not np.all(np.isfinite(values)):
        raise ArithmeticError("non-finite walk value")
    return WalkPath(key.seed, key.replicate_index, values)


def walk_positions(N: int, seed: int, replicates: range | np.ndarray, at: list[int]) -> np.ndarray:
    """Matrix of S_n for n in ``at`` (columns) over the given replicate indices (rows)."""
    at = list(at)
    out = np.empty((len(replicates), len(at)))
    for row, r in enumerate(replicates):
        s = generate_walk(N, RngStreamKey(seed, int(r))).values
        out[row] = s[np.asarray(at) - 1]
    return out


def walk_density(n: int, u):
    """Density of S_n: ``n / (pi (n^2 + u^2))``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    u = np.asarray(u, dtype=np.float64)
    out = n / (math.pi * (n * n + u * u))
    return float(out) if out.ndim == 0 else out


def write_walk_csv(walk: WalkPath, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "S_n"])
        for i, v in enumerate(walk.values, start=1):
            w.writerow([i, repr(float(v))])
    return path


def read_walk_csv(path: str | Path, seed: int = 0, replicate_index: int = 0) -> WalkPath:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    values = np.array([float(r["S_n"]) for r in rows])
    return WalkPath(seed, replicate_index, values)
