"""Riemann zeta evaluators.

Three routes are provided:

* :func:`truncated_zeta` -- the short Dirichlet sum with its power
  correction, ``sum_{k<=x} k^-s - x^(1-s)/(1-s)``.  Cheap, error O(x^-sigma)
  while ``|t| <= 2 pi x / C``.
* :func:`zeta_em_oracle` -- a classical Euler-Maclaurin evaluator, used as
  an independent reference.
* :func:`zeta_real` -- zeta at real arguments ``r > 1``.

Complex values are plain Python ``complex``; every public function checks
that nothing non-finite escapes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import dirichlet_sums
from .errors import CapExceededError, DomainError, PoleError, RangeError

# B_2, B_4, ..., B_14
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)

ORACLE_BERNOULLI_ORDER = 8
ORACLE_T_MAX = 1e6


@dataclass(frozen=True)
class ZetaEvalConfig:
    sigma: float = 0.5
    safety_constant: float = 2.0
    x_min: int = 64
    t_cap: float = 1e9

    def __post_init__(self):
        if not self.safety_constant > 1:
            raise DomainError("safety_constant must be > 1")
        if int(self.x_min) != self.x_min or self.x_min < 1:
            raise DomainError("x_min must be a positive integer")
        if not self.t_cap > 0:
            raise DomainError("t_cap must be positive")
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")


def _finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ArithmeticError(f"non-finite value {z!r}")
    return z


def _check_s(sigma: float, t: float) -> None:
    if not sigma > 0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    if sigma == 1 and t == 0:
        raise PoleError("zeta has a pole at s = 1")


def _power_correction(sigma: float, t: np.ndarray, x) -> np.ndarray:
    # x^(1-s)/(1-s) with the division written out in real arithmetic so that
    # t -> -t conjugates the result bit for bit.
    a = 1.0 - sigma
    lx = np.log(np.asarray(x, dtype=np.float64))
    c = np.exp(a * lx)
    ph = t * lx
    p = c * np.cos(ph)
    q = c * np.sin(ph)
    d = a * a + t * t
    return (p * a + q * t) / d + 1j * ((p * t - q * a) / d)


def truncated_parts(sigma: float, ts, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Sum part and correction part of the truncated formula, separately.

    Returns ``(sum_{k<=x} k^-s, x^(1-s)/(1-s))`` over an array of heights.
    """
    ts = np.asarray(ts, dtype=np.float64)
    if not sigma > 0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    if sigma == 1 and np.any(ts == 0):
        raise PoleError("zeta has a pole at s = 1")
    if not x >= 1:
        raise DomainError(f"x must be >= 1, got {x}")
    counts = np.full(ts.size, math.floor(x), dtype=np.int64)
    sums = dirichlet_sums(sigma, ts.ravel(), counts).reshape(ts.shape)
    return sums, _power_correction(sigma, ts, x)


def truncated_zeta_many(sigma: float, ts, x: float) -> np.ndarray:
    """Vectorised :func:`truncated_zeta` over an array of heights at fixed x."""
    sums, corr = truncated_parts(sigma, ts, x)
    return sums - corr


def truncated_zeta(sigma: float, t: float, x: float) -> complex:
    """Approximate zeta(sigma + i t) by ``sum_{k<=x} k^-s - x^(1-s)/(1-s)``.

    The sum runs over ``k = 1..floor(x)`` in ascending order with compensated
    accumulation; the correction uses ``x`` itself, so non-integer ``x`` is
    accepted.  ``truncated_zeta(s, -t, x)`` is exactly the conjugate of
    ``truncated_zeta(s, t, x)``.
    """
    _check_s(sigma, t)
    if not x >= 1:
        raise DomainError(f"x must be >= 1, got {x}")
    return _finite(complex(truncated_zeta_many(sigma, np.array([float(t)]), x)[0]))


def critical_length(t: float, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> int:
    """Truncation point ``max(x_min, ceil(C |t| / 2 pi))`` used at height t."""
    return max(int(cfg.x_min), math.ceil(cfg.safety_constant * abs(t) / (2 * math.pi)))


def zeta_critical(t: float, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> complex:
    """zeta(cfg.sigma + i t) from the truncated formula with a t-adapted length.

    Raises :class:`CapExceededError` when ``|t| > cfg.t_cap``.
    """
    if not math.isfinite(t) or abs(t) > cfg.t_cap:
        raise CapExceededError(t, cfg.t_cap)
    return truncated_zeta(cfg.sigma, t, critical_length(t, cfg))


def zeta_critical_many(ts, cfg: ZetaEvalConfig = ZetaEvalConfig()):
    """Batch :func:`zeta_critical`.

    Returns ``(values, capped)``.  Heights above the cap are not evaluated;
    their slot holds ``nan`` and ``capped`` is True there.  Callers decide how
    to impute.
    """
    ts = np.asarray(ts, dtype=np.float64)
    capped = ~(np.abs(ts) <= cfg.t_cap)
    good = np.flatnonzero(~capped)
    values = np.full(ts.shape, np.nan + 0j, dtype=np.complex128)
    if good.size:
        tg = ts[good]
        counts = np.maximum(
            cfg.x_min, np.ceil(cfg.safety_constant * np.abs(tg) / (2 * math.pi))
        ).astype(np.int64)
        if cfg.sigma == 1 and np.any(tg == 0):
            raise PoleError("zeta has a pole at s = 1")
        sums = dirichlet_sums(cfg.sigma, tg, counts)
        values[good] = sums - _power_correction(cfg.sigma, tg, counts.astype(np.float64))
    return values, capped


def _rising(s: complex, r: int) -> complex:
    out = 1.0 + 0j
    for i in range(r):
        out *= s + i
    return out


def _em_tail(s: complex, N: int, order: int) -> complex:
    """``sum_{k>=N} k^-s`` by Euler-Maclaurin with Bernoulli terms up to B_order."""
    log_n = math.log(N)
    n_pow = cmath.exp(-s * log_n)  # N^-s
    tail = N * n_pow / (s - 1) + n_pow / 2
    for j in range(1, order // 2 + 1):
        coef = _BERNOULLI[j - 1] / math.factorial(2 * j)
        tail += coef * _rising(s, 2 * j - 1) * n_pow * N ** (1 - 2 * j)
    return tail


def zeta_em_oracle(sigma: float, t: float) -> complex:
    """Reference zeta(sigma + i t) by Euler-Maclaurin summation.

    Main sum over ``k < N`` with ``N = max(2 ceil|t|, 64)``, integral tail,
    and Bernoulli corrections through B_8.  Relative accuracy is about 1e-10
    or better for ``|t| <= 1e4``.
    """
    _check_s(sigma, t)
    if abs(t) > ORACLE_T_MAX:
        raise RangeError(f"|t| = {abs(t):.6g} exceeds oracle range {ORACLE_T_MAX:g}")
    N = max(2 * math.ceil(abs(t)), 64)
    k = np.arange(1, N, dtype=np.float64)
    lk = np.log(k)
    mag = np.exp(-sigma * lk)
    ph = t * lk
    head = complex(math.fsum(mag * np.cos(ph)), -math.fsum(mag * np.sin(ph)))
    s = complex(sigma, t)
    return _finite(head + _em_tail(s, N, ORACLE_BERNOULLI_ORDER))


def zeta_real(r: float) -> float:
    """zeta(r) for real r > 1, relative error around 1e-15."""
    if not r > 1:
        raise DomainError(f"zeta_real needs r > 1, got {r}")
    N = 32
    k = np.arange(1, N, dtype=np.float64)
    head = math.fsum(np.exp(-r * np.log(k)))
    tail = _em_tail(complex(r, 0.0), N, 12).real
    value = head + tail
    if not math.isfinite(value):
        raise ArithmeticError(f"non-finite zeta({r})")
    return value
