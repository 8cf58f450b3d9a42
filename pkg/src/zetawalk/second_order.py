"""Exact and asymptotic second-order moments of the truncated zeta system.

Notation: for a walk S_n and truncation x,

    Z_n1 = sum_{k<=x} k^-(sigma + i S_n)
    Z_n2 = x^(1-sigma) e^{-i S_n log x} / (1 - sigma - i S_n)
    Z_n  = Z_n1 - Z_n2

Every moment below is real at any sigma in [1/2, 1) (the Cauchy characteristic
function is real), so block values are returned as floats and assembled into
complex numbers only in :class:`SecondMomentSet`.

Powers such as ``k^(n - sigma) x^(-m + 1 - sigma)`` are combined in log space
before exponentiation.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from ._kernels import min_max_double_sum
from .errors import (
    Cancelled,
    ConvergenceError,
    CostGuardError,
    DomainError,
    SingularCaseError,
)
from .zeta_eval import zeta_real

X_CEILING = 10**8
DEFAULT_C0 = 5.0
_CHUNK = 1 << 20

_gl_nodes, _gl_weights = np.polynomial.legendre.leggauss(32)
_GL_T = 0.5 * (_gl_nodes + 1.0)
_GL_W = 0.5 * _gl_weights

# B_2 .. B_12 for the Euler-Maclaurin tail of the scaled Hurwitz sums
_BERN = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730)


# -- data types ---------------------------------------------------------------


@dataclass(frozen=True)
class MomentQuery:
    n: int
    m: int
    sigma: float = 0.5
    x: float = 100.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if int(self.m) != self.m or self.m < self.n:
            raise DomainError(f"m must be an integer >= n, got m={self.m}, n={self.n}")
        if not 0.5 <= self.sigma < 1:
            raise DomainError(f"sigma must lie in [1/2, 1), got {self.sigma}")
        if not self.x >= 1:
            raise DomainError(f"x must be >= 1, got {self.x}")

    @property
    def singular(self) -> bool:
        """True for the (m = n+1, sigma = 1/2) case with no closed form for E Z_n2 conj(Z_m2)."""
        return (self.m - self.n) == 2 * (1 - self.sigma)


@dataclass(frozen=True)
class ThetaInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise DomainError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, widen: float = 0.0) -> bool:
        return self.lo - widen <= value <= self.hi + widen

    def distance(self, value: float) -> float:
        """Distance from value to the interval (0 inside)."""
        return max(self.lo - value, value - self.hi, 0.0)

    def shift(self, offset: float) -> ThetaInterval:
        return ThetaInterval(self.lo + offset, self.hi + offset)


@dataclass(frozen=True)
class SecondMomentSet:
    """The four blocks of E Z_n conj(Z_m) and their signed combination."""

    c11: complex
    c12: complex
    c21: complex
    c22: complex
    combined: complex
    quadrature_fallback: bool = False

    def as_dict(self) -> dict[str, complex]:
        return {
            "c11": self.c11,
            "c12": self.c12,
            "c21": self.c21,
            "c22": self.c22,
            "combined": self.combined,
        }


@dataclass(frozen=True)
class ConstantCBreakdown:
    euler_const: float
    integral_0_1: float
    integral_1_inf: float
    c_eq222: float
    c_theorem1: float
    quad_abserr: float = 0.0

    @property
    def kn_offset(self) -> float:
        """Observed limit of ``compute_Kn(n) - log n``: ``euler + 2 I_01 + 2 I_1inf``.

        Equal to ``c_eq222 + 1`` because ``(n-3/2)/(n+1/2) zeta(n+1/2) -> 1`` also
        contributes to K_n.
        """
        return self.euler_const + 2.0 * self.integral_0_1 + 2.0 * self.integral_1_inf


@dataclass(frozen=True)
class AsymptoticTerms:
    """x -> infinity limits at sigma = 1/2.

    Off-diagonal fields (``m > n + 1``): limits of E Z_n2 conj(Z_m2) (a22),
    E Z_n1 conj(Z_m2) (a12), E Z_m1 conj(Z_n2) (a21) and the theta interval of
    E Z_n1 conj(Z_m1) (a11).

    Diagonal fields (``m == n``): affine pairs ``(slope, intercept)`` in x for
    E|Z_n2|^2 (d22), E Z_n1 conj(Z_n2) (d12) and E|Z_n1|^2 (d11).
    """

    n: int
    m: int
    a22: float | None = None
    a12: float | None = None
    a21: float | None = None
    a11: ThetaInterval | None = None
    d22: float | None = None
    d12: tuple[float, float] | None = None
    d11: tuple[float, float] | None = None


# -- helpers -------------------------------------------------------------------


def _check_cancel(cancel: threading.Event | None) -> None:
    if cancel is not None and cancel.is_set():
        raise Cancelled("computation cancelled")


def _log_power_sum(exponent: float, x: float, log_scale: float = 0.0) -> float:
    """``sum_{k<=x} exp(exponent*log k + log_scale)``, accurately summed."""
    top = math.floor(x)
    parts = []
    for start in range(1, top + 1, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, top + 1), dtype=np.float64)
        parts.append(math.fsum(np.exp(exponent * np.log(k) + log_scale)))
    return math.fsum(parts)


def _quad(f, a, b, what: str, **kw) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(f, a, b, full_output=1, **kw)
    val, err = res[0], res[1]
    if len(res) > 3:
        tol = max(kw.get("epsabs", 1.49e-8), kw.get("epsrel", 1.49e-8) * abs(val))
        if not err <= 10 * tol:
            raise ConvergenceError(f"{what}: quadrature stalled ({res[3][:60]}), err={err:.3g}")
    return val, err


# -- first moment --------------------------------------------------------------


def mean_Zn(q: MomentQuery) -> float:
    """E Z_n(x) = sum_{k<=x} k^-(sigma+n) - 2n/(n^2-(1-sigma)^2) + x^(1-sigma-n)/(n+sigma-1)."""
    n, s, x = q.n, q.sigma, q.x
    a = 1.0 - s
    head = _log_power_sum(-(s + n), x)
    return head - 2.0 * n / (n * n - a * a) + math.exp((a - n) * math.log(x)) / (n - a)


# -- E Z_n2 conj(Z_m2) -----------------------------------------------------------


def cross_n2m2(q: MomentQuery) -> float:
    """Closed form of E Z_n2 conj(Z_m2): ``A + B x^(-n+1-sigma) + C x^(-(m-n)+2(1-sigma))``.

    At m = n this is ``x^(2(1-sigma)) / ((1-sigma)(n+1-sigma))``.  The case
    m = n + 1 with sigma = 1/2 has no closed form; see
    :func:`cross_n2m2_quadrature`.
    """
    if q.singular:
        raise SingularCaseError(
            f"no closed form at m = n + 1, sigma = 1/2 (n={q.n}); use cross_n2m2_quadrature"
        )
    n, m, a = q.n, q.m, 1.0 - q.sigma
    lx = math.log(q.x)
    d = m - n
    A = 4.0 * n * d / ((d * d - 4.0 * a * a) * (n * n - a * a))
    B = 2.0 * d / ((2 * n - m + a) * (m + a) * (n - a))
    C = (3 * n - m + 2 * a) / ((2 * n - m + a) * (2 * a - d) * (n + a))
    if d == 0:
        # A and B vanish identically; keep the diagonal value free of rounding noise
        return C * math.exp(2 * a * lx)
    return A + B * math.exp((a - n) * lx) + C * math.exp((2 * a - d) * lx)


def cross_n2m2_quadrature(
    q: MomentQuery, tol: float = 1e-11, cancel: threading.Event | None = None
) -> float:
    """E Z_n2 conj(Z_m2) as ``x^(2(1-sigma))`` times a double integral over [0,1]^2.

    The integrand ``u^-s v^-s exp(-|log(xv)|(m-n) - |log(v/u)| n)`` is
    integrated in log coordinates, split along ``u = v`` and ``v = 1/x``.
    Valid for every m >= n, including m = n + 1.
    """
    n, m, s = q.n, q.m, q.sigma
    a = 1.0 - s
    L = math.log(q.x)
    d = m - n

    def inner(b: float) -> float:
        _check_cancel(cancel)
        # a-integral of exp(a(1-s) - n|b - a|) over (-inf, b] and [b, 0]
        lo, _ = _quad(
            lambda t: math.exp(t * a - n * (b - t)), -np.inf, b,
            "inner(u<v)", epsabs=0.0, epsrel=tol, limit=200,
        )
        hi = 0.0
        if b < 0:
            hi, _ = _quad(
                lambda t: math.exp(t * a - n * (t - b)), b, 0.0,
                "inner(u>v)", epsabs=0.0, epsrel=tol, limit=200,
            )
        return lo + hi

    def outer(b: float) -> float:
        return math.exp(b * a - abs(L + b) * d) * inner(b)

    below, _ = _quad(outer, -np.inf, -L, "outer(v<1/x)", epsabs=0.0, epsrel=tol, limit=200)
    above = 0.0
    if L > 0:
        above, _ = _quad(outer, -L, 0.0, "outer(v>1/x)", epsabs=0.0, epsrel=tol, limit=200)
    return math.exp(2 * a * L) * (below + above)


# -- mixed blocks --------------------------------------------------------------


def cross_n1m2(q: MomentQuery) -> float:
    """E Z_n1 conj(Z_m2) for m >= n, as a sum over k <= x of three power terms."""
    n, m, s, x = q.n, q.m, q.sigma, q.x
    a = 1.0 - s
    den = 2 * n - m + a
    c1 = -2.0 * (m - n) / ((m + a) * den)
    c2 = 2.0 * n / ((m - a) * den)
    t1 = _log_power_sum(-n - s, x)
    t2 = _log_power_sum(-(m - n) + 1 - 2 * s, x)
    t3 = _log_power_sum(n - s, x, log_scale=(-m + a) * math.log(x))
    return c1 * t1 + c2 * t2 - t3 / (m - a)


def cross_m1n2(q: MomentQuery) -> float:
    """E Z_m1 conj(Z_n2) for m >= n (the conjugate of E Z_n2 conj(Z_m1))."""
    n, m, s, x = q.n, q.m, q.sigma, q.x
    a = 1.0 - s
    t1 = _log_power_sum(-(m - n) + 1 - 2 * s, x)
    t2 = _log_power_sum(2 * n - m - s, x, log_scale=(a - n) * math.log(x))
    return 2.0 * n * t1 / (n * n - a * a) - t2 / (n - a)


def cross_n1m1(q: MomentQuery) -> float:
    """E Z_n1 conj(Z_m1) = sum_{k,l<=x} (kl)^-s (min/max)^n l^-(m-n), in O(x).

    Uses scaled suffix sums so that no intermediate power overflows.
    """
    if q.x > X_CEILING:
        raise CostGuardError(f"x = {q.x:g} exceeds the ceiling {X_CEILING:g}")
    return min_max_double_sum(q.n, q.m, q.sigma, math.floor(q.x))


def second_moment(q: MomentQuery, quadrature_fallback: bool = False) -> SecondMomentSet:
    """Assemble E Z_n conj(Z_m) = c11 - c12 - c21 + c22 from its blocks."""
    if q.singular:
        if not quadrature_fallback:
            raise SingularCaseError(
                "m = n + 1 at sigma = 1/2 needs quadrature_fallback=True"
            )
        c22 = cross_n2m2_quadrature(q)
    else:
        c22 = cross_n2m2(q)
    c11 = cross_n1m1(q)
    c12 = cross_n1m2(q)
    c21 = cross_m1n2(q)
    combined = c11 - c12 - c21 + c22
    return SecondMomentSet(
        complex(c11), complex(c12), complex(c21), complex(c22), complex(combined),
        quadrature_fallback=q.singular,
    )


# -- x -> infinity -------------------------------------------------------------


def asym_terms(n: int, m: int) -> AsymptoticTerms:
    """Limits of the block moments as x -> infinity, sigma = 1/2.

    ``m > n + 1`` gives the off-diagonal limits; ``m == n`` (n >= 3) gives the
    diagonal affine pairs.  ``m == n + 1`` and diagonal ``n <= 2`` raise
    :class:`DomainError`.
    """
    if m == n:
        if n <= 2:
            raise DomainError(f"diagonal asymptotics need n > 2, got n={n}")
        slope = 2.0 / (n + 0.5)
        return AsymptoticTerms(
            n, m, d22=slope, d12=(slope, -1.0 / (2 * n - 1)), d11=(slope, compute_Kn(n))
        )
    if m <= n + 1:
        raise DomainError(f"off-diagonal asymptotics need m > n + 1, got n={n}, m={m}")
    d = m - n
    zd = zeta_real(d)
    a22 = 4.0 * n * d / ((d * d - 1.0) * (n * n - 0.25))
    a12 = -2.0 * d * zeta_real(n + 0.5) / ((m + 0.5) * (2 * n - m + 0.5)) + 2.0 * n * zd / (
        (m - 0.5) * (2 * n - m + 0.5)
    )
    a21 = 2.0 * n * zd / (n * n - 0.25)
    base = zeta_real(d + 1)
    a11 = ThetaInterval(base, base + (1.0 / (m - 0.5) + 1.0 / (n - 0.5)) * zd)
    return AsymptoticTerms(n, m, a22=a22, a12=a12, a21=a21, a11=a11)


# -- phi functions and the constant C -----------------------------------------


@lru_cache(maxsize=None)
def _series_coeffs(terms: int = 30) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(3, 3 + terms)
    fact = np.array([math.factorial(int(v)) for v in j], dtype=np.float64)
    return j, (j - 2) / fact


def _num_phi(alpha: float) -> float:
    """(alpha - 2) e^alpha + alpha + 2."""
    if alpha <= 2.0:
        j, c = _series_coeffs()
        terms = c * alpha ** j.astype(np.float64)
        return math.fsum(terms[::-1])
    return (alpha - 2.0) * math.exp(alpha) + alpha + 2.0


def _num_phi1(alpha: float) -> float:
    """alpha - 2 + (alpha + 2) e^-alpha."""
    if alpha <= 2.0:
        j, c = _series_coeffs()
        signs = np.where(j % 2 == 1, 1.0, -1.0)
        terms = signs * c * alpha ** j.astype(np.float64)
        return math.fsum(terms[::-1])
    return alpha - 2.0 + (alpha + 2.0) * math.exp(-alpha)


def phi_funcs(alpha: float) -> tuple[float, float, float]:
    """Return ``(phi, phi1, phi2)`` at alpha > 0.

    phi(a)  = (a e^a - 2e^a + a + 2) / (2 a^2 (e^a - 1))
    phi1(a) = (a - 2 + a e^-a + 2 e^-a) / (2 a^2 (e^a - 1))
    phi2(a) = (2 e^-a + a e^-a - 2) / (2 a^2)

    Numerators are taken from their Taylor series for a <= 2, which covers
    the a -> 0 regime where they vanish to third order.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    a2 = 2.0 * alpha * alpha
    if alpha > 700:
        # e^alpha overflows; phi1 is below 1e-300 here
        return (alpha - 2.0) / a2, 0.0, -2.0 / a2
    em1 = math.expm1(alpha)
    if alpha <= 2.0:
        phi = _num_phi(alpha) / (a2 * em1)
        n1 = _num_phi1(alpha)
        phi1 = n1 / (a2 * em1)
        phi2 = (n1 - alpha) / a2
    else:
        phi = (alpha - 2.0 + (alpha + 2.0) * math.exp(-alpha)) / (a2 * -math.expm1(-alpha))
        phi1 = _num_phi1(alpha) / (a2 * em1)
        phi2 = ((alpha + 2.0) * math.exp(-alpha) - 2.0) / a2
    return phi, phi1, phi2


def phi_identity_residual(alpha: float) -> float:
    """``phi1 + phi2 - (phi - 1/(2 alpha))``, zero up to rounding."""
    phi, phi1, phi2 = phi_funcs(alpha)
    return phi1 + phi2 - (phi - 0.5 / alpha)


def phi_scan(lo: float = 0.01, hi: float = 50.0, points: int = 2001) -> tuple[float, float]:
    """Largest |identity residual| on a log grid over [lo, hi]; returns (alpha, residual)."""
    grid = np.geomspace(lo, hi, points)
    res = np.array([abs(phi_identity_residual(float(a))) for a in grid])
    i = int(np.argmax(res))
    return float(grid[i]), float(res[i])


_PHI_TAIL_CUT = 200.0


@lru_cache(maxsize=1)
def constant_C() -> ConstantCBreakdown:
    """Quadrature of the phi integrals and the two constants built from them.

    ``integral_1_inf`` integrates ``phi - 1/(2 alpha)`` on [1, 200] and adds
    the exact tail ``-1/200``; past 200 the integrand equals ``-1/alpha^2`` up
    to terms below e^-200.
    """
    i01, e01 = _quad(lambda a: phi_funcs(a)[0], 0.0, 1.0, "int_0^1 phi", epsabs=1e-13, epsrel=1e-13)
    i1, e1 = _quad(
        lambda a: phi_funcs(a)[0] - 0.5 / a, 1.0, _PHI_TAIL_CUT, "int_1^200 phi",
        epsabs=1e-13, epsrel=1e-13, limit=400,
    )
    i1 -= 1.0 / _PHI_TAIL_CUT
    ce = float(np.euler_gamma)
    c222 = ce - 1.0 + 2.0 * i01 + 2.0 * i1
    return ConstantCBreakdown(ce, i01, i1, c222, c222 - 1.0, quad_abserr=e01 + e1)


# -- B_k, D_k and K_n ------------------------------------------------------------


def _scaled_b(n: int, k: np.ndarray) -> np.ndarray:
    """n B_k (k+1)^-(n-1/2) for real k >= 1 (vectorised)."""
    k = np.asarray(k, dtype=np.float64)
    p = n - 1.5
    q = k + 1.0
    beta = n / q
    out = np.empty_like(k)
    small = beta <= 2.0
    if np.any(small):
        qs = q[small][:, None]
        # integrand (r^p - 1)(t - 1/2) with r = (k+t)/(k+1); int (t-1/2) dt = 0
        r = np.expm1(p * np.log1p((_GL_T[None, :] - 1.0) / qs))
        out[small] = beta[small] * ((r * (_GL_T - 0.5)) @ _GL_W)
    big = ~small
    if np.any(big):
        kb = k[big]
        rho = np.exp((p + 1.0) * np.log1p(-1.0 / (kb + 1.0)))
        out[big] = n * ((0.5 * p - kb) + rho * (kb + 0.5 * p + 1.0)) / ((p + 1.0) * (p + 2.0))
    return out


def _scaled_d(n: int, k: np.ndarray, head: int = 20) -> np.ndarray:
    """D_k (k+1)^(n+1/2) = sum_{h>=0} (1 + h/(k+1))^-(n+1/2), vectorised.

    ``head`` terms are summed directly; the rest by Euler-Maclaurin through B_12.
    """
    k = np.asarray(k, dtype=np.float64)
    s = n + 0.5
    q = k + 1.0
    total = np.zeros_like(k)
    for h in range(head - 1, -1, -1):
        total += np.exp(-s * np.log1p(h / q))
    L = np.log1p(head / q)
    tail = np.exp(np.log(q) - math.log(s - 1.0) - (s - 1.0) * L)
    tail += 0.5 * np.exp(-s * L)
    log_rising = 0.0
    for j, bern in enumerate(_BERN, start=1):
        r = 2 * j - 1
        # rising factorial s (s+1) ... (s+r-1), updated incrementally
        log_rising += math.log(s + r - 1) + (math.log(s + r - 2) if r > 1 else 0.0)
        coef = bern / math.factorial(2 * j)
        tail += coef * np.exp(log_rising - r * np.log(q) - (s + r) * L)
    return total + tail


def bk_dk_scaled(n: int, k: int) -> tuple[float, float, float]:
    """Scaled ``(n B_k (k+1)^-(n-1/2), D_k (k+1)^(n+1/2), D'_k (k+1)^(n+1/2))``.

    B_k is integrated adaptively; D'_k = D_k - (k+1)^-(n+1/2), so the third
    value is the second minus one.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    p = n - 1.5
    q = k + 1.0

    def f(t: float) -> float:
        return math.expm1(p * math.log1p((t - 1.0) / q)) * (t - 0.5)

    # the integrand is concentrated within ~q/p of t = 1 when beta is large
    pts = [max(0.0, 1.0 - 10.0 * q / p)] if q < p / 10 else None
    val, _ = _quad(f, 0.0, 1.0, "B_k", epsabs=1e-15, epsrel=1e-12, limit=200, points=pts)
    b = (n / q) * val
    d = float(_scaled_d(n, np.array([float(k)]))[0])
    return b, d, d - 1.0


def _kn_summand(n: int, k: np.ndarray) -> np.ndarray:
    # A_k D_k with A_k = (n - 1/2) B_k
    k = np.asarray(k, dtype=np.float64)
    return (n - 0.5) / n * _scaled_b(n, k) * _scaled_d(n, k) / (k + 1.0)


def compute_Kn(n: int, cancel: threading.Event | None = None) -> float:
    """K_n = (n-3/2)/(n+1/2) zeta(n+1/2) + 2 sum_{k>=1} A_k D_k.

    K_n is the x-free constant in E|Z_n1|^2 = 2x/(n+1/2) + K_n + o(1), with
    A_k = (n - 1/2) B_k the Euler-Maclaurin remainder weights of
    ``sum_{k<=l} k^(n-1/2)``.  The series is summed directly up to
    ``k = max(4n, 2000)``; the smooth remainder is an integral plus
    Euler-Maclaurin end corrections.
    """
    if int(n) != n or n < 3:
        raise DomainError(f"K_n needs an integer n >= 3, got {n}")
    n = int(n)
    cut = max(4 * n, 2000)
    parts = []
    for start in range(1, cut, _CHUNK):
        _check_cancel(cancel)
        k = np.arange(start, min(start + _CHUNK, cut), dtype=np.float64)
        parts.append(math.fsum(_kn_summand(n, k)))
    head = math.fsum(parts)

    def g(y: float) -> float:
        kk = cut / y
        return float(_kn_summand(n, np.array([kk]))[0]) * cut / (y * y)

    integral, _ = _quad(g, 0.0, 1.0, "K_n tail", epsabs=1e-15, epsrel=1e-13, limit=200)
    h = 0.5
    f_cut, f_lo, f_hi = _kn_summand(n, np.array([cut, cut - h, cut + h], dtype=np.float64))
    deriv = (f_hi - f_lo) / (2 * h)
    tail = integral + 0.5 * f_cut - deriv / 12.0
    series = head + tail
    return (n - 1.5) / (n + 0.5) * zeta_real(n + 0.5) + 2.0 * series


# -- moments of zeta along the walk --------------------------------------------


def mean_zeta(n: int) -> float:
    """E zeta(1/2 + i S_n) = zeta(n + 1/2) - 8n/(4n^2 - 1)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return zeta_real(n + 0.5) - 8.0 * n / (4.0 * n * n - 1.0)


def variance_zeta(n: int) -> float:
    """E|zeta_n - E zeta_n|^2 = K_n + 1/(n-1/2) - (E zeta_n)^2."""
    if n <= 2:
        raise DomainError(f"variance needs n >= 3, got {n}")
    return compute_Kn(n) + 1.0 / (n - 0.5) - mean_zeta(n) ** 2


def cov_bound(n: int, m: int, c0: float = DEFAULT_C0) -> float:
    """``c0 * max(1/n, 2^-(m-n))`` for m > n + 1."""
    if m <= n + 1:
        raise DomainError(f"cov_bound needs m > n + 1, got n={n}, m={m}")
    if not c0 > 0:
        raise DomainError("c0 must be positive")
    return c0 * max(1.0 / n, 2.0 ** -(m - n))


def predicted_cov_interval(n: int, m: int) -> ThetaInterval:
    """Interval for E Z_n conj(Z_m) - E zeta_n E zeta_m, m > n + 1.

    Endpoints correspond to theta = 0 and theta = 1 in the E Z_n1 conj(Z_m1)
    limit.
    """
    if m <= n + 1:
        raise DomainError(f"covariance prediction needs m > n + 1, got n={n}, m={m}")
    t = asym_terms(n, m)
    rest = -t.a12 - t.a21 + t.a22 - mean_zeta(n) * mean_zeta(m)
    return t.a11.shift(rest)


def implied_c0(n: int, m: int) -> float:
    """Smallest c0 for which both interval endpoints satisfy :func:`cov_bound`."""
    iv = predicted_cov_interval(n, m)
    return max(abs(iv.lo), abs(iv.hi)) / max(1.0 / n, 2.0 ** -(m - n))
