"""Generalized Li sums k(n, a) from zeros and from Taylor coefficients of log xi.

Two independent routes to the same numbers:

* zero sums -- k(n, a) = sum over conjugate pairs of 2 (1 - cos(n theta_a(T))),
  truncated at a height ``t_cutoff`` and completed by an analytic tail bound;
* derivatives -- lambda(n, a) = (1/(n-1)!) d^n/dz^n [(z - a)^(n-1) log xi(z)] at
  z = 1 - a, assembled from Taylor coefficients c_k of log xi around 1 - a
  (Cauchy-circle quadrature, or zero sums as a cross-check), and
  k(n, a) = (1 - 2a) lambda(n, a).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import DomainError, RadiusTooLargeError, ZeroOfXiError
from .precision import (
    FIRST_ZERO_ORDINATE,
    GUARD_BITS,
    PrecisionContext,
    _xi_node_evaluator,
    as_complex,
    log_taylor_coeffs,
    log_xi_with_error,
    mp_context,
)
from .zeros import ZeroCatalog

DEFAULT_CTX = PrecisionContext(256)
TAIL_SAFETY = 4.0
CHUNK_SIZE = 4096


class Method(str, Enum):
    ZERO_SUM = "zero_sum"
    TAYLOR_DERIVATIVE = "taylor_derivative"


@dataclass(frozen=True)
class LiParams:
    a: float
    n: int
    sigma: float = 0.5
    t_cutoff: float | None = None
    ctx: PrecisionContext = DEFAULT_CTX

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")


@dataclass(frozen=True)
class ZeroTerm:
    rho: object
    s: object
    theta: object
    pair_contribution: object


@dataclass(frozen=True)
class LiValue:
    n: int
    a: float
    value: object
    method: Method
    tail_bound: float = 0.0
    error_bound: float = 0.0

    def __post_init__(self):
        for name in ("tail_bound", "error_bound"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and nonnegative, got {v}")


@dataclass(frozen=True)
class TaylorSeries:
    """c_0..c_K of log xi(center + w) = sum c_k w^k."""

    center: object
    coeffs: tuple
    method: str
    error_bounds: tuple
    a: float = 0.0
    tail_bounds: tuple = field(default=(), repr=False)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


# ----------------------------------------------------------------- Möbius geometry

def mobius_base(rho, a, sigma=0.5, ctx: PrecisionContext | None = None):
    """s = (rho - a) / (rho + a - 2 sigma); maps Re rho = sigma onto |s| = 1."""
    ctx = ctx or DEFAULT_CTX
    m = ctx.mp
    rho = as_complex(rho, m)
    a = m.mpf(a)
    sigma = m.mpf(sigma)
    den = rho + a - 2 * sigma
    if den == 0:
        raise DomainError(f"mobius_base has a pole at rho = 2*sigma - a = {m.nstr(2 * sigma - a, 10)}")
    return (rho - a) / den


def theta_at(T, a, ctx: PrecisionContext | None = None):
    """Argument of mobius_base(1/2 + iT, a, 1/2): atan2(T(2a-1), T^2 - a^2 + a - 1/4)."""
    ctx = ctx or DEFAULT_CTX
    m = ctx.mp
    T = m.mpf(T)
    a = m.mpf(a)
    if T <= 0:
        raise DomainError("theta_at needs T > 0")
    return m.atan2(T * (2 * a - 1), T * T - a * a + a - m.mpf(1) / 4)


def zero_term(rho, a, n: int, sigma=0.5, ctx: PrecisionContext | None = None) -> ZeroTerm:
    """Möbius image of one zero and the real contribution of its conjugate pair."""
    ctx = ctx or DEFAULT_CTX
    m = ctx.mp
    s = mobius_base(rho, a, sigma, ctx)
    theta = m.arg(s)
    pair = 2 * (1 - s**n).real
    return ZeroTerm(as_complex(rho, m), s, theta, pair)


# ----------------------------------------------------------------- zero sums

def tail_estimate(a, n: int, t_cutoff: float) -> float:
    """Upper bound for the pairs above ``t_cutoff`` dropped from k(n, a).

    Each pair gives 2(1 - cos n theta) <= (n theta)^2 with theta ~ (1 - 2a)/T;
    integrated against the zero density ln(T/2pi)/2pi this is
    n^2 (1-2a)^2 (ln(T_c/2pi) + 1) / (2 pi T_c), padded by ``TAIL_SAFETY``.
    """
    t_cutoff = float(t_cutoff)
    if not t_cutoff >= 100:
        raise DomainError(f"tail_estimate needs t_cutoff >= 100, got {t_cutoff}")
    if n < 0:
        raise DomainError("n must be >= 0")
    b = 1.0 - 2.0 * float(a)
    integral = (math.log(t_cutoff / (2 * math.pi)) + 1.0) / (2 * math.pi * t_cutoff)
    return TAIL_SAFETY * n * n * b * b * integral


def _zero_sum_chunk(args):
    """Fixed-point partial sums of 1 - cos(n theta) for n = 1..n_max over one chunk.

    Integer accumulators make the chunk results exact to combine, so the
    total does not depend on chunking or on how many workers ran.
    """
    ordinates, mults, a_text, n_max, bits = args
    frac = bits + GUARD_BITS
    m = mp_context(frac + 32)
    b = m.mpf(1) / 2 - m.mpf(a_text)
    b2 = b * b
    one = 1 << frac
    acc = [0] * (n_max + 1)
    inv_sq = m.mpf(0)
    for text, mult in zip(ordinates, mults):
        T = m.mpf(text)
        den = T * T + b2
        inv_sq += mult / den
        # 1 - cos(theta) = 2 b^2 / (T^2 + b^2) exactly; no cancellation for small theta
        d1 = int(m.nint(m.ldexp(2 * b2 / den, frac)))
        two_c = 2 * (one - d1)
        d_prev, d = 0, d1
        if mult == 1:
            acc[1] += d
            for k in range(2, n_max + 1):
                d, d_prev = 2 * d1 + ((two_c * d) >> frac) - d_prev, d
                acc[k] += d
        else:
            acc[1] += mult * d
            for k in range(2, n_max + 1):
                d, d_prev = 2 * d1 + ((two_c * d) >> frac) - d_prev, d
                acc[k] += mult * d
    return acc, str(inv_sq)


def _check_sigma(sigma) -> None:
    if float(sigma) != 0.5:
        raise DomainError("zero sums over a catalog are defined for sigma = 1/2 (tabulated zeros lie on that line)")


def k_sums_from_zeros(
    cat: ZeroCatalog,
    a,
    n_max: int,
    ctx: PrecisionContext | None = None,
    t_cutoff: float | None = None,
    *,
    sigma=0.5,
    chunk_size: int = CHUNK_SIZE,
    workers: int = 1,
) -> list[LiValue]:
    """k(n, a) for n = 1..n_max from conjugate-paired zeros in one pass.

    Zeros are consumed in ascending T in fixed chunks and reduced in order.
    """
    ctx = ctx or DEFAULT_CTX
    _check_sigma(sigma)
    if len(cat) == 0:
        raise DomainError("empty zero catalog")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    count = cat.upto(t_cutoff)
    if count == 0:
        raise DomainError("no zeros below t_cutoff")
    cutoff = float(t_cutoff) if t_cutoff is not None else cat.t_max
    m = ctx.mp
    a_text = str(a) if not hasattr(a, "_mpf_") else m.nstr(a, ctx.precision_bits // 3 + 5)
    if m.mpf(a_text) == m.mpf(1) / 2:
        zero = m.mpf(0)
        return [LiValue(n, a, zero, Method.ZERO_SUM, 0.0, 0.0) for n in range(1, n_max + 1)]
    jobs = [
        (cat.ordinates[i : min(i + chunk_size, count)], cat.multiplicities[i : min(i + chunk_size, count)], a_text, n_max, ctx.precision_bits)
        for i in range(0, count, chunk_size)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_zero_sum_chunk, jobs))
    else:
        parts = [_zero_sum_chunk(j) for j in jobs]
    total = [0] * (n_max + 1)
    inv_sq = 0.0
    for acc, s in parts:
        for k in range(1, n_max + 1):
            total[k] += acc[k]
        inv_sq += float(s)
    frac = ctx.precision_bits + GUARD_BITS
    b = abs(1.0 - 2.0 * float(m.mpf(a_text)))
    delta = cat.ordinate_uncertainty
    n_zeros = sum(cat.multiplicities[:count])
    out = []
    for n in range(1, n_max + 1):
        value = 2 * m.ldexp(m.mpf(total[n]), -frac)
        tail = tail_estimate(a_text, n, cutoff)
        # |d/dT 2(1 - cos n theta)| <= 2n |theta'| = 2n |1-2a| / (T^2 + b^2); fixed-point rounding ~ n^2 ulps per zero
        err = 2 * n * b * delta * inv_sq + 4.0 * n * n * n_zeros * 2.0 ** (-frac)
        out.append(LiValue(n, a, value, Method.ZERO_SUM, tail, err))
    return out


def k_sum_from_zeros(cat: ZeroCatalog, p: LiParams) -> LiValue:
    """k(n, a) = sum over zeros of 1 - ((rho - a)/(rho + a - 1))^n, conjugate-paired."""
    return k_sums_from_zeros(cat, p.a, p.n, p.ctx, p.t_cutoff, sigma=p.sigma)[-1]


# ----------------------------------------------------------------- Taylor coefficients

def _coeff_tail(a, k: int, t_cutoff: float) -> float:
    """Bound on the pairs above t_cutoff omitted from c_k = -(1/k) sum (rho - (1-a))^-k."""
    lg = math.log(t_cutoff / (2 * math.pi))
    if k == 1:
        # paired terms are 2|a - 1/2| / (T^2 + (a-1/2)^2)
        return TAIL_SAFETY * abs(2 * float(a) - 1) * (lg + 1) / (2 * math.pi * t_cutoff)
    integral = t_cutoff ** (1 - k) * (lg / (k - 1) + 1.0 / (k - 1) ** 2) / (2 * math.pi)
    return TAIL_SAFETY * 2.0 / k * integral


def taylor_coeffs_from_zeros(
    cat: ZeroCatalog,
    a,
    K: int,
    ctx: PrecisionContext | None = None,
    t_cutoff: float | None = None,
) -> TaylorSeries:
    """c_k = -(1/k) sum_rho (rho - (1-a))^-k, pairing rho with its conjugate; c_0 = log xi(1-a)."""
    ctx = ctx or DEFAULT_CTX
    if K < 1:
        raise DomainError("K must be >= 1")
    if len(cat) == 0:
        raise DomainError("empty zero catalog")
    count = cat.upto(t_cutoff)
    cutoff = float(t_cutoff) if t_cutoff is not None else cat.t_max
    wp = ctx.precision_bits + GUARD_BITS
    m = mp_context(wp)
    shift = m.mpf(a) - m.mpf(1) / 2
    n_zeros = sum(cat.multiplicities[:count])
    # fixed-point powers of 1/u, u = rho - (1 - a); |1/u| < 1/14 so truncation
    # errors stay below 3 ulps per power and the sums combine exactly
    frac = wp + 8
    acc = [0] * (K + 1)
    for T, mult in zip(cat.values(wp)[:count], cat.multiplicities[:count]):
        u = m.mpc(shift, T)
        if u == 0:
            raise ZeroOfXiError("1 - a coincides with a tabulated zero")
        inv = 1 / u
        ar = int(m.nint(m.ldexp(inv.real, frac)))
        ai = int(m.nint(m.ldexp(inv.imag, frac)))
        pr, pi = ar, ai
        for k in range(1, K + 1):
            acc[k] += mult * pr
            if pr == 0 and pi == 0:
                break
            pr, pi = (pr * ar - pi * ai) >> frac, (pr * ai + pi * ar) >> frac
    sums = [m.ldexp(m.mpf(v), -frac) for v in acc]
    # ordinate errors: |d/dT (2/k) Re u^-k| <= 2 |u|^-(k+1) <= 2 T^-(k+1)
    sens = [0.0] * (K + 2)
    for T, mult in zip(cat.values(53)[:count], cat.multiplicities[:count]):
        inv_t = 1.0 / float(T)
        p_t = inv_t * inv_t
        for k in range(1, K + 1):
            sens[k] += mult * p_t
            p_t *= inv_t
            if p_t < 1e-300:
                break
    delta = cat.ordinate_uncertainty
    c0 = log_xi_with_error(m.mpf(1) - m.mpf(a), ctx)
    out_m = ctx.mp
    coeffs = [out_m.mpc(c0.value)]
    errs = [float(c0.error)]
    tails = [0.0]
    ulp = 2.0 ** -frac
    for k in range(1, K + 1):
        # pair (rho, conj rho): p + conj(p) = 2 Re p
        ck = -2 * sums[k] / k
        coeffs.append(out_m.mpc(ck))
        tail = _coeff_tail(a, k, cutoff)
        tails.append(tail)
        rounding = 2.0 / k * 4 * ulp * n_zeros
        errs.append(tail + rounding + 2 * delta * sens[k])
    return TaylorSeries(out_m.mpc(1 - out_m.mpf(a)), tuple(coeffs), "from_zeros", tuple(errs), a, tuple(tails))


def taylor_coeffs_cauchy(a, K: int, radius=8, ctx: PrecisionContext | None = None) -> TaylorSeries:
    """c_0..c_K of log xi around 1 - a by trapezoidal quadrature on |z - (1-a)| = radius.

    Every zero of xi has |Im rho| >= 14.13, so any radius below that keeps
    the disk zero-free for a real center.
    """
    ctx = ctx or DEFAULT_CTX
    if K < 1:
        raise DomainError("K must be >= 1")
    if not 0 < float(radius) < FIRST_ZERO_ORDINATE:
        raise RadiusTooLargeError(
            f"radius {radius} must be in (0, {FIRST_ZERO_ORDINATE}) to keep the disk free of zeros"
        )
    m = ctx.mp
    center = m.mpf(1) - m.mpf(a)
    lt = log_taylor_coeffs(_xi_node_evaluator(ctx), center, radius, K, ctx, conjugate_symmetric=True)
    coeffs = tuple(m.mpc(c) for c in lt.coeffs)
    errs = tuple(float(e) for e in lt.error_bounds)
    return TaylorSeries(m.mpc(center), coeffs, "cauchy_circle", errs, a)


# ----------------------------------------------------------------- derivative route

def lambda_from_coeffs(ts: TaylorSeries, a, n: int, ctx: PrecisionContext | None = None) -> LiValue:
    """lambda(n, a) = n * sum_j C(n-1, j) (1-2a)^(n-1-j) c_(n-j).

    This is n times the w^n coefficient of (w + 1 - 2a)^(n-1) * sum c_k w^k,
    i.e. (1/(n-1)!) d^n/dz^n [(z - a)^(n-1) log xi(z)] at z = 1 - a.
    """
    ctx = ctx or DEFAULT_CTX
    if n < 1:
        raise DomainError("n must be >= 1")
    if ts.order < n:
        raise DomainError(f"Taylor series has {ts.order} coefficients, lambda({n}) needs {n}")
    m = mp_context(ctx.precision_bits + GUARD_BITS)
    if abs(m.mpc(ts.center) - (1 - m.mpf(a))) > m.ldexp(1, -ctx.precision_bits // 2):
        raise DomainError("Taylor series is not centred at 1 - a")
    h = 1 - 2 * m.mpf(a)
    habs = abs(float(h))
    total = m.mpf(0)
    err = 0.0
    binom = 1
    hp = m.mpf(1)
    # j runs from n-1 down to 0 so the power of h grows with the loop
    for j in range(n - 1, -1, -1):
        c = m.mpc(ts.coeffs[n - j])
        total += binom * hp * c.real
        err += binom * habs ** (n - 1 - j) * (ts.error_bounds[n - j] + abs(float(c.imag)))
        binom = binom * j // (n - j) if j > 0 else binom
        hp *= h
    value = ctx.mp.mpf(n * total)
    err = n * err + float(abs(value)) * 2.0 ** (4 - ctx.precision_bits)
    return LiValue(n, a, value, Method.TAYLOR_DERIVATIVE, 0.0, err)


def k_from_lambda(lv: LiValue, a) -> LiValue:
    """k(n, a) = (1 - 2a) lambda(n, a)."""
    if lv.method is not Method.TAYLOR_DERIVATIVE:
        raise DomainError("k_from_lambda expects a taylor_derivative LiValue")
    if float(lv.a) != float(a):
        raise DomainError(f"lambda was computed for a = {lv.a}, not {a}")
    h = 1 - 2 * lv.value.context.mpf(a)
    return LiValue(lv.n, a, h * lv.value, Method.TAYLOR_DERIVATIVE, 0.0, abs(float(h)) * lv.error_bound)


# ----------------------------------------------------------------- verification runs

@dataclass(frozen=True)
class IdentityRow:
    n: int
    a: float
    k_zero_sum: object
    tail_bound: float
    k_taylor: object
    residual: float
    budget: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.budget


@dataclass(frozen=True)
class IdentityReport:
    a: float
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def flagged(self) -> list:
        return [r for r in self.rows if not r.passed]


def _check_not_half(a) -> None:
    if float(a) == 0.5:
        raise DomainError("a = 1/2 is degenerate: every Möbius base equals 1 and k(n, 1/2) = 0")


def verify_identity(
    cat: ZeroCatalog,
    a,
    n_max: int,
    ctx: PrecisionContext | None = None,
    t_cutoff: float | None = None,
    taylor: TaylorSeries | None = None,
) -> IdentityReport:
    """Compare zero-sum k(n, a) against (1 - 2a) lambda(n, a) for n = 1..n_max."""
    ctx = ctx or DEFAULT_CTX
    _check_not_half(a)
    zs = k_sums_from_zeros(cat, a, n_max, ctx, t_cutoff)
    if taylor is None:
        taylor = taylor_coeffs_cauchy(a, n_max, ctx=ctx)
    rows = []
    for zv in zs:
        kt = k_from_lambda(lambda_from_coeffs(taylor, a, zv.n, ctx), a)
        residual = float(abs(zv.value - kt.value))
        budget = zv.tail_bound + zv.error_bound + kt.error_bound
        rows.append(IdentityRow(zv.n, a, zv.value, zv.tail_bound, kt.value, residual, budget))
    return IdentityReport(a, tuple(rows))


@dataclass(frozen=True)
class SignScanEntry:
    a: float
    n_max: int
    k_values: tuple  # LiValue (zero_sum), n = 1..n_max
    lambda_values: tuple  # LiValue (taylor_derivative)
    min_k_margin: float  # min_n k(n,a) + tail_bound
    min_signed_lambda_margin: float  # min_n sign(1-2a) lambda(n,a) + error_bound

    @property
    def consistent(self) -> bool:
        return self.min_k_margin >= 0 and self.min_signed_lambda_margin >= 0

    @property
    def verdict(self) -> str:
        return "CONSISTENT" if self.consistent else "VIOLATION"


def sign_scan(
    cat: ZeroCatalog,
    a_grid: Sequence,
    n_max: int,
    ctx: PrecisionContext | None = None,
    t_cutoff: float | None = None,
    taylor: dict | None = None,
) -> list[SignScanEntry]:
    """Check k(n, a) >= 0 and sign(1 - 2a) lambda(n, a) >= 0 up to the stated slacks.

    ``taylor`` may map values of a to precomputed series of order >= n_max.
    """
    ctx = ctx or DEFAULT_CTX
    out = []
    for a in a_grid:
        _check_not_half(a)
        ks = k_sums_from_zeros(cat, a, n_max, ctx, t_cutoff)
        ts = (taylor or {}).get(a) or taylor_coeffs_cauchy(a, n_max, ctx=ctx)
        lams = [lambda_from_coeffs(ts, a, n, ctx) for n in range(1, n_max + 1)]
        sign = 1 if float(a) < 0.5 else -1
        k_margin = min(float(k.value) + k.tail_bound + k.error_bound for k in ks)
        l_margin = min(sign * float(lv.value) + lv.error_bound for lv in lams)
        out.append(SignScanEntry(a, n_max, tuple(ks), tuple(lams), k_margin, l_margin))
    return out
