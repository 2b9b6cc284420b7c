"""Arbitrary-precision zeta, gamma and xi with self-reported error bounds.

All arithmetic runs on private :class:`mpmath.ctx_mp.MPContext` instances (one
per bit width, created lazily and never mutated afterwards), so nothing here
touches mpmath's global ``mp`` state and every function is safe to call from
several threads at once.

Every public evaluator comes in two flavours: ``f(z, ctx)`` returns the value
rounded to ``ctx.precision_bits`` and raises :class:`PrecisionError` when the
bound misses ``ctx.target_abs_error``; ``f_with_error(z, ctx)`` returns an
:class:`Approx` carrying the bound instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

from mpmath.ctx_mp import MPContext

from .errors import (
    DomainError,
    PoleError,
    PrecisionError,
    QuadratureError,
    RadiusTooLargeError,
    ZeroOfXiError,
)

GUARD_BITS = 16
MAX_PRECISION_BITS = 1000
# |Im rho| of the lowest nontrivial zero; no zero of xi is closer to the real axis.
FIRST_ZERO_ORDINATE = 14.134725141734693
# Euler-Maclaurin becomes pointless beyond this many direct terms (use Riemann-Siegel).
_EM_MAX_TERMS = 20000
_CAUCHY_MAX_NODES = 1 << 14


@lru_cache(maxsize=None)
def mp_context(bits: int) -> MPContext:
    """Shared, never-mutated mpmath context with ``bits`` of mantissa."""
    m = MPContext()
    m.prec = bits
    return m


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus the absolute-error goal for function values."""

    precision_bits: int = 128
    target_abs_error: float | None = None

    def __post_init__(self):
        bits = self.precision_bits
        if not isinstance(bits, int) or not 64 <= bits <= MAX_PRECISION_BITS:
            raise DomainError(f"precision_bits must be an integer in [64, {MAX_PRECISION_BITS}], got {bits!r}")
        floor = 2.0 ** (8 - bits)
        if self.target_abs_error is None:
            object.__setattr__(self, "target_abs_error", floor)
        else:
            target = float(self.target_abs_error)
            if not (math.isfinite(target) and target >= floor):
                raise DomainError(f"target_abs_error must be >= 2^(8-{bits}) = {floor:.3g}, got {target!r}")
            object.__setattr__(self, "target_abs_error", target)

    @property
    def mp(self) -> MPContext:
        return mp_context(self.precision_bits)

    def working(self, extra: int = 0) -> MPContext:
        return mp_context(self.precision_bits + GUARD_BITS + max(0, int(extra)))

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(min(2 * self.precision_bits, MAX_PRECISION_BITS))


class Approx(NamedTuple):
    value: object  # mpc / mpf
    error: object  # nonnegative mpf


def as_complex(z, m: MPContext):
    """Coerce ``z`` to an ``mpc`` of context ``m``; NaN and infinities are rejected."""
    if isinstance(z, str):
        w = m.mpmathify(z.replace(" ", ""))
    elif hasattr(z, "real") and hasattr(z, "imag"):
        w = m.mpc(m.mpf(z.real), m.mpf(z.imag))
    else:
        w = m.mpf(z)
    w = m.mpc(w)
    if not (m.isfinite(w.real) and m.isfinite(w.imag)):
        raise DomainError(f"non-finite complex value {z!r}")
    return w


def _eps(m: MPContext):
    return m.ldexp(m.mpf(1), 1 - m.prec)


def _is_nonpositive_integer(z) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == int(z.real)


def _log2(x) -> float:
    x = float(abs(x)) if not isinstance(x, float) else abs(x)
    if x == 0:
        return -1e9
    return math.log2(x) if math.isfinite(x) else 1e9


def _mag2(x) -> int:
    """Cheap binary magnitude of an mpf/mpc (never overflows)."""
    m = mp_context(64)
    a = m.mpf(abs(x)) if not hasattr(x, "imag") else m.mpf(abs(m.mpc(x)))
    if a == 0:
        return -(10**9)
    return int(m.floor(m.log(a, 2)))


# --------------------------------------------------------------------------- zeta

def _zeta_fused_em(s, wp: int, target):
    """(s - 1) * zeta(s) by Euler-Maclaurin at ``wp`` bits.

    Returns ``(value, bound)`` in ``mp_context(wp)``; ``bound`` covers the
    truncated remainder and an estimate of rounding.  Multiplying by ``s - 1``
    inside the summation keeps the expression finite at ``s = 1``.
    """
    m = mp_context(wp)
    s = m.mpc(s)
    sigma = s.real
    target = m.mpf(target)
    t_abs = abs(s.imag)
    log_target = -float(m.log(target)) if target > 0 else wp * 0.7
    n_terms = max(8, int((log_target + t_abs) / (2 * math.pi) * 0.6) + 4)
    sm1 = s - 1
    while n_terms <= _EM_MAX_TERMS:
        big_n = m.mpf(n_terms)
        log_n = m.log(big_n)
        head = m.mpc(0)
        mag = m.mpf(0)
        for k in range(1, n_terms):
            term = m.exp(-s * m.log(k)) if k > 1 else m.mpc(1)
            head += term
            mag += abs(term)
        n_pow = m.exp(-s * log_n)  # N^-s
        head += n_pow / 2
        mag += abs(n_pow)
        # Bernoulli corrections T_j = B_2j/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1)
        rising = s
        n_fac = n_pow / big_n
        inv_n2 = 1 / (big_n * big_n)
        corr = m.mpc(0)
        remainder = None
        j = 1
        prev = None
        while True:
            coeff = m.bernoulli(2 * j) / m.factorial(2 * j)
            term = coeff * rising * n_fac
            a_term = abs(term)
            # remainder after j-1 terms is bounded by |s+2j-1|/(sigma+2j-1) |T_j|
            denom = sigma + 2 * j - 1
            if denom > 0:
                bound = abs(s + 2 * j - 1) / denom * a_term
                if bound * abs(sm1) <= target / 4:
                    remainder = bound
                    break
            if prev is not None and a_term > prev and j > 4:
                break  # asymptotic series turned; need a larger N
            prev = a_term
            corr += term
            mag += a_term
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            n_fac *= inv_n2
            j += 1
            if j > 4 * wp:
                break
        if remainder is None:
            n_terms = int(n_terms * 1.6) + 1
            continue
        value = sm1 * (head + corr) + big_n * n_pow
        rounding = 8 * (n_terms + j) * _eps(m) * (abs(sm1) * mag + abs(big_n * n_pow))
        return value, abs(sm1) * remainder + rounding
    raise PrecisionError(f"Euler-Maclaurin needs more than {_EM_MAX_TERMS} terms at s = {s}")


def _zeta_internal(s, bits: int, target, fused: bool):
    sigma = float(s.real)
    # cancellation in the head sum grows like N^(1 - sigma); pay for it in guard bits
    n_guess = max(8.0, (bits + abs(float(s.imag))) / 6.0)
    extra = int(max(0.0, (1.0 - sigma) * math.log2(n_guess))) + 8
    wp = bits + GUARD_BITS + extra
    m = mp_context(wp)
    s = m.mpc(s)
    if fused:
        return _zeta_fused_em(s, wp, target)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    sm1 = s - 1
    # dividing the fused value by (s - 1) scales the bound by 1/|s - 1|
    v, e = _zeta_fused_em(s, wp + max(0, -_mag2(sm1)), m.mpf(target) * abs(sm1))
    return v / sm1, e / abs(sm1)


def zeta_with_error(z, ctx: PrecisionContext) -> Approx:
    m = ctx.mp
    z = as_complex(z, m)
    if z == 1:
        raise PoleError("zeta has a pole at z = 1")
    v, e = _zeta_internal(z, ctx.precision_bits, m.mpf(ctx.target_abs_error) / 4, fused=False)
    out = m.mpc(v)
    return Approx(out, m.mpf(e) + abs(out) * _eps(m))


def zeta(z, ctx: PrecisionContext):
    """Riemann zeta at complex ``z`` via Euler-Maclaurin summation."""
    return _checked(zeta_with_error(z, ctx), ctx, "zeta")


# --------------------------------------------------------------------------- gamma

def _loggamma_stirling(w, wp: int, target):
    """log Gamma(w) by Stirling's series, for Re w large enough. Returns (value, bound)."""
    m = mp_context(wp)
    w = m.mpc(w)
    val = (w - m.mpf(0.5)) * m.log(w) - w + m.log(2 * m.pi) / 2
    inv = 1 / w
    inv2 = inv * inv
    pw = inv
    abs_w = abs(w)
    half_arg = abs(m.arg(w)) / 2
    sec = 1 / m.cos(half_arg)
    target = m.mpf(target)
    j = 1
    prev = None
    while True:
        b = m.bernoulli(2 * j)
        term = b / (2 * j * (2 * j - 1)) * pw
        # remainder after j-1 terms: |B_2j|/(2j(2j-1)|w|^(2j-1)) sec^(2j)(arg/2)
        bound = abs(b) / (2 * j * (2 * j - 1) * abs_w ** (2 * j - 1)) * sec ** (2 * j)
        if bound <= target:
            return val, bound + 8 * j * _eps(m) * (abs(val) + 1)
        if prev is not None and bound > prev:
            raise PrecisionError(f"Stirling series diverges before reaching target at w = {w}")
        prev = bound
        val += term
        pw *= inv2
        j += 1


def _gamma_internal(z, wp: int, rel_target):
    """Gamma(z) at ``wp`` bits; ``rel_target`` bounds the relative error."""
    m = mp_context(wp)
    z = m.mpc(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    x0 = (wp * math.log(2)) / (2 * math.pi) + 4
    shift = max(0, int(math.ceil(x0 - float(z.real))))
    w = z + shift
    lg, lg_err = _loggamma_stirling(w, wp, m.mpf(rel_target) / 2)
    val = m.exp(lg)
    if shift:
        denom = m.mpc(1)
        for i in range(shift):
            denom *= z + i
        val /= denom
    rel = lg_err * 2 + 4 * (shift + 8) * _eps(m) * (1 + abs(lg))
    return val, rel


def gamma_with_error(z, ctx: PrecisionContext) -> Approx:
    m = ctx.mp
    z = as_complex(z, m)
    if _is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z}")
    wp = ctx.precision_bits + GUARD_BITS
    rel_target = mp_context(wp).ldexp(1, -wp + 4)
    v, rel = _gamma_internal(z, wp, rel_target)
    out = m.mpc(v)
    return Approx(out, abs(v) * (rel + _eps(m)))


def gamma(z, ctx: PrecisionContext):
    """Euler's Gamma via Stirling's series after lifting Re z by recurrence."""
    return _checked(gamma_with_error(z, ctx), ctx, "gamma")


# --------------------------------------------------------------------------- xi

def _xi_direct(z, bits: int, target):
    """xi(z) = pi^(-z/2) Gamma(z/2 + 1) (z - 1) zeta(z), no reflection.

    The form folds z/2 into the Gamma argument and (z - 1) into the zeta sum,
    so neither z = 0 nor z = 1 produces 0 * inf.
    """
    wp = bits + GUARD_BITS
    m = mp_context(wp)
    z = m.mpc(z)
    half = z / 2 + 1
    if _is_nonpositive_integer(half):
        raise PrecisionError(f"direct xi formula is 0*inf at {z}; use the reflected evaluation")
    g, g_rel = _gamma_internal(half, wp, m.ldexp(1, -wp + 4))
    pref = m.exp(-z / 2 * m.log(m.pi)) * g
    pref_abs = abs(pref)
    z_target = m.mpf(target) / (4 * max(pref_abs, m.ldexp(1, -wp)))
    extra = max(0, _mag2(pref))
    zf, zf_err = _zeta_internal(z, bits + extra, z_target, fused=True)
    m2 = mp_context(wp + extra)
    val = m2.mpc(pref) * m2.mpc(zf)
    err = pref_abs * zf_err + abs(val) * (g_rel + 8 * _eps(m))
    return val, err


def _xi_internal(z, bits: int, target, reflect: bool = True):
    m = mp_context(bits + GUARD_BITS)
    z = m.mpc(z)
    if reflect and z.real < 0.5:
        z = 1 - z
    return _xi_direct(z, bits, target)


def xi_with_error(z, ctx: PrecisionContext, reflect: bool = True) -> Approx:
    """xi(z) and an error bound.

    ``reflect=False`` skips the functional-equation reflection for Re z < 1/2,
    which is only useful for testing that the two sides really agree.
    """
    m = ctx.mp
    z = as_complex(z, m)
    v, e = _xi_internal(z, ctx.precision_bits, m.mpf(ctx.target_abs_error) / 4, reflect)
    out = m.mpc(v)
    return Approx(out, m.mpf(e) + abs(out) * _eps(m))


def xi(z, ctx: PrecisionContext, reflect: bool = True):
    """Riemann xi(z) = 1/2 z (z-1) pi^(-z/2) Gamma(z/2) zeta(z); entire, xi(0) = xi(1) = 1/2."""
    return _checked(xi_with_error(z, ctx, reflect), ctx, "xi")


def _log_xi_internal(z, bits: int, target):
    """Principal log xi(z) at ``bits + GUARD_BITS``; asks xi for relative accuracy."""
    wp = bits + GUARD_BITS
    m = mp_context(wp)
    target = m.mpf(target)
    v, e = _xi_internal(z, bits, target)
    if v == 0 or e >= abs(v) / 4:
        # retry once with a target scaled to the magnitude we now know
        scale = abs(v) if v != 0 else m.ldexp(1, -wp)
        v, e = _xi_internal(z, bits + max(0, -_mag2(scale)), target * scale / 4)
        if v == 0 or e >= abs(v) / 4:
            raise ZeroOfXiError(f"xi is indistinguishable from 0 at {z} (|xi| = {m.nstr(abs(v), 5)})")
    mv = mp_context(wp)
    v = mv.mpc(v)
    lv = mv.log(v)
    rel = e / abs(v)
    if rel > target / 2:
        v, e = _xi_internal(z, bits + max(0, -_mag2(v)), target * abs(v) / 4)
        v = mv.mpc(v)
        lv = mv.log(v)
        rel = e / abs(v)
    return lv, 2 * rel + abs(lv) * _eps(mv)


def log_xi_with_error(z, ctx: PrecisionContext) -> Approx:
    m = ctx.mp
    z = as_complex(z, m)
    lv, e = _log_xi_internal(z, ctx.precision_bits, m.mpf(ctx.target_abs_error) / 4)
    out = m.mpc(lv)
    return Approx(out, m.mpf(e) + abs(out) * _eps(m))


def log_xi(z, ctx: PrecisionContext):
    """Principal branch of log xi(z); real on the real axis, where xi > 0."""
    return _checked(log_xi_with_error(z, ctx), ctx, "log_xi")


# --------------------------------------------------------------------------- Cauchy engine

@dataclass(frozen=True)
class LogTaylor:
    """Taylor coefficients of a continuously tracked log f around ``center``."""

    center: object
    radius: object
    coeffs: tuple
    error_bounds: tuple
    nodes: int


def log_taylor_coeffs(
    f: Callable,
    center,
    radius,
    order: int,
    ctx: PrecisionContext,
    *,
    value_error: Callable | None = None,
    min_nodes: int = 32,
    max_nodes: int = _CAUCHY_MAX_NODES,
    conjugate_symmetric: bool = False,
) -> LogTaylor:
    """Coefficients c_0..c_order of log f(center + w) by trapezoidal Cauchy quadrature.

    ``f`` maps an mpc to ``(value, abs_error)`` at working precision.  The log
    branch is unwrapped node by node starting from the principal value at
    ``center + radius``; adjacent nodes must differ in argument by less than
    pi/2 (otherwise the node count doubles) and the total winding must vanish,
    i.e. f has no zero inside the circle.

    Node counts double until the aliasing estimate, taken from the top DFT
    bins, drops below the target.  With ``conjugate_symmetric`` (real center,
    f real on the real axis) only the upper half circle is evaluated.
    """
    if order < 0:
        raise DomainError("order must be >= 0")
    wp = ctx.precision_bits + GUARD_BITS
    m = mp_context(wp)
    center = m.mpc(center)
    radius = m.mpf(radius)
    if radius <= 0:
        raise DomainError("radius must be positive")
    target = m.mpf(ctx.target_abs_error)
    nodes = max(min_nodes, 8)
    nodes = 1 << max(3, (nodes - 1).bit_length())
    while nodes < 2 * (order + 8):
        nodes *= 2
    cache: dict = {}

    def sample(j: int, total: int):
        key = (j * (_CAUCHY_MAX_NODES // total)) % _CAUCHY_MAX_NODES
        if key not in cache:
            if conjugate_symmetric and key > _CAUCHY_MAX_NODES // 2:
                mirror = _CAUCHY_MAX_NODES - key
                if mirror not in cache:
                    cache[mirror] = _eval_node(mirror)
                v, e = cache[mirror]
                cache[key] = (m.conj(v), e)
            else:
                cache[key] = _eval_node(key)
        return cache[key]

    def _eval_node(key: int):
        z = center + radius * m.expjpi(2 * m.mpf(key) / _CAUCHY_MAX_NODES)
        if conjugate_symmetric and key in (0, _CAUCHY_MAX_NODES // 2):
            z = m.mpc(z.real, 0)
        return f(z)

    while nodes <= max_nodes:
        logs = []
        errs = []
        prev = None
        ok = True
        for j in range(nodes):
            v, e = sample(j, nodes)
            v = m.mpc(v)
            if v == 0 or e >= abs(v) / 4:
                raise ZeroOfXiError(f"function vanishes on the Cauchy circle near {center + radius * m.expjpi(2 * m.mpf(j) / nodes)}")
            lv = m.log(v)
            if prev is not None:
                k = m.nint((prev.imag - lv.imag) / (2 * m.pi))
                lv = lv + m.mpc(0, 2 * m.pi * k)
                if abs(lv.imag - prev.imag) > m.pi / 2:
                    ok = False
                    break
            logs.append(lv)
            errs.append(e / abs(v))
            prev = lv
        if ok:
            closing = logs[0].imag - logs[-1].imag
            wrap = m.nint(closing / (2 * m.pi))
            if abs(closing - 2 * m.pi * wrap) > m.pi / 2:
                ok = False
            elif wrap != 0:
                raise RadiusTooLargeError(
                    f"log f winds {int(wrap)} times around the circle |z - {m.nstr(center, 8)}| = {m.nstr(radius, 6)}; "
                    "it encloses a zero or pole"
                )
        if not ok:
            nodes *= 2
            continue
        # DFT bins 0..order plus the top 8 (aliasing estimate)
        top = list(range(max(order + 1, nodes - 8), nodes))
        bins = {}
        for k in list(range(order + 1)) + top:
            if k in bins:
                continue
            acc = m.mpc(0)
            for j, lv in enumerate(logs):
                acc += lv * m.expjpi(-2 * m.mpf(j * k % nodes) / nodes)
            bins[k] = acc / nodes
        node_err = max(errs)
        alias = 2 * max(abs(bins[k]) for k in top) if top else m.mpf(0)
        round_err = 4 * _eps(m) * max(abs(lv) for lv in logs) * (1 + m.log(nodes, 2))
        total = alias + node_err + round_err
        if alias <= target / 2 or nodes * 2 > max_nodes:
            if total > target and alias > target / 2:
                raise QuadratureError(
                    f"Cauchy quadrature not converged with {nodes} nodes (aliasing {m.nstr(alias, 3)})"
                )
            coeffs = []
            bounds = []
            rk = m.mpf(1)
            for k in range(order + 1):
                coeffs.append(bins[k] / rk)
                bounds.append(total / rk)
                rk *= radius
            return LogTaylor(center, radius, tuple(coeffs), tuple(bounds), nodes)
        nodes *= 2
    raise QuadratureError(f"Cauchy quadrature exceeded {max_nodes} nodes")


def _xi_node_evaluator(ctx: PrecisionContext):
    bits = ctx.precision_bits + GUARD_BITS
    target = mp_context(bits).mpf(ctx.target_abs_error) / 16

    def f(z):
        return _xi_internal(z, bits, target)

    return f


def xi_logderiv_with_error(z, ctx: PrecisionContext, radius=None) -> Approx:
    m = ctx.mp
    z = as_complex(z, m)
    if radius is None:
        radius = m.mpf(1) / 4
    lt = log_taylor_coeffs(
        _xi_node_evaluator(ctx),
        z,
        radius,
        1,
        ctx,
        conjugate_symmetric=(z.imag == 0),
    )
    return Approx(m.mpc(lt.coeffs[1]), m.mpf(lt.error_bounds[1]) + abs(lt.coeffs[1]) * _eps(m))


def xi_logderiv(z, ctx: PrecisionContext, radius=None):
    """xi'/xi(z) from the Cauchy integral of log xi on a small circle around z."""
    return _checked(xi_logderiv_with_error(z, ctx, radius), ctx, "xi_logderiv")


def _checked(res: Approx, ctx: PrecisionContext, name: str):
    if res.error > ctx.target_abs_error:
        raise PrecisionError(
            f"{name}: error bound {float(res.error):.3g} exceeds target {ctx.target_abs_error:.3g}; "
            "raise precision_bits or relax target_abs_error"
        )
    return res.value
