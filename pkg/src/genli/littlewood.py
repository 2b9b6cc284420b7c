"""Numerical check of the generalized Littlewood theorem on rectangles.

For a rectangle C, f analytic and zero-free on C (meromorphic inside) and a
kernel g with finitely many poles,

    oint_C F g dz = 2 pi i [ sum_{g-poles p} res(F g, p)
                             - sum_{f-zeros x0+iy0} m * int_{X1+iy0}^{x0+iy0} g dz
                             + sum_{f-poles x0+iy0} m * int_{X1+iy0}^{x0+iy0} g dz ],

where F = log f is fixed at the bottom-right corner and continued along the
right edge and then leftwards along horizontals.  On the left edge this
determination jumps by 2 pi i m (zero) or -2 pi i m (pole) at the ordinate
of every enclosed zero or pole; :func:`lhs_contour_integral` integrates the
continuous branch and re-inserts those jumps.

Kernels are finite sums of principal parts a (z - q)^-m, which covers the
simple-pole kernels, arbitrary rational kernels without polynomial part and
the Li kernels -n(2a-1)(z-a)^(n-1)/(z+a-1)^(n+1) + n(2a-1)/(z+a-1)^2.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

from mpmath.calculus.quadrature import GaussLegendre

from .errors import BoundaryZeroError, DomainError, QuadratureError
from .precision import (
    GUARD_BITS,
    PrecisionContext,
    _xi_internal,
    as_complex,
    log_taylor_coeffs,
    mp_context,
)

SCHEMA_VERSION = 1
_GL_DEGREE = 4  # 3 * 2^(degree-1) = 24 nodes per panel
_MAX_DEPTH = 40


@dataclass(frozen=True)
class RectContour:
    x1: float
    x2: float
    y1: float
    y2: float

    def __post_init__(self):
        if not (float(self.x1) < float(self.x2) and float(self.y1) < float(self.y2)):
            raise DomainError(f"degenerate rectangle {self}")

    def contains(self, z) -> bool:
        return float(self.x1) < float(z.real) < float(self.x2) and float(self.y1) < float(z.imag) < float(self.y2)

    def on_boundary(self, z, tol: float = 0.0) -> bool:
        x, y = float(z.real), float(z.imag)
        x1, x2, y1, y2 = (float(v) for v in (self.x1, self.x2, self.y1, self.y2))
        inside_closed = x1 - tol <= x <= x2 + tol and y1 - tol <= y <= y2 + tol
        near_edge = min(abs(x - x1), abs(x - x2), abs(y - y1), abs(y - y2)) <= tol
        return inside_closed and near_edge


@dataclass(frozen=True)
class MeromorphicSpec:
    """f given by an evaluator plus its declared zeros and poles (location, order)."""

    evaluator: Callable
    zeros: tuple = ()
    poles: tuple = ()
    name: str = "f"


@dataclass(frozen=True)
class KernelPole:
    """Principal part sum_m principal[m-1] (z - location)^-m."""

    location: object
    principal: tuple

    @property
    def order(self) -> int:
        return len(self.principal)

    def residue_with(self, taylor: Sequence) -> object:
        """Residue of F g at the pole from the Taylor coefficients F_0, F_1, ... of F."""
        return sum(a * taylor[m] for m, a in enumerate(self.principal))


@dataclass(frozen=True)
class KernelSpec:
    poles: tuple
    name: str = "g"

    def evaluate(self, z):
        total = 0
        for p in self.poles:
            w = z - p.location
            inv = 1 / w
            acc = 0
            pw = inv
            for a in p.principal:
                if a != 0:
                    acc += a * pw
                pw *= inv
            total += acc
        return total

    def segment_integral(self, z1, z2, m):
        """int_{z1}^{z2} g dz along the straight segment, from antiderivatives."""
        total = m.mpc(0)
        for p in self.poles:
            q = m.mpc(p.location)
            w1, w2 = z1 - q, z2 - q
            if _on_segment(q, z1, z2, m):
                raise DomainError(f"kernel pole {m.nstr(q, 8)} lies on the integration segment")
            for k, a in enumerate(p.principal, start=1):
                if a == 0:
                    continue
                if k == 1:
                    total += a * m.log(w2 / w1)
                else:
                    total += a * (w2 ** (1 - k) - w1 ** (1 - k)) / (1 - k)
        return total


def _on_segment(q, z1, z2, m) -> bool:
    d = z2 - z1
    if d == 0:
        return q == z1
    t = ((q - z1) / d)
    return abs(t.imag) * abs(d) < m.ldexp(1, -m.prec // 2) and 0 <= t.real <= 1


# ----------------------------------------------------------------- kernel zoo

def simple_pole_kernel(pole, residue=1, ctx: PrecisionContext | None = None) -> KernelSpec:
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    return KernelSpec((KernelPole(as_complex(pole, m), (as_complex(residue, m),)),), "simple_pole")


def rational_kernel(terms: Sequence, ctx: PrecisionContext | None = None) -> KernelSpec:
    """``terms`` holds (pole, order, coeff) triples; coefficients at a shared pole are merged."""
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    merged: dict = {}
    order_of: dict = {}
    for pole, order, coeff in terms:
        q = as_complex(pole, m)
        key = (str(q.real), str(q.imag))
        merged.setdefault(key, (q, {}))
        merged[key][1][int(order)] = merged[key][1].get(int(order), 0) + as_complex(coeff, m)
        order_of[key] = max(order_of.get(key, 0), int(order))
    poles = []
    for key, (q, coeffs) in merged.items():
        principal = tuple(coeffs.get(k, m.mpc(0)) for k in range(1, order_of[key] + 1))
        poles.append(KernelPole(q, principal))
    return KernelSpec(tuple(poles), "custom_rational")


def li_kernel(n: int, a, ctx: PrecisionContext | None = None) -> KernelSpec:
    """-n(2a-1)(z-a)^(n-1)/(z+a-1)^(n+1) + n(2a-1)/(z+a-1)^2 as a principal part at 1 - a.

    With w = z - (1-a) the first term expands to
    n sum_j C(n-1, j) (1-2a)^(n-j) w^(j-n-1); the w^-2 coefficient cancels the
    second term, leaving orders 3..n+1 (so g = O(z^-3)).  a = 0 gives the
    classical kernel n z^(n-1)/(z-1)^(n+1) - n/(z-1)^2.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    a = m.mpf(a)
    h = 1 - 2 * a
    principal = [m.mpc(0)] * (n + 1)
    for j in range(n):
        order = n + 1 - j
        principal[order - 1] += n * math.comb(n - 1, j) * h ** (n - j)
    principal[1] += n * (2 * a - 1)
    return KernelSpec((KernelPole(m.mpc(1 - a), tuple(principal)),), f"li_kernel(n={n}, a={m.nstr(a, 10)})")


# ----------------------------------------------------------------- function zoo

def rational_function(zeros: Sequence = (), poles: Sequence = (), scale=1, ctx: PrecisionContext | None = None) -> MeromorphicSpec:
    """f(z) = scale * prod (z - z_k)^m_k / prod (z - p_j)^m_j."""
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    zs = tuple((as_complex(z, m), int(o)) for z, o in zeros)
    ps = tuple((as_complex(p, m), int(o)) for p, o in poles)
    c = as_complex(scale, m)

    def f(z):
        v = c
        for q, o in zs:
            v *= (z - q) ** o
        for q, o in ps:
            v /= (z - q) ** o
        return v

    return MeromorphicSpec(f, zs, ps, "rational" if ps else "polynomial")


def xi_function(zeros: Sequence, ctx: PrecisionContext | None = None) -> MeromorphicSpec:
    """f = xi with the caller's list of (zero, order) inside the region of interest."""
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    bits = ctx.precision_bits
    target = m.mpf(ctx.target_abs_error) / 16

    def f(z):
        return _xi_internal(z, bits, target)

    return MeromorphicSpec(f, tuple((as_complex(z, m), int(o)) for z, o in zeros), (), "xi")


# ----------------------------------------------------------------- the verifier

@lru_cache(maxsize=None)
def _gl_nodes(bits: int, degree: int):
    m = mp_context(bits)
    return tuple(GaussLegendre(m).calc_nodes(degree, bits))


class _Branch:
    """Continuous log f along straight paths with step control."""

    def __init__(self, f: MeromorphicSpec, ctx: PrecisionContext):
        self.f = f
        self.m = mp_context(ctx.precision_bits + GUARD_BITS)
        self.guard = self.m.ldexp(1, -ctx.precision_bits // 2)
        self.evals = 0

    def value(self, z):
        v = self.f.evaluator(z)
        if isinstance(v, tuple):
            v = v[0]
        self.evals += 1
        return self.m.mpc(v)

    def log_near(self, z, ref):
        """Branch of log f(z) nearest to ``ref`` (no step control)."""
        m = self.m
        v = self.value(z)
        if abs(v) <= self.guard:
            raise BoundaryZeroError(f"|{self.f.name}| ~ 0 at {m.nstr(z, 10)}; shift the rectangle slightly")
        lv = m.log(v)
        k = m.nint((ref.imag - lv.imag) / (2 * m.pi))
        return lv + m.mpc(0, 2 * m.pi * k)

    def walk(self, z0, F0, z1, depth: int = 0):
        """Continue F from z0 (value F0) to z1, halving steps whose arg change exceeds pi/2."""
        F1 = self.log_near(z1, F0)
        if abs(F1.imag - F0.imag) < self.m.pi / 2:
            return F1
        if depth > _MAX_DEPTH:
            raise QuadratureError(f"argument tracking failed between {z0} and {z1}")
        mid = (z0 + z1) / 2
        Fm = self.walk(z0, F0, mid, depth + 1)
        return self.walk(mid, Fm, z1, depth + 1)


@dataclass
class _Edge:
    start: object
    end: object
    offset: object  # constant added to the continuous branch (jump bookkeeping)


class LittlewoodVerifier:
    """Evaluates both sides of the theorem for one (f, g, rectangle) triple."""

    def __init__(self, f: MeromorphicSpec, g: KernelSpec, c: RectContour, ctx: PrecisionContext | None = None,
                 tolerance: float = 1e-10, jumps: bool = True):
        self.ctx = ctx or PrecisionContext()
        self.m = mp_context(self.ctx.precision_bits + GUARD_BITS)
        self.f, self.g, self.c = f, g, c
        self.tolerance = float(tolerance)
        self.jumps = jumps
        self.branch = _Branch(f, self.ctx)
        m = self.m
        self.x1, self.x2, self.y1, self.y2 = (m.mpf(v) for v in (c.x1, c.x2, c.y1, c.y2))
        self._validate()
        self.anchor = m.mpc(self.x2, self.y1)
        v = self.branch.value(self.anchor)
        if abs(v) <= self.branch.guard:
            raise BoundaryZeroError("f vanishes at the bottom-right corner; shift the rectangle slightly")
        self.F_anchor = m.log(v)

    # -- bookkeeping ---------------------------------------------------------
    def _validate(self):
        m = self.m
        tol = float(m.ldexp(1, -self.ctx.precision_bits // 2))
        for kind, pts in (("zero", self.f.zeros), ("pole", self.f.poles)):
            for z, o in pts:
                if self.c.on_boundary(z, tol):
                    raise BoundaryZeroError(
                        f"{kind} of {self.f.name} at {m.nstr(z, 10)} lies on the contour; shift the rectangle slightly"
                    )
                if o < 1:
                    raise DomainError("orders must be positive")
        fpts = [z for z, _ in self.f.zeros] + [z for z, _ in self.f.poles]
        for p in self.g.poles:
            if self.c.on_boundary(p.location, tol):
                raise BoundaryZeroError(f"kernel pole {m.nstr(p.location, 10)} lies on the contour")
            for z in fpts:
                if abs(m.mpc(z) - p.location) < tol:
                    raise DomainError("poles of g coincide with a zero or pole of f")

    def _inside(self, pts):
        return [(self.m.mpc(z), o) for z, o in pts if self.c.contains(z)]

    def _jump_levels(self):
        """Ordinates where F jumps on the left edge, with the jump F(above) - F(below)."""
        m = self.m
        levels: dict = {}
        for z, o in self._inside(self.f.zeros):
            levels[z.imag] = levels.get(z.imag, 0) + o
        for z, o in self._inside(self.f.poles):
            levels[z.imag] = levels.get(z.imag, 0) - o
        return sorted(((y, 2 * m.pi * k) for y, k in levels.items() if k != 0), key=lambda t: t[0])

    def F_at(self, z):
        """Determination of log f used for F at an interior point (right edge, then leftwards)."""
        m = self.m
        z = m.mpc(z)
        turn = m.mpc(self.x2, z.imag)
        F_turn = self._walk_path([self.anchor, turn], self.F_anchor)
        return self._walk_path([turn, z], F_turn)

    def _walk_path(self, pts, F0, pieces: int = 16):
        F = F0
        for a, b in zip(pts[:-1], pts[1:]):
            for k in range(1, pieces + 1):
                z_prev = a + (b - a) * (k - 1) / pieces
                z_next = a + (b - a) * k / pieces
                F = self.branch.walk(z_prev, F, z_next)
        return F

    # -- quadrature -------------------------------------------------------------
    def _panel(self, za, Fa, zb, offset):
        """Gauss-Legendre panel of (F + offset) g over [za, zb]; returns (value, F(zb))."""
        m = self.m
        nodes = _gl_nodes(m.prec, _GL_DEGREE)
        half = (zb - za) / 2
        mid = (za + zb) / 2
        pts = sorted(((mid + half * x, w) for x, w in nodes), key=lambda t: float(abs(t[0] - za)))
        acc = m.mpc(0)
        F = Fa
        z_prev = za
        for z, w in pts:
            F = self.branch.walk(z_prev, F, z)
            acc += w * (F + offset) * self.g.evaluate(z)
            z_prev = z
        F_end = self.branch.walk(z_prev, F, zb)
        return acc * half, F_end

    def _adaptive(self, za, Fa, zb, offset, tol, depth=0, whole=None):
        m = self.m
        if whole is None:
            whole, _ = self._panel(za, Fa, zb, offset)
        zm = (za + zb) / 2
        left, Fm = self._panel(za, Fa, zm, offset)
        right, Fb = self._panel(zm, Fm, zb, offset)
        if abs(left + right - whole) <= tol or depth >= _MAX_DEPTH:
            if depth >= _MAX_DEPTH and abs(left + right - whole) > tol:
                raise QuadratureError(f"adaptive quadrature did not converge on [{m.nstr(za, 6)}, {m.nstr(zb, 6)}]")
            return left + right, Fb
        lv, Fm2 = self._adaptive(za, Fa, zm, offset, tol / 2, depth + 1, left)
        rv, Fb2 = self._adaptive(zm, Fm2, zb, offset, tol / 2, depth + 1, right)
        return lv + rv, Fb2

    def _edge_integral(self, za, Fa, zb, offset, tol, splits: Sequence = ()):
        """Integrate along [za, zb] split at the given interior points (each with its offset change)."""
        total = self.m.mpc(0)
        z0, F0 = za, Fa
        cur = offset
        for zs, delta in list(splits) + [(zb, 0)]:
            val, F1 = self._adaptive(z0, F0, zs, cur, tol)
            total += val
            z0, F0 = zs, F1
            cur = cur + delta
        return total, F0

    def lhs(self):
        """Counterclockwise oint_C F g dz with the jump rule on the left edge."""
        m = self.m
        tol = m.mpf(self.tolerance) / 100
        x1, x2, y1, y2 = self.x1, self.x2, self.y1, self.y2
        br, tr, tl, bl = m.mpc(x2, y1), m.mpc(x2, y2), m.mpc(x1, y2), m.mpc(x1, y1)
        right, F_tr = self._edge_integral(br, self.F_anchor, tr, 0, tol)
        # bottom edge: F continued leftwards from the anchor, traversed left to right
        _, F_bl = self._walk_trace(br, self.F_anchor, bl)
        bottom, F_br_check = self._edge_integral(bl, F_bl, br, 0, tol)
        top, F_tl = self._edge_integral(tr, F_tr, tl, 0, tol)
        # left edge, downwards from tl: F = continuous branch - sum of jumps passed
        splits = []
        if self.jumps:
            for y, jump in sorted(self._jump_levels(), key=lambda t: -t[0]):
                splits.append((m.mpc(x1, y), -m.mpc(0, jump)))
        left, F_bl_cont = self._edge_integral(tl, F_tl, bl, 0, tol, splits)
        winding = (F_bl_cont - F_bl).imag / (2 * m.pi)
        declared = sum(k for _, k in self._jump_levels()) / (2 * m.pi)
        self.winding = float(winding)
        if abs(float(winding) - float(declared)) > 1e-6:
            raise DomainError(
                f"argument principle mismatch: log {self.f.name} winds {float(winding):.6f} times around the contour, "
                f"declared zeros minus poles inside = {float(declared):.0f}"
            )
        if abs(F_br_check - self.F_anchor) > 1e-6:
            raise QuadratureError("branch tracking along the bottom edge is inconsistent")
        return right + top + left + bottom

    def _walk_trace(self, za, Fa, zb, pieces: int = 64):
        F = Fa
        for k in range(1, pieces + 1):
            F = self.branch.walk(za + (zb - za) * (k - 1) / pieces, F, za + (zb - za) * k / pieces)
        return None, F

    # -- right-hand side -------------------------------------------------------
    def _taylor_at(self, p, order: int):
        m = self.m
        F0 = self.F_at(p)
        coeffs = [F0]
        if order >= 1:
            pts = [m.mpc(z) for z, _ in self.f.zeros] + [m.mpc(z) for z, _ in self.f.poles]
            dist = min([abs(p - z) for z in pts] + [m.mpf(2)])
            radius = dist / 2

            def fv(z):
                v = self.branch.value(z)
                return v, abs(v) * m.ldexp(1, 8 - self.ctx.precision_bits)

            lt = log_taylor_coeffs(fv, p, radius, order, self.ctx)
            coeffs.extend(m.mpc(c) for c in lt.coeffs[1:])
        return coeffs

    def rhs(self):
        m = self.m
        total = m.mpc(0)
        for p in self.g.poles:
            if not self.c.contains(p.location):
                continue
            taylor = self._taylor_at(m.mpc(p.location), p.order - 1)
            total += p.residue_with(taylor)
        for sign, pts in ((-1, self.f.zeros), (1, self.f.poles)):
            for z, o in self._inside(pts):
                start = m.mpc(self.x1, z.imag)
                total += sign * o * self.g.segment_integral(start, z, m)
        return 2j * m.pi * total


@dataclass(frozen=True)
class LittlewoodResult:
    name: str
    lhs: object
    rhs: object
    residual: float
    tolerance: float
    expect_pass: bool = True
    evaluations: int = 0

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    @property
    def ok(self) -> bool:
        """True when the outcome matches the expectation (negative controls must fail)."""
        return self.passed == self.expect_pass


def lhs_contour_integral(f, g, c, ctx=None, tolerance=1e-10, jumps=True):
    return LittlewoodVerifier(f, g, c, ctx, tolerance, jumps).lhs()


def rhs_sum(f, g, c, ctx=None, tolerance=1e-10):
    return LittlewoodVerifier(f, g, c, ctx, tolerance).rhs()


def verify(f, g, c, ctx=None, tolerance=1e-10, jumps=True, name="case", expect_pass=True) -> LittlewoodResult:
    """|lhs - rhs| for one configuration."""
    v = LittlewoodVerifier(f, g, c, ctx, tolerance, jumps)
    rhs = v.rhs()
    lhs = v.lhs()
    residual = float(abs(lhs - rhs))
    return LittlewoodResult(name, lhs, rhs, residual, float(tolerance), expect_pass, v.branch.evals)


# ----------------------------------------------------------------- case files

@dataclass(frozen=True)
class LittlewoodCase:
    name: str
    f: MeromorphicSpec
    g: KernelSpec
    rect: RectContour
    tolerance: float
    ctx: PrecisionContext
    jumps: bool = True
    expect_pass: bool = True

    def run(self) -> LittlewoodResult:
        return verify(self.f, self.g, self.rect, self.ctx, self.tolerance, self.jumps, self.name, self.expect_pass)


def _cval(v):
    if isinstance(v, (list, tuple)):
        re, im = (list(v) + [0])[:2]
        return f"{re}+{im}j" if not str(im).startswith("-") else f"{re}{im}j"
    return str(v)


def _pts(items):
    out = []
    for it in items:
        if isinstance(it, dict):
            out.append((_cval([it["re"], it.get("im", 0)]), int(it.get("order", 1))))
        else:
            it = list(it)
            out.append((_cval(it[:2]), int(it[2]) if len(it) > 2 else 1))
    return out


def case_from_dict(d: dict, catalog=None) -> LittlewoodCase:
    """Build a case from its JSON description (see README for the schema)."""
    try:
        return _case_from_dict(d, catalog)
    except (KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed case {d.get('name', '?') if isinstance(d, dict) else d!r}: {exc!r}") from None


def _case_from_dict(d: dict, catalog=None) -> LittlewoodCase:
    ctx = PrecisionContext(int(d.get("precision_bits", 128)), d.get("target_abs_error"))
    rect = RectContour(*(float(v) for v in d["rectangle"]))
    fd = d["function"]
    tag = fd["tag"]
    if tag in ("polynomial", "rational"):
        f = rational_function(_pts(fd.get("zeros", [])), _pts(fd.get("poles", [])), _cval(fd.get("scale", 1)), ctx)
    elif tag == "xi":
        zeros = _pts(fd.get("zeros", []))
        if "catalog" in fd or catalog is not None:
            from .zeros import ingest

            cat = catalog if catalog is not None else ingest(fd["catalog"])
            limit = max(abs(rect.y1), abs(rect.y2))
            for t in cat.ordinates[: cat.upto(min(limit, cat.t_max))]:
                zeros += [(f"0.5+{t}j", 1), (f"0.5-{t}j", 1)]
        f = xi_function(zeros, ctx)
    else:
        raise DomainError(f"unknown function tag {tag!r}")
    gd = d["kernel"]
    gtag = gd["tag"]
    if gtag == "simple_pole":
        g = simple_pole_kernel(_cval(gd["pole"]), _cval(gd.get("residue", 1)), ctx)
    elif gtag == "li_kernel":
        g = li_kernel(int(gd["n"]), str(gd["a"]), ctx)
    elif gtag == "custom_rational":
        g = rational_kernel([(_cval(t["pole"]), int(t.get("order", 1)), _cval(t.get("coeff", 1))) for t in gd["terms"]], ctx)
    else:
        raise DomainError(f"unknown kernel tag {gtag!r}")
    return LittlewoodCase(
        d.get("name", f"{tag}/{gtag}"),
        f,
        g,
        rect,
        float(d.get("tolerance", 1e-10)),
        ctx,
        not d.get("disable_jumps", False),
        d.get("expect", "pass") == "pass",
    )


def load_cases(path: str | Path, catalog=None) -> list[LittlewoodCase]:
    data = json.loads(Path(path).read_text())
    items = data["cases"] if isinstance(data, dict) else data
    return [case_from_dict(d, catalog) for d in items]
