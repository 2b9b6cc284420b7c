"""Bombieri-Lagarias type sums over finite complex multisets.

For a multiset R, a real a != sigma and s(rho) = (rho - a)/(rho + a - 2 sigma),
the sums of interest are sum_R mult * Re(1 - s^n).  Elements on Re rho = sigma
have |s| = 1 and contribute non-negative terms; an element with
(Re rho - sigma)(sigma - a) > 0 has |s| > 1 and eventually drives the sum below
any -c e^(eps n) with e^eps < |s|.

Scans run in double precision with numpy and every reported sign is
re-evaluated at the multiset's working precision.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import MultisetError, PoleError
from .precision import PrecisionContext, as_complex

SCHEMA_VERSION = 1
KINDS = ("on_line", "with_violator", "random_symmetric")


@dataclass(frozen=True)
class GrowthBound:
    epsilon: float
    c: float

    def __post_init__(self):
        if not (self.epsilon > 0 and self.c > 0):
            raise MultisetError("epsilon and c must be positive")


@dataclass(frozen=True)
class SymmetryFlags:
    conjugate_symmetric: bool
    functional_symmetric: bool


@dataclass
class ZMultiset:
    """Elements are (complex, multiplicity) pairs; 2 sigma - a may not occur."""

    elements: list
    sigma: float = 0.5
    a: float = 0.0
    ctx: PrecisionContext = field(default_factory=PrecisionContext)
    flags: Optional[SymmetryFlags] = None

    def __post_init__(self):
        m = self.ctx.mp
        if float(self.a) == float(self.sigma):
            raise MultisetError("a must differ from sigma")
        self.sigma = m.mpf(self.sigma)
        self.a = m.mpf(self.a)
        merged: list = []
        for z, mult in self.elements:
            mult = int(mult)
            if mult < 1:
                raise MultisetError(f"multiplicity must be positive, got {mult}")
            merged.append((as_complex(z, m), mult))
        self.elements = merged
        pole = 2 * self.sigma - self.a
        tol = m.ldexp(1, -self.ctx.precision_bits // 2)
        for z, _ in self.elements:
            if abs(z - pole) <= tol:
                raise PoleError(f"condition (i) fails: 2*sigma - a = {m.nstr(pole, 10)} is an element")
        self.flags = check_symmetries(self)

    def __len__(self) -> int:
        return sum(k for _, k in self.elements)

    def bases(self) -> list:
        return [((z - self.a) / (z + self.a - 2 * self.sigma), k) for z, k in self.elements]

    def _numpy_bases(self):
        s = np.array([complex(b) for b, _ in self.bases()], dtype=np.complex128)
        w = np.array([k for _, k in self.elements], dtype=np.float64)
        return s, w

    def require_li_conditions(self) -> None:
        """The extra hypotheses of the generalized Li criterion: a not an element, rho -> 2 sigma - rho closure."""
        m = self.ctx.mp
        tol = m.ldexp(1, -self.ctx.precision_bits // 2)
        if any(abs(z - self.a) <= tol for z, _ in self.elements):
            raise PoleError(f"a = {m.nstr(self.a, 10)} is an element")
        if not self.flags.functional_symmetric:
            raise MultisetError("multiset is not closed under rho -> 2 sigma - rho")


@dataclass(frozen=True)
class ConditionII:
    bl: object
    li_companion: object


def condition_ii_sum(ms: ZMultiset) -> ConditionII:
    """sum (1+|Re rho|)/(1+|rho+a-2 sigma|^2) and its companion with |rho - a|^2."""
    m = ms.ctx.mp
    bl = m.mpf(0)
    li = m.mpf(0)
    for z, k in ms.elements:
        num = 1 + abs(z.real)
        bl += k * num / (1 + abs(z + ms.a - 2 * ms.sigma) ** 2)
        li += k * num / (1 + abs(z - ms.a) ** 2)
    return ConditionII(bl, li)


def bl_complex_sum(ms: ZMultiset, n: int):
    if n < 1:
        raise MultisetError("n must be >= 1")
    m = ms.ctx.mp
    total = m.mpc(0)
    for s, k in ms.bases():
        total += k * (1 - s**n)
    return total


def bl_real_sum(ms: ZMultiset, n: int):
    """sum mult * Re(1 - s^n).

    For a conjugate-symmetric multiset the imaginary part of the complex sum is
    checked against the rounding level and a MultisetError raised if it is not
    negligible.
    """
    m = ms.ctx.mp
    total = bl_complex_sum(ms, n)
    if ms.flags.conjugate_symmetric:
        scale = sum(k * (1 + abs(s) ** n) for s, k in ms.bases())
        if abs(total.imag) > scale * m.ldexp(1, 16 - ms.ctx.precision_bits) * n:
            raise MultisetError(f"imaginary part {m.nstr(total.imag, 5)} of a conjugate-symmetric sum is not negligible")
    return total.real


def _float_sums(ms: ZMultiset, n_max: int, chunk: int = 512):
    """Yield (n, sums, scale) blocks of Re sum (1 - s^n) in double precision."""
    s, w = ms._numpy_bases()
    logs = np.log(s) if len(s) else s
    for start in range(1, n_max + 1, chunk):
        ns = np.arange(start, min(start + chunk, n_max + 1))
        if len(s) == 0:
            yield ns, np.zeros(len(ns)), np.zeros(len(ns))
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            powers = np.exp(np.outer(ns, logs))
            sums = (w * (1 - powers.real)).sum(axis=1)
            scale = (w * (1 + np.abs(powers))).sum(axis=1)
        yield ns, sums, scale


def _margin(scale, n):
    return scale * 1e-12 * (1 + n)


def find_negativity_witness(ms: ZMultiset, n_max: int) -> Optional[int]:
    """Smallest n <= n_max with bl_real_sum < 0, or None."""
    if n_max < 1:
        raise MultisetError("n_max must be >= 1")
    for ns, sums, scale in _float_sums(ms, n_max):
        for n, v, sc in zip(ns, sums, scale):
            if not np.isfinite(v) or v < _margin(sc, n):
                if bl_real_sum(ms, int(n)) < 0:
                    return int(n)
    return None


@dataclass(frozen=True)
class GrowthVerdict:
    epsilon: float
    c: float
    n_max: int
    first_violation: Optional[int]

    @property
    def passed(self) -> bool:
        return self.first_violation is None


def check_growth_bound(ms: ZMultiset, gb: GrowthBound, n_max: int) -> GrowthVerdict:
    """Checks bl_real_sum(n) >= -c e^(eps n) for n <= n_max; reports the first violation."""
    if n_max < 1:
        raise MultisetError("n_max must be >= 1")
    m = ms.ctx.mp
    for ns, sums, scale in _float_sums(ms, n_max):
        bound = -gb.c * np.exp(gb.epsilon * ns.astype(np.float64))
        for n, v, sc, b in zip(ns, sums, scale, bound):
            if not np.isfinite(v) or v < b + _margin(sc, n):
                exact = bl_real_sum(ms, int(n))
                if exact < -m.mpf(gb.c) * m.exp(m.mpf(gb.epsilon) * int(n)):
                    return GrowthVerdict(gb.epsilon, gb.c, n_max, int(n))
    return GrowthVerdict(gb.epsilon, gb.c, n_max, None)


_BUCKET = 1e-6


def _key(z):
    return (round(float(z.real) / _BUCKET), round(float(z.imag) / _BUCKET))


def _closed_under(elements: list, image, tol) -> bool:
    buckets: dict = {}
    for z, k in elements:
        buckets.setdefault(_key(z), []).append((z, k))

    def weight(w):
        kx, ky = _key(w)
        return sum(
            k
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
            for z, k in buckets.get((kx + dx, ky + dy), ())
            if abs(z - w) <= tol
        )

    # multiplicity-aware: the image of each point must carry the same total weight
    return all(weight(image(z)) == weight(z) for z, _ in elements)


def check_symmetries(ms: ZMultiset) -> SymmetryFlags:
    """Closure under conjugation and under rho -> 2 sigma - rho, with multiplicities."""
    m = ms.ctx.mp
    tol = m.ldexp(1, -ms.ctx.precision_bits // 2)
    conj = _closed_under(ms.elements, m.conj, tol)
    func = _closed_under(ms.elements, lambda z: 2 * ms.sigma - z, tol)
    return SymmetryFlags(conj, func)


def _heavy_tail(rng: random.Random, scale: float, alpha: float) -> float:
    # Pareto ordinates: sum of 1/T^2 stays moderate while large T do occur
    return scale * (1.0 - rng.random()) ** (-1.0 / alpha)


def gen_multiset(
    kind: str,
    seed: int,
    count: int,
    sigma: float = 0.5,
    a: float = 0.0,
    ctx: PrecisionContext | None = None,
    offset: float = 0.3,
    width: float = 0.4,
    scale: float = 2.0,
    alpha: float = 1.5,
) -> ZMultiset:
    """Deterministic synthetic multisets of ``count`` conjugate pairs.

    on_line: sigma +- iT.  with_violator: on_line plus one quadruple
    sigma +- offset +- iT0 with T0 in [1, 3].  random_symmetric: conjugate pairs
    with real parts in [sigma - width, sigma], or in [sigma, sigma + width]
    when a > sigma, so every term has |s| <= 1.
    """
    if kind not in KINDS:
        raise MultisetError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if count < 1:
        raise MultisetError("count must be >= 1")
    ctx = ctx or PrecisionContext()
    rng = random.Random(f"{kind}:{seed}")
    elements = []
    side = -1.0 if a < sigma else 1.0
    for _ in range(count):
        t = _heavy_tail(rng, scale, alpha)
        x = sigma
        if kind == "random_symmetric":
            x = sigma + side * width * rng.random()
        elements.append((complex(x, t), 1))
        elements.append((complex(x, -t), 1))
    if kind == "with_violator":
        t0 = 1.0 + 2.0 * rng.random()
        for dx in (offset, -offset):
            for dy in (t0, -t0):
                elements.append((complex(sigma + dx, dy), 1))
    return ZMultiset(_round(elements), sigma, a, ctx)


def _round(elements):
    # dyadic rationals: conjugates and reflections are then exact in any precision
    return [(complex(round(z.real * 2**40) / 2**40, round(z.imag * 2**40) / 2**40), k) for z, k in elements]


# ------------------------------------------------------------------ file format

def to_json(ms: ZMultiset) -> dict:
    m = ms.ctx.mp
    digits = int(ms.ctx.precision_bits * 0.30103) + 3  # enough to round-trip exactly
    return {
        "schema_version": SCHEMA_VERSION,
        "sigma": m.nstr(ms.sigma, digits),
        "a": m.nstr(ms.a, digits),
        "precision_bits": ms.ctx.precision_bits,
        "elements": [
            {"re": m.nstr(z.real, digits), "im": m.nstr(z.imag, digits), "mult": k} for z, k in ms.elements
        ],
    }


def from_json(data: dict, ctx: PrecisionContext | None = None) -> ZMultiset:
    try:
        ctx = ctx or PrecisionContext(int(data.get("precision_bits", 128)))
        m = ctx.mp
        elements = [(m.mpc(m.mpf(str(e["re"])), m.mpf(str(e.get("im", 0)))), int(e.get("mult", 1))) for e in data["elements"]]
        sigma = m.mpf(str(data.get("sigma", "0.5")))
        a = m.mpf(str(data["a"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MultisetError(f"malformed multiset description: {exc}") from None
    return ZMultiset(elements, sigma, a, ctx)


def load(path: str | Path, ctx: PrecisionContext | None = None) -> ZMultiset:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MultisetError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, list):
        raise MultisetError(f"{path}: expected an object with 'elements', 'sigma' and 'a'")
    return from_json(data, ctx)


def save(ms: ZMultiset, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_json(ms), indent=1) + "\n")
