"""Tables of nontrivial-zero ordinates: ingestion, validation, pairing, density.

Tables are plain text, one decimal ordinate T_k per line (the zero being
1/2 + i T_k), '#' comment lines allowed -- the layout of the public Odlyzko
tables.  A sidecar ``<path>.mult`` may raise multiplicities; each of its lines
is ``index multiplicity`` with ``index`` the 1-based position of the zero in
the table (comment lines are not counted).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterator, Sequence

from .errors import CatalogError, DomainError, EmptyCatalogError, OrderingError, ParseError
from .precision import PrecisionContext, mp_context, xi_with_error, zeta_with_error


@dataclass(frozen=True)
class DensityEstimate:
    T: float
    count_estimate: float


@dataclass(frozen=True)
class ZeroCatalog:
    """Ascending zero ordinates kept as the exact decimal strings they were read from."""

    ordinates: tuple[str, ...]
    multiplicities: tuple[int, ...] = ()
    source_label: str = ""
    _parsed: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.multiplicities:
            object.__setattr__(self, "multiplicities", (1,) * len(self.ordinates))
        if len(self.multiplicities) != len(self.ordinates):
            raise CatalogError("multiplicities and ordinates differ in length")
        prev = None
        for i, text in enumerate(self.ordinates, start=1):
            d = _decimal(text, i)
            if d <= 0:
                raise CatalogError("ordinate must be positive", i, text)
            if prev is not None and d <= prev:
                raise OrderingError("ordinates must be strictly ascending", i, text)
            prev = d
        if any(m < 1 for m in self.multiplicities):
            raise CatalogError("multiplicities must be positive integers")

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def t_max(self) -> float:
        return float(self.ordinates[-1]) if self.ordinates else 0.0

    @property
    def zero_count(self) -> int:
        """Zeros in the upper half plane, counted with multiplicity."""
        return sum(self.multiplicities)

    @property
    def ordinate_uncertainty(self) -> float:
        """One unit in the last printed decimal of the coarsest entry.

        Half a unit covers rounding alone; the other half absorbs the error of
        the computation that produced the table.
        """
        decimals = min((len(t.split(".")[1]) if "." in t else 0) for t in self.ordinates) if self.ordinates else 0
        return 10.0 ** (-decimals)

    def values(self, bits: int) -> tuple:
        """Ordinates parsed as mpf at ``bits`` of precision (cached)."""
        cached = self._parsed.get(bits)
        if cached is None:
            m = mp_context(bits)
            cached = tuple(m.mpf(t) for t in self.ordinates)
            self._parsed[bits] = cached
        return cached

    def upto(self, t_cutoff: float | None) -> int:
        """Number of table entries with T <= t_cutoff."""
        if t_cutoff is None:
            return len(self.ordinates)
        if t_cutoff > self.t_max * (1 + 1e-15):
            raise DomainError(f"t_cutoff {t_cutoff} exceeds the catalog range (t_max = {self.t_max})")
        lo, hi = 0, len(self.ordinates)
        while lo < hi:
            mid = (lo + hi) // 2
            if float(self.ordinates[mid]) <= t_cutoff:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def truncated(self, t_cutoff: float) -> "ZeroCatalog":
        k = self.upto(t_cutoff)
        return ZeroCatalog(self.ordinates[:k], self.multiplicities[:k], self.source_label)

    def serialize(self, path: str | Path) -> None:
        """Write the table (and a ``.mult`` sidecar when needed) in the ingest format."""
        path = Path(path)
        with path.open("w") as fh:
            if self.source_label:
                fh.write(f"# source: {self.source_label}\n")
            for t in self.ordinates:
                fh.write(t + "\n")
        sidecar = Path(str(path) + ".mult")
        extra = [(i, m) for i, m in enumerate(self.multiplicities, start=1) if m != 1]
        if extra:
            sidecar.write_text("".join(f"{i} {m}\n" for i, m in extra))
        elif sidecar.exists():
            sidecar.unlink()


def _decimal(text: str, line: int) -> Decimal:
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise ParseError("not a decimal number", line, text) from None
    if not d.is_finite():
        raise ParseError("not a finite number", line, text)
    return d


def ingest(path: str | Path, source_label: str | None = None) -> ZeroCatalog:
    """Read and validate a zero table; errors carry the offending line number."""
    path = Path(path)
    ordinates: list[str] = []
    prev: Decimal | None = None
    with path.open() as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            d = _decimal(text, lineno)
            if d <= 0:
                raise CatalogError("ordinate must be positive", lineno, text)
            if prev is not None and d <= prev:
                raise OrderingError(f"ordinates must be strictly ascending (previous {prev})", lineno, text)
            prev = d
            ordinates.append(text)
    if not ordinates:
        raise EmptyCatalogError(f"{path}: no ordinates found")
    mult = [1] * len(ordinates)
    sidecar = Path(str(path) + ".mult")
    if sidecar.exists():
        for lineno, raw in enumerate(sidecar.read_text().splitlines(), start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            try:
                idx, m = int(parts[0]), int(parts[1])
            except (ValueError, IndexError):
                raise ParseError("expected 'index multiplicity'", lineno, text) from None
            if not 1 <= idx <= len(ordinates) or m < 1:
                raise CatalogError(f"{sidecar.name}: bad index or multiplicity", lineno, text)
            mult[idx - 1] = m
    return ZeroCatalog(tuple(ordinates), tuple(mult), source_label if source_label is not None else path.name)


def paired_zeros(cat: ZeroCatalog, ctx: PrecisionContext | None = None) -> Iterator[tuple]:
    """Yield (rho, conj(rho)) for rho = 1/2 + i T_k in ascending order, once per multiplicity."""
    ctx = ctx or PrecisionContext()
    m = ctx.mp
    half = m.mpf(1) / 2
    for t, mult in zip(cat.values(ctx.precision_bits), cat.multiplicities):
        rho = m.mpc(half, t)
        for _ in range(mult):
            yield rho, m.conj(rho)


def count_below(T: float) -> DensityEstimate:
    """Riemann-von Mangoldt main term (T/2pi) ln(T/2pi) - T/2pi + 7/8."""
    T = float(T)
    if not T > 2 * math.pi:
        raise DomainError(f"count_below needs T > 2*pi, got {T}")
    x = T / (2 * math.pi)
    return DensityEstimate(T, x * math.log(x) - x + 7.0 / 8.0)


def density(T: float) -> float:
    """d/dT of the main term: ln(T/2pi) / (2 pi)."""
    return math.log(T / (2 * math.pi)) / (2 * math.pi)


@dataclass(frozen=True)
class SpotCheck:
    index: int
    ordinate: str
    xi_abs: float
    zeta_abs: float

    @property
    def ok(self) -> bool:
        return self.xi_abs < 1e-4 and self.zeta_abs < 1e-4


def spot_check(
    cat: ZeroCatalog,
    ctx: PrecisionContext | None = None,
    samples: int = 10,
    seed: int = 0,
    indices: Sequence[int] | None = None,
) -> list[SpotCheck]:
    """Evaluate |xi| and |zeta| at 1/2 + i T_k for sampled table entries.

    |xi| on the critical line decays like exp(-pi T / 4), so the zeta value is
    the informative one at larger heights; both are reported.
    """
    ctx = ctx or PrecisionContext(128, 1e-20)
    if indices is None:
        rng = random.Random(seed)
        pool = range(len(cat))
        indices = sorted(rng.sample(pool, min(samples, len(cat))))
    out = []
    m = ctx.mp
    for i in indices:
        z = m.mpc(m.mpf(1) / 2, m.mpf(cat.ordinates[i]))
        xv = xi_with_error(z, ctx).value
        zv = zeta_with_error(z, ctx).value
        out.append(SpotCheck(i + 1, cat.ordinates[i], float(abs(xv)), float(abs(zv))))
    return out
