# engine/prob_buffer.py
"""
Piecewise-constant probability density over disjoint time intervals.

Densities are kept as multiples of the buffer `unit` so the latency engine
can work with integer weights (unit = 1/Ts) and still report exact masses.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from operator import attrgetter
from typing import Iterable, Iterator, List, Tuple, Union

Number = Union[int, Fraction]

_segment_end = attrgetter("t_e")


@dataclass(frozen=True, slots=True)
class Segment:
    t_s: Number
    t_e: Number
    p: Number
    zeta: int = 0  # worst accumulated penalty carried by this mass

    @property
    def length(self) -> Number:
        return self.t_e - self.t_s


def _coalesce(pieces: List[Segment]) -> List[Segment]:
    merged: List[Segment] = []
    for seg in pieces:
        if merged:
            last = merged[-1]
            if last.t_e == seg.t_s and last.p == seg.p and last.zeta == seg.zeta:
                merged[-1] = Segment(last.t_s, seg.t_e, last.p, last.zeta)
                continue
        merged.append(seg)
    return merged


class ProbabilityBuffer:
    """
    Sorted, disjoint segments. Overlapping adds sum their densities and keep
    the larger zeta; touching segments with equal (p, zeta) are merged.
    """

    def __init__(self, unit: Number = 1, segments: Iterable[Segment] = ()) -> None:
        self.unit = Fraction(unit)
        self._segments: List[Segment] = []
        for seg in segments:
            self.add(seg.t_s, seg.t_e, seg.p, seg.zeta)

    @classmethod
    def single(cls, t_s: Number, t_e: Number, p: Number, zeta: int = 0, unit: Number = 1) -> "ProbabilityBuffer":
        buffer = cls(unit=unit)
        if t_s < t_e:
            buffer.add(t_s, t_e, p, zeta)
        return buffer

    @property
    def segments(self) -> Tuple[Segment, ...]:
        return tuple(self._segments)

    def __len__(self) -> int:
        return len(self._segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self._segments)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProbabilityBuffer):
            return NotImplemented
        return self.unit == other.unit and self._segments == other._segments

    def __repr__(self) -> str:
        return f"ProbabilityBuffer(unit={self.unit}, segments={self._segments!r})"

    @property
    def is_empty(self) -> bool:
        return not self._segments

    def add(self, t_ss: Number, t_ee: Number, p: Number, zeta: int = 0) -> "ProbabilityBuffer":
        if t_ss >= t_ee:
            raise ValueError(f"segment start {t_ss} must lie before its end {t_ee}")
        if p <= 0:
            raise ValueError(f"segment density must be positive, got {p}")
        if zeta < 0:
            raise ValueError(f"segment penalty must be non-negative, got {zeta}")

        segs = self._segments
        lo = bisect.bisect_right(segs, t_ss, key=_segment_end)
        hi = lo
        pieces: List[Segment] = []
        cursor = t_ss
        while hi < len(segs) and segs[hi].t_s < t_ee:
            seg = segs[hi]
            if seg.t_s < t_ss:
                pieces.append(Segment(seg.t_s, t_ss, seg.p, seg.zeta))
            elif cursor < seg.t_s:
                pieces.append(Segment(cursor, seg.t_s, p, zeta))
            end = min(seg.t_e, t_ee)
            pieces.append(Segment(max(seg.t_s, t_ss), end, seg.p + p, max(seg.zeta, zeta)))
            if seg.t_e > t_ee:
                pieces.append(Segment(t_ee, seg.t_e, seg.p, seg.zeta))
            cursor = end
            hi += 1
        if cursor < t_ee:
            pieces.append(Segment(cursor, t_ee, p, zeta))

        # neighbours may now touch a piece with equal (p, zeta)
        first = lo
        if lo > 0:
            first = lo - 1
            pieces.insert(0, segs[first])
        last = hi
        if hi < len(segs):
            pieces.append(segs[hi])
            last = hi + 1
        segs[first:last] = _coalesce(pieces)
        return self

    def raw_mass(self) -> Number:
        """Sum of p * length in units of `unit`."""
        return sum((seg.p * (seg.t_e - seg.t_s) for seg in self._segments), 0)

    def total_mass(self) -> Fraction:
        return self.unit * self.raw_mass()

    def density(self, seg: Segment) -> Fraction:
        return self.unit * seg.p

    def dump(self) -> str:
        lines = []
        for seg in self._segments:
            d = self.density(seg)
            lines.append(f"{seg.t_s}\t{seg.t_e}\t{d.numerator}/{d.denominator}\t{seg.zeta}")
        return "\n".join(lines)


def total_mass(buffer: ProbabilityBuffer) -> Fraction:
    return buffer.total_mass()


def add(buffer: ProbabilityBuffer, t_ss: Number, t_ee: Number, p: Number, zeta: int = 0) -> ProbabilityBuffer:
    return buffer.add(t_ss, t_ee, p, zeta)
