"""Small statistics shared by the individual and group calculi."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy import stats

from .errors import DegenerateFamily


def ols_slope(values: Sequence[Fraction], start: int = 0) -> Fraction:
    """Exact least-squares slope of ``values`` against ticks ``start, start+1, ...``.

    A single point has slope 0.
    """
    n = len(values)
    if n < 2:
        return Fraction(0)
    xs = range(start, start + n)
    x_mean = Fraction(sum(xs), n)
    y_mean = Fraction(sum(values, Fraction(0))) / n
    sxy = sum(((x - x_mean) * (y - y_mean) for x, y in zip(xs, values)), Fraction(0))
    sxx = sum(((x - x_mean) ** 2 for x in xs), Fraction(0))
    return sxy / sxx


def shaped(values: Sequence[Fraction], start: int, weight: Fraction, aggregate: Fraction) -> Fraction:
    """``aggregate`` plus ``weight`` times the series slope."""
    if weight == 0:
        return aggregate
    return aggregate + weight * ols_slope(values, start)


def spearman(xs: Sequence, ys: Sequence) -> float:
    rho = stats.spearmanr([float(x) for x in xs], [float(y) for y in ys]).correlation
    return float(rho)


@dataclass(frozen=True)
class CorrelationReport:
    size: int
    equal_slope_pairs: int
    ordering_preserved: bool
    rho: float

    @property
    def positive(self) -> bool:
        return self.ordering_preserved and self.rho > 0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def correlation_report(aggregates: Sequence[Fraction], slopes: Sequence[Fraction],
                       welfares: Sequence[Fraction]) -> CorrelationReport:
    """Compare aggregate well-being with welfare across a family of lives.

    Among lives with identical slopes the welfare ordering must reproduce the
    aggregate ordering exactly; across the whole family the Spearman rank
    correlation is reported.
    """
    n = len(aggregates)
    if n < 3 or len(set(aggregates)) == 1:
        raise DegenerateFamily(f"family of {n} lives without variation in aggregate well-being")
    pairs, preserved = 0, True
    for i in range(n):
        for j in range(i + 1, n):
            if slopes[i] == slopes[j]:
                pairs += 1
                if _sign(aggregates[i] - aggregates[j]) != _sign(welfares[i] - welfares[j]):
                    preserved = False
    return CorrelationReport(n, pairs, preserved, spearman(aggregates, welfares))
