"""Exact confusion-matrix metrics and certified MCC/FM convergence analysis.

Metrics whose denominator vanishes return ``None`` ("undefined"); no
zero-fill convention is applied here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Protocol, Union

from mccfm.exact import (
    Surd,
    rational_to_decimal,
    surd_compare,
    surd_enclosure,
    surd_from_ratio,
    surd_to_decimal,
)

#: guard digits added to the requested precision inside ``gap_bound``
GUARD_DIGITS = 10


class _NotComputable:
    """Marker for an MCC that cannot be formed because TN was never counted."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NOT_COMPUTABLE"

    def __reduce__(self):
        return (_NotComputable, ())


NOT_COMPUTABLE = _NotComputable()


def _check_count(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be nonnegative, got {value}")


@dataclass(frozen=True)
class PartialCounts:
    """TP/FP/FN counts with TN unmeasured (open-world setting)."""

    tp: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn"):
            _check_count(name, getattr(self, name))

    def with_tn(self, tn: int) -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp, self.fp, self.fn, tn)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            _check_count(name, getattr(self, name))

    @property
    def partial(self) -> PartialCounts:
        return PartialCounts(self.tp, self.fp, self.fn)


class _Counts(Protocol):
    tp: int
    fp: int
    fn: int


MccValue = Union[Surd, None, _NotComputable]


@dataclass(frozen=True)
class MetricReport:
    ppv: Fraction | None
    tpr: Fraction | None
    f1: Fraction | None
    fm: Surd | None
    mcc: MccValue


def ppv(c: _Counts) -> Fraction | None:
    """Precision, ``tp / (tp + fp)``."""
    d = c.tp + c.fp
    return Fraction(c.tp, d) if d else None


def tpr(c: _Counts) -> Fraction | None:
    """Recall, ``tp / (tp + fn)``."""
    d = c.tp + c.fn
    return Fraction(c.tp, d) if d else None


def f1(c: _Counts) -> Fraction | None:
    d = 2 * c.tp + c.fp + c.fn
    return Fraction(2 * c.tp, d) if d else None


def f1_harmonic(c: _Counts) -> Fraction | None:
    """F1 as ``2*PPV*TPR / (PPV + TPR)``; undefined unless both rates are defined and not both zero."""
    p, r = ppv(c), tpr(c)
    if p is None or r is None or p + r == 0:
        return None
    return 2 * p * r / (p + r)


def fm(c: _Counts) -> Surd | None:
    """Fowlkes-Mallows index as the geometric mean ``sqrt(PPV * TPR)``."""
    p, r = ppv(c), tpr(c)
    if p is None or r is None:
        return None
    return Surd.sqrt_of(p * r)


def mcc(c: ConfusionMatrix) -> Surd | None:
    marginals = (c.tp + c.fp) * (c.tp + c.fn) * (c.tn + c.fp) * (c.tn + c.fn)
    if marginals == 0:
        return None
    return surd_from_ratio(c.tp * c.tn - c.fp * c.fn, marginals)


def mcc_limit(c: _Counts) -> Surd | None:
    """Limit of the MCC as TN grows without bound: ``tp / sqrt((tp+fp)(tp+fn))``.

    Deliberately computed from its own closed form instead of calling
    :func:`fm`, so that agreement of the two is a real check.
    """
    d = (c.tp + c.fp) * (c.tp + c.fn)
    if d == 0:
        return None
    return surd_from_ratio(c.tp, d)


def metric_report(c: ConfusionMatrix | PartialCounts) -> MetricReport:
    if isinstance(c, ConfusionMatrix):
        m: MccValue = mcc(c)
    else:
        m = NOT_COMPUTABLE
    return MetricReport(ppv=ppv(c), tpr=tpr(c), f1=f1(c), fm=fm(c), mcc=m)


class UndefinedMetricError(ValueError):
    pass


def _mcc_fm(c: _Counts, tn: int) -> tuple[Surd, Surd]:
    partial = PartialCounts(c.tp, c.fp, c.fn)
    f = fm(partial)
    if f is None:
        raise UndefinedMetricError(f"FM undefined for {partial}")
    m = mcc(partial.with_tn(tn))
    if m is None:
        raise UndefinedMetricError(f"MCC undefined for {partial} with tn={tn}")
    return m, f


def _gap_interval(m: Surd, f: Surd, places: int) -> tuple[Fraction, Fraction]:
    if surd_compare(m, f) == "equal":
        return Fraction(0), Fraction(0)
    m_lo, m_hi = surd_enclosure(m, places)
    f_lo, f_hi = surd_enclosure(f, places)
    lo, hi = m_lo - f_hi, m_hi - f_lo
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def gap_bound(c: _Counts, tn: int, digits: int) -> tuple[Fraction, Fraction]:
    """Rational interval ``[lo, hi]`` containing ``|MCC(tp,fp,fn,tn) - FM(tp,fp,fn)|``.

    The width is below ``10**-digits``: each surd is enclosed by directed
    integer square roots at ``digits + GUARD_DIGITS`` places.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    m, f = _mcc_fm(c, tn)
    return _gap_interval(m, f, digits + GUARD_DIGITS)


def gap_at_most(c: _Counts, tn: int, eps: Fraction) -> bool:
    """Decide exactly whether ``|MCC - FM| <= eps``.

    If the gap is rational the enclosure collapses to a point.  Otherwise the
    gap is irrational and cannot equal ``eps``, so refining the enclosure
    eventually separates the two.
    """
    m, f = _mcc_fm(c, tn)
    places = 20
    while True:
        lo, hi = _gap_interval(m, f, places)
        if hi <= eps:
            return True
        if lo > eps:
            return False
        places *= 2


def tn_for_tolerance(c: _Counts, eps: Fraction | int) -> int:
    """Smallest ``tn`` (doubling then bisection from 1) with gap <= eps at tn and 2*tn."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    partial = PartialCounts(c.tp, c.fp, c.fn)
    if fm(partial) is None:
        raise UndefinedMetricError(f"FM undefined for {partial}")

    def ok(tn: int) -> bool:
        if mcc(partial.with_tn(tn)) is None:
            return False
        return gap_at_most(partial, tn, eps) and gap_at_most(partial, 2 * tn, eps)

    hi = 1
    while not ok(hi):
        hi *= 2
    if hi == 1:
        return 1
    lo = hi // 2  # known to fail
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class ConvergenceRow:
    tn: int
    mcc: str
    fm: str
    gap_upper_bound: str


UNDEFINED = "undefined"


def convergence_table(c: _Counts, tn_values: Iterable[int], digits: int) -> list[ConvergenceRow]:
    """One row per requested ``tn``: MCC, FM and an upper bound on their gap.

    MCC and FM decimals are truncated; the gap bound is rounded up so the
    printed figure stays an upper bound.
    """
    partial = PartialCounts(c.tp, c.fp, c.fn)
    f = fm(partial)
    if f is None:
        raise UndefinedMetricError(f"FM undefined for {partial}")
    fm_text = surd_to_decimal(f, digits)
    rows = []
    for tn in tn_values:
        m = mcc(partial.with_tn(tn))
        if m is None:
            rows.append(ConvergenceRow(tn, UNDEFINED, fm_text, UNDEFINED))
            continue
        _, hi = _gap_interval(m, f, digits + GUARD_DIGITS)
        rows.append(
            ConvergenceRow(tn, surd_to_decimal(m, digits), fm_text, rational_to_decimal(hi, digits, "up"))
        )
    return rows
