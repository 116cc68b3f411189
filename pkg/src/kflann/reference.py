"""Published cluster counts and error rates used as side-by-side references.

Vigilance values are stored as exact ratios of matched to total features; the
published tables print them rounded to four decimals, and some of those
roundings (e.g. 0.6667 for 2/3) would reject a pattern that matches exactly
2 of 3 features.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class RefRow:
    dataset: str
    vigilance: str  # exact ratio, parseable by parse_vigilance
    clusters: int
    error_rate_percent: float

    @property
    def rho(self) -> float:
        return float(Fraction(self.vigilance))

    @property
    def printed_vigilance(self) -> str:
        return f"{self.rho:.4f}"


@dataclass(frozen=True)
class RefTable:
    id: int
    normalization: str
    tolerance_method: str
    rows: tuple
    tune: bool = False
    title: str = ""


def _rows(*items):
    return tuple(RefRow(*it) for it in items)


TABLES = {
    3: RefTable(3, "none", "maxmin", _rows(
        ("iris", "1", 3, 7.3333),
        ("new_thyroid", "1", 4, 20.4651),
        ("new_thyroid", "4/5", 2, 24.6512),
        ("ionosphere", "18/34", 2, 29.6296),
        ("pima", "5/8", 2, 33.4635),
        ("wine", "10/13", 3, 35.3933),
        ("glass", "8/9", 7, 54.6729),
        ("haberman", "1/3", 6, 70.2614),
        ("segmentation", "17/19", 4, 79.0476),
        ("segmentation", "18/19", 8, 64.4286),
    ), title="non-normalized data, max-min tolerance"),
    4: RefTable(4, "none", "stddev", _rows(
        ("iris", "1/2", 3, 10.0),
        ("new_thyroid", "2/5", 2, 30.2326),
        ("ionosphere", "9/34", 2, 31.3390),
        ("pima", "1/4", 2, 34.2448),
        ("wine", "4/13", 3, 38.2022),
        ("new_thyroid", "3/5", 4, 45.5814),
        ("haberman", "1/3", 2, 48.6928),
        ("segmentation", "13/19", 7, 64.2857),
        ("segmentation", "14/19", 7, 64.7619),
        ("glass", "4/9", 7, 67.2897),
    ), title="non-normalized data, standard-deviation tolerance"),
    5: RefTable(5, "zscore", "maxmin", _rows(
        ("iris", "3/4", 3, 5.3333),
        ("new_thyroid", "4/5", 4, 16.7442),
        ("haberman", "2/3", 2, 25.4092),
        ("wine", "12/13", 3, 32.5843),
        ("ionosphere", "28/34", 2, 42.4501),
        ("pima", "3/4", 2, 48.4375),
        ("glass", "8/9", 7, 52.8037),
        ("segmentation", "9/10", 6, 80.25),
        ("segmentation", "1", 10, 82.30),
    ), title="z-score normalized data, max-min tolerance"),
    6: RefTable(6, "zscore", "stddev", _rows(
        ("iris", "1/2", 3, 5.3333),
        ("new_thyroid", "1/5", 3, 13.4884),
        ("ionosphere", "11/34", 2, 40.1709),
        ("wine", "6/13", 3, 43.2584),
        ("pima", "1/8", 2, 48.3073),
        ("haberman", "1/3", 2, 53.2680),
        ("glass", "4/9", 7, 56.0748),
        ("segmentation", "13/19", 6, 87.6190),
    ), title="z-score normalized data, standard-deviation tolerance"),
    7: RefTable(7, "minmax", "maxmin", _rows(
        ("pima", "5/8", 2, 0.0),
        ("iris", "1", 3, 10.0),
        ("wine", "10/13", 3, 14.6067),
        ("new_thyroid", "4/5", 2, 21.8605),
        ("new_thyroid", "1", 4, 12.5581),
        ("ionosphere", "18/34", 2, 29.6296),
        ("glass", "8/9", 7, 49.5327),
        ("segmentation", "18/19", 8, 59.5238),
        ("haberman", "2/3", 3, 60.7843),
        ("haberman", "1", 6, 80.7190),
    ), title="min-max normalized data, max-min tolerance"),
    8: RefTable(8, "minmax", "stddev", _rows(
        ("pima", "1/4", 2, 0.1302),
        ("iris", "1/2", 3, 12.0),
        ("new_thyroid", "2/5", 2, 30.2326),
        ("new_thyroid", "1", 4, 12.5581),
        ("ionosphere", "9/34", 2, 31.3390),
        ("haberman", "1/3", 2, 54.5752),
        ("segmentation", "14/19", 7, 57.1429),
        ("wine", "4/13", 3, 64.6067),
        ("glass", "4/9", 7, 65.8879),
    ), title="min-max normalized data, standard-deviation tolerance"),
    9: RefTable(9, "none", "maxmin", _rows(
        ("synthetic1", "1", 2, 0.0),
        ("synthetic2", "1", 2, 1.8),
        ("synthetic3", "1", 2, 29.2),
        ("synthetic4", "1", 3, 0.0),
        ("synthetic5", "1", 3, 0.0),
        ("synthetic6", "1", 3, 54.2857),
    ), tune=True, title="synthetic data, max-min tolerance with tuning"),
}
