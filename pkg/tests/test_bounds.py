from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.core.errors import OutOfDomain
from src.fairopt import ratio_curve, theoretical_ratios


@pytest.mark.parametrize(
    ("tag", "sw", "util"),
    [
        ("drf", 1.75, 4.0),
        ("f1", 1.25, 4 / 3),
        ("gf1", 1.25, 4 / 3),
        ("f2", 3.5 / 2.75, 1.6),
    ],
)
def test_two_resource_guarantees(tag: str, sw: float, util: float) -> None:
    bounds = theoretical_ratios(tag, 0.25)
    assert bounds.sw == pytest.approx(sw)
    assert bounds.util == pytest.approx(util)
    assert not bounds.util_unbounded


def test_f2star_guarantee_depends_on_n() -> None:
    bounds = theoretical_ratios("f2star", 0.25, n=10)
    assert bounds.sw == pytest.approx(3.5 / 2.65)
    assert bounds.util == pytest.approx(2 / 1.15)
    assert theoretical_ratios("f2star", 0.25).sw == pytest.approx(theoretical_ratios("f2", 0.25).sw)


def test_hybrid_guarantee_follows_its_branch() -> None:
    assert theoretical_ratios("hybrid-sw", 0.2, n=10) == theoretical_ratios("f1", 0.2, n=10)
    assert theoretical_ratios("hybrid-sw", 0.45, n=10) == theoretical_ratios("f2star", 0.45, n=10)
    assert theoretical_ratios("hybrid-util", 0.3, n=10) == theoretical_ratios("f1", 0.3, n=10)
    with pytest.raises(OutOfDomain):
        theoretical_ratios("hybrid-sw", 0.2)


def test_many_resource_guarantees_take_the_larger_term() -> None:
    drf = theoretical_ratios("drf", 0.3, beta=0.4, m=3)
    assert drf.sw == pytest.approx(2.88 * 0.82)
    assert drf.util_unbounded

    gf1 = theoretical_ratios("gf1", 0.3, beta=0.4, m=3)
    assert gf1.sw == pytest.approx(3 - 0.12 - 0.7)
    assert gf1.util is None

    wide = theoretical_ratios("gf1", 0.9, beta=0.9, m=5)
    second = (5 - 0.81) / (1 + (0.1 / 0.9) * 0.9)
    assert wide.sw == pytest.approx(max(5 - 0.81 - 0.1, second))


@pytest.mark.parametrize(
    ("tag", "alpha", "beta", "m"),
    [
        ("drf", 0.0, None, 2),
        ("drf", 0.6, None, 2),
        ("maxmin", 0.25, None, 2),
        ("drf", 0.3, None, 3),
        ("drf", 0.3, 1.0, 3),
        ("f2", 0.3, 0.4, 3),
        ("drf", 0.3, None, 1),
    ],
)
def test_out_of_domain_parameters(tag: str, alpha: float, beta: float | None, m: int) -> None:
    with pytest.raises(OutOfDomain):
        theoretical_ratios(tag, alpha, beta=beta, m=m)


def test_ratio_curve_rows() -> None:
    rows = ratio_curve(["drf", "f2star"], [0.1, 0.5], n=20)
    assert [row["alpha"] for row in rows] == [0.1, 0.5]
    assert rows[0]["drf_sw_bound"] == pytest.approx(1.9)
    assert rows[1]["drf_util_bound"] == pytest.approx(2.0)
    assert rows[1]["f2star_sw_bound"] == pytest.approx(3.0 / (2.5 - 0.05))
    assert all(math.isfinite(float(row["f2star_util_bound"])) for row in rows)
