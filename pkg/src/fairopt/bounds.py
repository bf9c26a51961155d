"""Closed-form fair-ratio guarantees for each mechanism."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from src.core.errors import OutOfDomain
from src.mechanisms.hybrid import sw_threshold, util_threshold


@dataclass(frozen=True)
class TheoreticalBounds:
    sw: float
    util: float | None

    @property
    def util_unbounded(self) -> bool:
        return self.util is None


def _two_resource(tag: str, alpha: float, n: int | None) -> TheoreticalBounds:
    if not 0.0 < alpha <= 0.5:
        raise OutOfDomain(f"two-resource bounds need alpha in (0, 1/2], got {alpha}")
    if tag == "drf":
        return TheoreticalBounds(sw=2.0 - alpha, util=1.0 / alpha)
    if tag in {"f1", "gf1"}:
        return TheoreticalBounds(sw=1.0 + alpha, util=1.0 / (1.0 - alpha))
    if tag == "f2":
        return TheoreticalBounds(sw=(4.0 - 2.0 * alpha) / (3.0 - alpha), util=2.0 / (1.0 + alpha))
    if tag == "f2star":
        slack = 0.0 if n is None else 1.0 / n
        return TheoreticalBounds(
            sw=(4.0 - 2.0 * alpha) / (3.0 - alpha - slack),
            util=2.0 / (1.0 + alpha - slack),
        )
    if tag in {"hybrid-sw", "hybrid-util"}:
        if n is None:
            raise OutOfDomain(f"{tag} bounds need n")
        threshold = sw_threshold(n) if tag == "hybrid-sw" else util_threshold(n)
        branch = "f1" if alpha <= threshold else "f2star"
        return _two_resource(branch, alpha, n)
    raise OutOfDomain(f"no closed-form two-resource bound for {tag!r}")


def _many_resource(tag: str, alpha: float, beta: float | None, m: int) -> TheoreticalBounds:
    if beta is None or not 0.0 < alpha < 1.0 or not 0.0 < beta < 1.0:
        raise OutOfDomain(f"m >= 3 bounds need alpha, beta in (0, 1), got alpha={alpha}, beta={beta}")
    first = m - alpha * beta - (1.0 - alpha)
    if tag == "drf":
        second = (m - alpha * beta) * (1.0 - alpha * (1.0 - beta))
    elif tag in {"gf1", "f1"}:
        second = (m - alpha * beta) / (1.0 + (1.0 - beta) / beta * alpha)
    else:
        raise OutOfDomain(f"no closed-form bound for {tag!r} with m={m}")
    return TheoreticalBounds(sw=max(first, second), util=None)


def theoretical_ratios(
    tag: str,
    alpha: float,
    beta: float | None = None,
    n: int | None = None,
    m: int = 2,
) -> TheoreticalBounds:
    key = tag.strip().lower()
    if m == 2:
        return _two_resource(key, alpha, n)
    if m >= 3:
        return _many_resource(key, alpha, beta, m)
    raise OutOfDomain(f"bounds need m >= 2, got m={m}")


def ratio_curve(
    tags: Iterable[str],
    alphas: Iterable[float],
    n: int | None = None,
) -> list[dict[str, float | str | None]]:
    """Two-resource SW and utilization guarantees over an alpha grid."""
    rows: list[dict[str, float | str | None]] = []
    tag_list = list(tags)
    for alpha in alphas:
        row: dict[str, float | str | None] = {"alpha": float(alpha)}
        for tag in tag_list:
            bounds = theoretical_ratios(tag, float(alpha), n=n)
            row[f"{tag}_sw_bound"] = bounds.sw
            row[f"{tag}_util_bound"] = bounds.util
        rows.append(row)
    return rows

