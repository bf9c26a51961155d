"""Lower-bound constructions that drive each mechanism toward its worst fair ratio."""

from __future__ import annotations

import math

import numpy as np

from src.core.errors import BadAlpha, BadParams, TooSmall
from src.core.model import Instance
from src.instances.synthetic import minor_count


def _split(n: int, alpha: float, min_minor: int, min_major: int) -> tuple[int, int]:
    if not 0.0 < alpha <= 0.5:
        raise BadAlpha(f"alpha must lie in (0, 1/2], got {alpha}")
    n_minor = minor_count(n, alpha)
    n_major = n - n_minor
    if n_minor < min_minor or n_major < min_major:
        raise TooSmall(
            f"n={n}, alpha={alpha} gives groups of {n_major} and {n_minor}; "
            f"need at least {min_major} and {min_minor}"
        )
    return n_major, n_minor


def _rows(*blocks: tuple[int, list[float]]) -> Instance:
    parts = [np.tile(np.asarray(row, dtype=float), (count, 1)) for count, row in blocks if count > 0]
    return Instance(np.vstack(parts))


def adv_drf(n: int, alpha: float) -> Instance:
    n_major, n_minor = _split(n, alpha, min_minor=2, min_major=1)
    eps = 1.0 / n
    return _rows(
        (n_major, [1.0, eps]),
        (1, [eps / 2.0, 1.0]),
        (n_minor - 1, [1.0 - eps, 1.0]),
    )


def adv_f1(n: int, alpha: float) -> Instance:
    n_major, n_minor = _split(n, alpha, min_minor=1, min_major=2)
    eps = 1.0 / n
    return _rows(
        (1, [1.0, eps]),
        (n_major - 1, [1.0, 1.0 - eps]),
        (n_minor, [eps, 1.0]),
    )


def adv_f2(n: int, alpha: float) -> Instance:
    n_major, n_minor = _split(n, alpha, min_minor=1, min_major=2)
    eps = 1.0 / n**2
    return _rows(
        (n_major, [1.0, eps]),
        (1, [1.0 / n_major, 1.0]),
        (n_minor - 1, [1.0 - eps, 1.0]),
    )


def _check_many(n: int, m: int, alpha: float, beta: float) -> int:
    if m < 3:
        raise BadParams(f"adv_thm6 needs m >= 3, got m={m}")
    if not 0.0 < alpha < 1.0 or not 0.0 < beta < 1.0:
        raise BadParams(f"alpha and beta must lie in (0, 1), got alpha={alpha}, beta={beta}")
    return minor_count(n, alpha)


def _case_one(n: int, m: int, alpha: float, beta: float) -> Instance:
    n_minor = _check_many(n, m, alpha, beta)
    n_major = n - n_minor
    second_group = n_minor - (m - 2)
    if n_major < 2 or second_group < 2:
        raise BadParams(f"n={n}, m={m}, alpha={alpha} leaves too few agents for the construction")
    eps = 1.0 / n**2
    tiny = 1.0 / n**3
    beta_prime = (n_minor * beta - tiny - (m - 2) * eps) / (second_group - 1)
    if not 0.0 < beta_prime < 1.0:
        raise BadParams(f"beta' = {beta_prime:.6g} falls outside (0, 1)")

    def row(*head: float) -> list[float]:
        values = [eps] * m
        values[: len(head)] = head
        return values

    blocks: list[tuple[int, list[float]]] = [
        (1, row(1.0, eps)),
        (n_major - 1, row(1.0, 1.0 - eps)),
        (1, row(tiny, 1.0)),
        (second_group - 1, row(beta_prime, 1.0)),
    ]
    for resource in range(2, m):
        values = [eps] * m
        values[resource] = 1.0
        blocks.append((1, values))
    return _rows(*blocks)


def _case_two(n: int, m: int, alpha: float, beta: float) -> Instance:
    n_minor = _check_many(n, m, alpha, beta)
    n_major = n - n_minor
    if n_minor % (m - 1) != 0:
        raise BadParams(f"{n_minor} minor agents do not split evenly over {m - 1} groups")
    size = n_minor // (m - 1)
    if n_major < 1 or size < 2:
        raise BadParams(f"n={n}, m={m}, alpha={alpha} leaves too few agents for the construction")
    eps = 1.0 / n
    root = math.sqrt(n)
    beta_prime = beta * size / (1.0 / root + size - 1)
    if not 0.0 < beta_prime < 1.0:
        raise BadParams(f"beta' = {beta_prime:.6g} falls outside (0, 1)")

    major = [1.0] + [eps] * (m - 1)
    blocks: list[tuple[int, list[float]]] = [(n_major, major)]
    for resource in range(1, m):
        special = [eps**2] * m
        special[0] = beta_prime / root
        special[resource] = 1.0
        regular = [eps] * m
        regular[0] = beta_prime
        regular[resource] = 1.0
        blocks.append((1, special))
        blocks.append((size - 1, regular))
    return _rows(*blocks)


def adv_thm6(n: int, m: int, alpha: float, beta: float, case: int) -> Instance:
    """Worst cases for the generalized f1 (and DRF) with m >= 3 resources."""
    if case == 1:
        return _case_one(n, m, alpha, beta)
    if case == 2:
        return _case_two(n, m, alpha, beta)
    raise BadParams(f"case must be 1 or 2, got {case}")
