from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.core.errors import EmptyInstance, NonPositiveDemand, ParseError, ShapeMismatch
from src.core.instance_io import format_instance_csv, parse_instance_text, read_instance_csv, write_instance_csv
from src.core.model import (
    Allocation,
    Instance,
    envy_coefficients,
    exhausted_resources,
    largest_group,
    normalize,
    orient_two_resource,
    partition,
    social_welfare,
    utilities,
    utility,
    utilization,
)

EXAMPLE_1 = [[1.0, 0.4], [1.0, 0.2], [0.2, 1.0]]

raw_matrices = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.integers(min_value=2, max_value=4).flatmap(
        lambda m: st.lists(
            st.lists(st.floats(min_value=1e-3, max_value=1e3), min_size=m, max_size=m),
            min_size=n,
            max_size=n,
        )
    )
)


def test_normalize_divides_each_row_by_its_maximum() -> None:
    instance = normalize([[1 / 9, 2 / 9], [5, 5]])
    assert instance.demands[0] == pytest.approx([0.5, 1.0])
    assert instance.demands[1].tolist() == [1.0, 1.0]

    three = normalize([[3, 1, 2]])
    assert three.demands[0] == pytest.approx([1.0, 1 / 3, 2 / 3])
    assert three.demands.max() == 1.0


def test_normalize_rejects_bad_input() -> None:
    with pytest.raises(NonPositiveDemand):
        normalize([[1.0, 0.0]])
    with pytest.raises(NonPositiveDemand):
        normalize([[1.0, -2.0]])
    with pytest.raises(EmptyInstance):
        normalize([[1.0]])
    with pytest.raises(EmptyInstance):
        normalize(np.zeros((0, 2)))


def test_instance_requires_normalized_rows_and_is_read_only() -> None:
    with pytest.raises(NonPositiveDemand):
        Instance(np.array([[0.5, 0.5]]))
    instance = Instance(np.array(EXAMPLE_1))
    with pytest.raises(ValueError):
        instance.demands[0, 0] = 0.3
    assert instance.n == 3 and instance.m == 2


def test_utility_examples() -> None:
    assert utility([5 / 11, 2 / 11], [1, 2 / 5]) == pytest.approx(5 / 11, abs=1e-12)
    assert utility([0.0, 0.0], [1.0, 0.3]) == 0.0
    assert utility([0.3, 0.9], [1.0, 1.0]) == pytest.approx(0.3)


def test_partition_example_one_and_ties() -> None:
    groups = partition(Instance(np.array(EXAMPLE_1)))
    assert groups.groups == ((0, 1), (2,))
    assert groups.alpha == pytest.approx(1 / 3)
    assert groups.beta is None

    ties = partition(Instance(np.ones((4, 2))))
    assert ties.sizes() == (4, 0)
    assert ties.alpha == 0.0
    assert ties.degenerate


def test_partition_three_resources_reports_beta() -> None:
    instance = Instance(np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]]))
    groups = partition(instance)
    assert groups.alpha == pytest.approx(2 / 3)
    assert groups.beta == pytest.approx(0.5)
    assert groups.beta_defined
    assert groups.members(1) == (1,)


def test_social_welfare_and_utilization_of_example_one_drf() -> None:
    instance = Instance(np.array(EXAMPLE_1))
    allocation = Allocation.from_shares(np.full(3, 5 / 11), instance)
    assert social_welfare(allocation, instance) == pytest.approx(float(Fraction(15, 11)), abs=1e-9)
    assert utilization(allocation) == pytest.approx(float(Fraction(8, 11)), abs=1e-9)
    assert exhausted_resources(allocation, 1e-9) == frozenset({0})

    empty = Allocation.zeros(instance)
    assert social_welfare(empty, instance) == 0.0
    assert utilization(empty) == 0.0


def test_utilities_checks_shapes() -> None:
    instance = Instance(np.array(EXAMPLE_1))
    other = Allocation.from_shares([0.1, 0.1], Instance(np.array([[1.0, 0.5], [0.5, 1.0]])))
    with pytest.raises(ShapeMismatch):
        utilities(other, instance)
    with pytest.raises(ShapeMismatch):
        Allocation.from_shares([0.1, 0.2], instance)


def test_envy_coefficients_match_pairwise_minimum() -> None:
    instance = Instance(np.array(EXAMPLE_1))
    c = envy_coefficients(instance)
    assert np.diag(c) == pytest.approx(np.ones(3))
    assert c[0, 2] == pytest.approx(0.2)
    assert c[2, 0] == pytest.approx(0.4)
    assert c[0, 1] == pytest.approx(0.5)


def test_orient_two_resource_swaps_minority_first_column() -> None:
    instance = Instance(np.array([[1.0, 0.5], [0.3, 1.0], [0.6, 1.0]]))
    oriented, swapped = orient_two_resource(instance)
    assert swapped
    assert oriented.demands.tolist() == [[0.5, 1.0], [1.0, 0.3], [1.0, 0.6]]

    same, swapped_again = orient_two_resource(Instance(np.array(EXAMPLE_1)))
    assert not swapped_again
    assert same.demands.tolist() == EXAMPLE_1


def test_largest_group_prefers_lowest_index_on_ties() -> None:
    instance = Instance(np.array([[1.0, 0.5], [0.5, 1.0]]))
    assert largest_group(instance) == 0


def test_parse_instance_text_normalizes_raw_rows() -> None:
    instance = parse_instance_text("r1,r2\n2,1\n1,4\n")
    assert instance.demands.tolist() == [[1.0, 0.5], [0.25, 1.0]]


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("r1,r2\n1,0.5\n1,abc\n", 3),
        ("r1,r2\n1,0.5,0.2\n", 2),
        ("cpu,mem\n1,0.5\n", 1),
        ("r1,r2\n1,0\n", 2),
    ],
)
def test_parse_instance_text_reports_line_numbers(text: str, line: int) -> None:
    with pytest.raises(ParseError) as excinfo:
        parse_instance_text(text, source="bad.csv")
    assert excinfo.value.line == line
    assert f"bad.csv:{line}:" in str(excinfo.value)


def test_instance_csv_round_trip_is_exact(tmp_path: Path) -> None:
    instance = normalize([[0.3, 0.7], [1.0, 1 / 3]])
    path = write_instance_csv(instance, tmp_path / "nested" / "instance.csv")
    loaded = read_instance_csv(path)
    assert np.array_equal(loaded.demands, instance.demands)
    assert format_instance_csv(loaded).splitlines()[0] == "r1,r2"


def test_read_instance_csv_missing_file_is_parse_error(tmp_path: Path) -> None:
    with pytest.raises(ParseError):
        read_instance_csv(tmp_path / "missing.csv")


@settings(max_examples=60, deadline=None)
@given(raw_matrices)
def test_normalize_is_idempotent(raw: list[list[float]]) -> None:
    once = normalize(raw)
    twice = normalize(once.demands)
    assert np.array_equal(once.demands, twice.demands)
    assert np.all(once.demands.max(axis=1) == 1.0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=3, max_size=3),
    st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=3),
    st.floats(min_value=0.0, max_value=100.0),
)
def test_utility_is_positively_homogeneous(row: list[float], demand: list[float], scale: float) -> None:
    base = utility(row, demand)
    scaled = utility([scale * v for v in row], demand)
    assert scaled == pytest.approx(scale * base, rel=1e-12, abs=1e-12)


integer_matrices = st.integers(min_value=2, max_value=5).flatmap(
    lambda n: st.integers(min_value=2, max_value=3).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(min_value=1, max_value=20), min_size=m, max_size=m),
            min_size=n,
            max_size=n,
        )
    )
)


def _unit_matrix(n: int, m: int) -> st.SearchStrategy[list[list[float]]]:
    return st.lists(
        st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=m, max_size=m),
        min_size=n,
        max_size=n,
    )


@settings(max_examples=60, deadline=None)
@given(integer_matrices, st.data())
def test_welfare_and_utilization_never_drop_when_entries_grow(raw: list[list[int]], data: st.DataObject) -> None:
    instance = normalize(raw)
    base = np.array(data.draw(_unit_matrix(instance.n, instance.m)))
    extra = np.array(data.draw(_unit_matrix(instance.n, instance.m)))
    before = Allocation(shares=np.zeros(instance.n), matrix=base)
    after = Allocation(shares=np.zeros(instance.n), matrix=base + extra)
    assert social_welfare(after, instance) >= social_welfare(before, instance) - 1e-12
    assert utilization(after) >= utilization(before) - 1e-12


@settings(max_examples=60, deadline=None)
@given(integer_matrices, st.data())
def test_nonwasteful_rows_are_worth_exactly_their_share(raw: list[list[int]], data: st.DataObject) -> None:
    instance = normalize(raw)
    shares = np.array(
        data.draw(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=instance.n, max_size=instance.n))
    )
    allocation = Allocation.from_shares(shares, instance)
    for i in range(instance.n):
        assert utility(allocation.matrix[i], instance.demands[i]) == pytest.approx(shares[i], rel=1e-12, abs=1e-15)
    assert utilities(allocation, instance) == pytest.approx(shares, rel=1e-12, abs=1e-15)
    assert social_welfare(allocation, instance) == pytest.approx(shares.sum(), rel=1e-12, abs=1e-12)
