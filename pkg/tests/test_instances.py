from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.core.errors import BadAlpha, BadParams, EmptyPool, TooSmall, TraceIoError
from src.core.model import partition
from src.instances import (
    GeneratorSpec,
    adv_drf,
    adv_f1,
    adv_f2,
    adv_thm6,
    derive_seed,
    gen_alpha,
    gen_alpha_beta,
    generate,
    ingest_trace,
    load_trace_pool,
    minor_count,
    sample_pool,
)

REPO_ROOT = Path(__file__).resolve().parents[1]
SAMPLE_TRACE = REPO_ROOT / "data" / "sample_trace.csv"


def test_minor_count_rounds_half_up() -> None:
    assert minor_count(10, 0.25) == 3
    assert minor_count(10, 0.05) == 1
    assert minor_count(10, 0.04) == 0
    assert minor_count(2000, 0.3) == 600


def test_gen_alpha_layout_and_realized_alpha() -> None:
    instance = gen_alpha(20, 0.25, seed=4)
    d = instance.demands
    assert d.shape == (20, 2)
    assert np.all(d[:15, 0] == 1.0)
    assert np.all(d[15:, 1] == 1.0)
    assert np.all(d[15:, 0] < 1.0)
    assert np.all(np.isclose(d * 100, np.round(d * 100)))
    assert partition(instance).alpha == pytest.approx(0.25)


def test_gen_alpha_is_deterministic_per_seed() -> None:
    first = gen_alpha(50, 0.4, seed=9)
    again = gen_alpha(50, 0.4, seed=9)
    other = gen_alpha(50, 0.4, seed=10)
    assert np.array_equal(first.demands, again.demands)
    assert not np.array_equal(first.demands, other.demands)


@pytest.mark.parametrize(("n", "alpha"), [(10, 0.0), (10, 0.6), (3, 0.1)])
def test_gen_alpha_rejects_bad_alpha(n: int, alpha: float) -> None:
    with pytest.raises(BadAlpha):
        gen_alpha(n, alpha, seed=0)


def test_gen_alpha_beta_groups_and_grid() -> None:
    instance = gen_alpha_beta(40, 4, 0.5, 0.3, seed=2)
    d = instance.demands
    assert d.shape == (40, 4)
    assert np.all(d[:20, 0] == 1.0)
    assert np.all(d[20:, 0] < 1.0)
    assert np.all(d.max(axis=1) == 1.0)
    groups = partition(instance)
    assert groups.alpha == pytest.approx(0.5)
    assert groups.beta_defined
    assert 0.0 < groups.beta < 1.0


@pytest.mark.parametrize(
    ("n", "m", "alpha", "beta"),
    [(40, 2, 0.5, 0.3), (40, 3, 0.5, 0.999), (40, 3, 0.5, 0.0), (10, 3, 0.01, 0.3), (10, 3, 0.99, 0.3)],
)
def test_gen_alpha_beta_rejects_bad_parameters(n: int, m: int, alpha: float, beta: float) -> None:
    with pytest.raises(BadParams):
        gen_alpha_beta(n, m, alpha, beta, seed=0)


def test_adv_drf_layout() -> None:
    instance = adv_drf(2000, 0.25)
    d = instance.demands
    assert d.shape == (2000, 2)
    assert np.all(d[:1500] == [1.0, 0.0005])
    assert d[1500].tolist() == [0.00025, 1.0]
    assert d[1501:] == pytest.approx(np.tile([0.9995, 1.0], (499, 1)))


def test_adv_f1_and_f2_layouts() -> None:
    f1_case = adv_f1(100, 0.3).demands
    assert f1_case[0].tolist() == [1.0, 0.01]
    assert f1_case[1:70] == pytest.approx(np.tile([1.0, 0.99], (69, 1)))
    assert np.all(f1_case[70:] == [0.01, 1.0])

    f2_case = adv_f2(100, 0.3).demands
    assert np.all(f2_case[:70] == [1.0, 1e-4])
    assert f2_case[70].tolist() == pytest.approx([1 / 70, 1.0])
    assert np.all(f2_case[71:, 1] == 1.0)


def test_adversarial_families_reject_small_or_bad_inputs() -> None:
    with pytest.raises(TooSmall):
        adv_drf(4, 0.25)
    with pytest.raises(TooSmall):
        adv_f1(2, 0.5)
    with pytest.raises(BadAlpha):
        adv_f2(100, 0.7)


def test_adv_thm6_case_one_realizes_beta() -> None:
    instance = adv_thm6(300, 3, 0.3, 0.4, case=1)
    assert instance.demands.shape == (300, 3)
    groups = partition(instance)
    assert groups.alpha == pytest.approx(0.3)
    assert groups.beta == pytest.approx(0.4, abs=1e-9)


def test_adv_thm6_case_two_realizes_beta() -> None:
    instance = adv_thm6(900, 3, 0.3, 0.4, case=2)
    assert instance.demands.shape == (900, 3)
    groups = partition(instance)
    assert groups.alpha == pytest.approx(0.3)
    assert groups.beta == pytest.approx(0.4, abs=1e-9)
    assert groups.sizes() == (630, 135, 135)


def test_adv_thm6_rejects_unusable_parameters() -> None:
    with pytest.raises(BadParams):
        adv_thm6(100, 3, 0.31, 0.4, case=2)
    with pytest.raises(BadParams):
        adv_thm6(300, 3, 0.3, 0.4, case=3)
    with pytest.raises(BadParams):
        adv_thm6(300, 2, 0.3, 0.4, case=1)


def test_generate_dispatches_on_kind() -> None:
    spec = GeneratorSpec(kind="adv-drf", n=40, alpha=0.25)
    assert spec.kind == "adv_drf"
    assert np.array_equal(generate(spec).demands, adv_drf(40, 0.25).demands)

    beta_spec = GeneratorSpec(kind="adv_thm6_case2", n=900, m=3, alpha=0.3, beta=0.4)
    assert np.array_equal(generate(beta_spec).demands, adv_thm6(900, 3, 0.3, 0.4, case=2).demands)

    with pytest.raises(BadParams):
        GeneratorSpec(kind="zipf", n=10)
    with pytest.raises(BadParams):
        GeneratorSpec(kind="alpha", n=0, alpha=0.3)
    with pytest.raises(BadParams):
        generate(GeneratorSpec(kind="alpha", n=10))
    with pytest.raises(BadParams):
        generate(GeneratorSpec(kind="trace", n=10))


def test_bundled_trace_pool() -> None:
    pool = load_trace_pool(SAMPLE_TRACE)
    assert pool.size == 1000
    assert pool.skipped == 0
    assert pool.cpu_dominant_fraction == pytest.approx(0.666)
    assert np.all(pool.demands.max(axis=1) == 1.0)


def test_trace_pool_skips_unusable_rows(tmp_path: Path) -> None:
    path = tmp_path / "trace.csv"
    path.write_text("CPU, Mem\n1,2\n0,1\nabc,3\n,4\n4, 2\n", encoding="utf-8")
    pool = load_trace_pool(path)
    assert pool.skipped == 3
    assert pool.demands.tolist() == [[0.5, 1.0], [1.0, 0.5]]
    assert pool.cpu_dominant_fraction == pytest.approx(0.5)


def test_trace_pool_errors(tmp_path: Path) -> None:
    with pytest.raises(TraceIoError):
        load_trace_pool(tmp_path / "missing.csv")

    no_mem = tmp_path / "no_mem.csv"
    no_mem.write_text("cpu,disk\n1,2\n", encoding="utf-8")
    with pytest.raises(TraceIoError):
        load_trace_pool(no_mem)

    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(TraceIoError):
        load_trace_pool(empty)

    useless = tmp_path / "useless.csv"
    useless.write_text("cpu,mem\n0,1\n-1,2\n", encoding="utf-8")
    with pytest.raises(EmptyPool):
        load_trace_pool(useless)


def test_sampling_is_seeded_and_draws_from_the_pool() -> None:
    pool = load_trace_pool(SAMPLE_TRACE)
    first = sample_pool(pool, 30, seed=5)
    assert np.array_equal(first.demands, sample_pool(pool, 30, seed=5).demands)
    assert np.array_equal(first.demands, ingest_trace(SAMPLE_TRACE, 30, seed=5).demands)
    rows = {tuple(row) for row in pool.demands.tolist()}
    assert all(tuple(row) in rows for row in first.demands.tolist())
    with pytest.raises(BadParams):
        sample_pool(pool, 0, seed=5)


def test_derive_seed_is_stable_and_spreads() -> None:
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    seeds = {derive_seed(1, point, trial) for point in range(5) for trial in range(5)}
    assert len(seeds) == 25
