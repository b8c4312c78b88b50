import pytest

from zoozve.bench.harness import CaseOutcome, check_results, make_cases, pair_outcomes, run_benchmark
from zoozve.errors import CorrectnessError
from zoozve.models import InstrClass, Isa, Kernel
from zoozve.schemas import BenchResult, RvvConfig, TraceStats, VConfig


@pytest.fixture(scope="module")
def sweep():
    """Every kernel over its default sizes, seed 0."""
    return run_benchmark(list(Kernel))


def speedups(results, kernel):
    return {r.case.n: r.speedup for r in results if r.case.kernel == kernel and r.case.isa == Isa.ZOOZVE}


def outcome(kernel, n, isa, count, out=b"\x00"):
    config = VConfig() if isa == Isa.ZOOZVE else RvvConfig()
    case = make_cases([kernel], [n])[0].model_copy(update={"isa": isa, "config": config})
    stats = TraceStats(dynamic_count=count, per_class={InstrClass.SCALAR: count})
    return CaseOutcome(BenchResult(case=case, stats=stats, correct=True), {"out": out})


# ========== CASES ==========

def test_make_cases_pairs_every_size():
    cases = make_cases([Kernel.AXPY], [512, 1024], seeds=[0, 1])
    assert len(cases) == 8
    assert [c.isa for c in cases[:2]] == [Isa.ZOOZVE, Isa.RVV]
    assert cases[1].config.lmul == 8


def test_fft_ignores_lmul_override():
    cases = make_cases([Kernel.FFT, Kernel.DOTPRODUCT], [512], lmul=4)
    lmuls = {c.kernel: c.config.lmul for c in cases if c.isa == Isa.RVV}
    assert lmuls == {Kernel.FFT: 1, Kernel.DOTPRODUCT: 4}


# ========== PAIRING ==========

def test_pairing_sets_speedup_on_both_sides():
    results = pair_outcomes([
        outcome(Kernel.DOTPRODUCT, 512, Isa.ZOOZVE, 12),
        outcome(Kernel.DOTPRODUCT, 512, Isa.RVV, 81),
    ])
    assert [r.speedup for r in results] == [81 / 12, 81 / 12]
    assert all(r.correct for r in results)


def test_disagreeing_pair_is_incorrect():
    results = pair_outcomes([
        outcome(Kernel.DOTPRODUCT, 512, Isa.ZOOZVE, 12, b"\x01"),
        outcome(Kernel.DOTPRODUCT, 512, Isa.RVV, 81, b"\x02"),
    ])
    assert not any(r.correct for r in results)
    with pytest.raises(CorrectnessError) as exc:
        check_results(results)
    assert exc.value.exit_code == 3
    assert "dotproduct/512/zoozve/0" in exc.value.detail


def test_unpaired_case_has_no_speedup():
    results = pair_outcomes([outcome(Kernel.AXPY, 512, Isa.RVV, 26)])
    assert results[0].speedup is None


# ========== SWEEP ==========

def test_sweep_is_correct(sweep):
    check_results(sweep)
    assert len(sweep) == 2 * (7 + 6 + 6)


def test_speedup_floors(sweep):
    assert speedups(sweep, Kernel.DOTPRODUCT)[16384] >= 50
    assert speedups(sweep, Kernel.AXPY)[16384] >= 40
    fft = speedups(sweep, Kernel.FFT)
    assert fft[32] >= 8
    assert fft[2048] >= 100


@pytest.mark.parametrize("kernel", list(Kernel))
def test_speedup_increases_with_n(sweep, kernel):
    by_n = speedups(sweep, kernel)
    values = [by_n[n] for n in sorted(by_n)]
    assert all(a < b for a, b in zip(values, values[1:])), f"{kernel.value}: {values}"


def test_rvv_strips_grow_with_n(sweep):
    for kernel in Kernel:
        strips = [r.stats.strip_iterations for r in sweep if r.case.kernel == kernel and r.case.isa == Isa.RVV]
        assert strips == sorted(strips) and strips[0] < strips[-1]


def test_parallel_run_matches_serial():
    serial = run_benchmark([Kernel.AXPY], [512, 1024], seeds=[0, 1])
    parallel = run_benchmark([Kernel.AXPY], [512, 1024], seeds=[0, 1], jobs=2)
    assert serial == parallel
    assert [r.case.key for r in serial] == sorted(r.case.key for r in serial)
