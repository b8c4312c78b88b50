import numpy as np
import pytest

from zoozve.bench.fft import fft_layout, gen_fft, stage_tables
from zoozve.bench.harness import make_cases, run_case
from zoozve.bench.oracles import (
    axpy_reference, bit_reverse_indices, dft, dot_reference, fft_error_bound, fft_q15, log2, twiddles,
)
from zoozve.models import Isa, Kernel
from zoozve.schemas import RvvConfig, VConfig


# ========== SCALAR REFERENCES ==========

def test_dot_reference_wraps_at_16_bits():
    assert dot_reference(np.array([300]), np.array([300])) == 90000 - 65536
    assert dot_reference(np.array([1, 2, 3]), np.array([4, 5, 6])) == 32


def test_axpy_reference_wraps_at_16_bits():
    assert list(axpy_reference(3, np.array([10000]), np.array([5]))) == [30005]
    assert list(axpy_reference(4, np.array([10000]), np.array([0]))) == [40000 - 65536]


def test_bit_reverse_indices():
    assert list(bit_reverse_indices(8)) == [0, 4, 2, 6, 1, 5, 3, 7]
    assert list(bit_reverse_indices(2)) == [0, 1]


def test_log2_rejects_non_powers():
    assert log2(2048) == 11
    for n in (0, 12, -4):
        with pytest.raises(ValueError):
            log2(n)


def test_twiddles_are_q15():
    wr, wi = twiddles(8)
    assert len(wr) == 4
    assert (wr[0], wi[0]) == (32767, 0)
    assert (wr[2], wi[2]) == (0, -32767), "W^(n/4) = -i"


def test_fft_of_impulse_is_flat():
    re = np.zeros(32, dtype=np.int32)
    re[0] = 16384
    xr, xi = fft_q15(re, np.zeros(32, dtype=np.int32))
    assert np.all(xr == 16384 // 32)
    assert np.all(xi == 0)


@pytest.mark.parametrize("n", [32, 256])
def test_fft_approximates_scaled_dft(n, rng):
    for _ in range(5):
        re = rng.integers(-16384, 16384, size=n)
        im = rng.integers(-16384, 16384, size=n)
        xr, xi = fft_q15(re, im)
        exact = dft(re, im) / n
        worst = max(np.abs(xr - exact.real).max(), np.abs(xi - exact.imag).max())
        assert worst <= fft_error_bound(n), f"n={n}: error {worst:.2f} over bound"


# ========== KERNEL TABLES ==========

def test_stage_tables():
    t = stage_tables(8, 2)
    assert list(t["bidx"]) == [2, 3, 2, 3, 6, 7, 6, 7]
    assert list(t["ia"]) == [0, 1, 0, 1, 4, 5, 4, 5]
    assert list(t["sgn"]) == [1, 1, -1, -1, 1, 1, -1, -1]
    wr, wi = twiddles(8)
    assert list(t["wr"]) == [wr[0], wr[2]] * 4
    assert list(t["wi"]) == [wi[0], wi[2]] * 4


def test_fft_layout_shares_addresses():
    z = gen_fft(32, Isa.ZOOZVE, VConfig())
    r = gen_fft(32, Isa.RVV, RvvConfig())
    layout = fft_layout(32)
    for name in layout.outputs + ("in_re", "in_im"):
        assert z.layout[name].address == r.layout[name].address == layout[name].address


def test_rvv_fft_keeps_lmul_1():
    build = gen_fft(64, Isa.RVV, RvvConfig(vlen_bits=512, vew_bits=32, lmul=8))
    assert build.config.lmul == 1


# ========== SIMULATED FFT ==========

@pytest.mark.parametrize("n", [32, 64, 128, 256, 512])
def test_zoozve_fft_count_grows_per_stage(n):
    """No loop: every extra stage adds the same 30 instructions."""
    case = make_cases([Kernel.FFT], [n])[0]
    stats = run_case(case).result.stats
    assert case.isa == Isa.ZOOZVE
    assert stats.dynamic_count == 168 + 30 * (log2(n) - 5)
    assert stats.strip_iterations == 0


FFT_PAIRED_SIZES = [32, 64, 128, 256, 512,
                    pytest.param(1024, marks=pytest.mark.slow), pytest.param(2048, marks=pytest.mark.slow)]


@pytest.mark.parametrize("n", FFT_PAIRED_SIZES)
def test_fft_pairs_are_bit_exact(n):
    """20 inputs per size: both ISAs match the reference and each other byte for byte."""
    cases = make_cases([Kernel.FFT], [n], seeds=range(20))
    assert len(cases) == 40
    outcomes = {(c.seed, c.isa): run_case(c) for c in cases}
    for seed in range(20):
        zoozve, rvv = outcomes[(seed, Isa.ZOOZVE)], outcomes[(seed, Isa.RVV)]
        assert zoozve.result.correct, f"zoozve n={n} seed={seed}"
        assert rvv.result.correct, f"rvv n={n} seed={seed}"
        assert zoozve.outputs == rvv.outputs, f"n={n} seed={seed}: outputs differ"
        assert zoozve.result.stats.strip_iterations == 0
        assert rvv.result.stats.strip_iterations > 0
