"""
Scalar references the benchmark outputs are checked against.

dot and axpy wrap at 16 bits exactly like the vector datapath. The FFT
reference runs the same Q15 butterfly in int32 numpy arithmetic: the
twiddle product is rounded half up before the 15-bit shift and every stage
halves its outputs, so the result approximates DFT(x) / n.
"""

import numpy as np
from typing import Tuple

Q15_ONE = 32767
Q15_ROUND = 1 << 14
Q15_SHIFT = 15


def dot_reference(a: np.ndarray, b: np.ndarray) -> int:
    products = a.astype(np.int16) * b.astype(np.int16)
    return int(np.array(products.astype(np.int64).sum()).astype(np.int16))


def axpy_reference(alpha: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    a = np.array(alpha, dtype=np.int64).astype(np.int16)
    return (a * x.astype(np.int16) + y.astype(np.int16)).astype(np.int16)


# =================================================================
# Fixed-point FFT
# =================================================================

def log2(n: int) -> int:
    if n <= 0 or n & (n - 1):
        raise ValueError(f"{n} is not a power of two")
    return n.bit_length() - 1


def bit_reverse_indices(n: int) -> np.ndarray:
    bits = log2(n)
    rev = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (bits - 1))
    return rev


def twiddles(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Q15 twiddles W^k = exp(-2*pi*i*k/n) for k < n/2."""
    k = np.arange(n // 2)
    wr = np.round(Q15_ONE * np.cos(2 * np.pi * k / n)).astype(np.int32)
    wi = np.round(-Q15_ONE * np.sin(2 * np.pi * k / n)).astype(np.int32)
    return wr, wi


def q15_product(br, bi, wr, wi) -> Tuple[np.ndarray, np.ndarray]:
    tr = (br * wr - bi * wi + np.int32(Q15_ROUND)) >> np.int32(Q15_SHIFT)
    ti = (br * wi + bi * wr + np.int32(Q15_ROUND)) >> np.int32(Q15_SHIFT)
    return tr, ti


def fft_q15(re: np.ndarray, im: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Radix-2 decimation-in-time FFT of Q15 values held in int32."""
    n = len(re)
    rev = bit_reverse_indices(n)
    xr = re.astype(np.int32)[rev]
    xi = im.astype(np.int32)[rev]
    wr, wi = twiddles(n)

    half = 1
    while half < n:
        m = 2 * half
        # rows are butterfly blocks: the first half of each row is the top input
        xr, xi = xr.reshape(-1, m), xi.reshape(-1, m)
        tw = np.arange(half) * (n // m)
        tr, ti = q15_product(xr[:, half:], xi[:, half:], wr[tw], wi[tw])
        top_r, top_i = xr[:, :half], xi[:, :half]
        xr = np.concatenate([(top_r + tr) >> 1, (top_r - tr) >> 1], axis=1).reshape(-1)
        xi = np.concatenate([(top_i + ti) >> 1, (top_i - ti) >> 1], axis=1).reshape(-1)
        half = m
    return xr, xi


def dft(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Direct O(n^2) double precision DFT."""
    n = len(re)
    k = np.arange(n)
    basis = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return basis @ (re.astype(np.float64) + 1j * im.astype(np.float64))


def fft_error_bound(n: int) -> float:
    """Per-component bound on |fft_q15 - dft / n| for inputs within Q15 / 2."""
    return 2.0 * log2(n) + 2.0
