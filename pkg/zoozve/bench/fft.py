"""
Radix-2 decimation-in-time Q15 FFT for both ISAs.

Zoozve keeps the whole real and imaginary vectors in register groups. The
bit-reversal permutation is one gather; every stage gathers the bottom and
top input of each output position through precomputed index tables, forms
the rounded twiddle product, applies the per-position sign (+1 for the top
output of a butterfly, -1 for the bottom) and halves. The code grows by a
constant per stage and never loops.

RVV copies the input into place with a scalar bit-reversal loop (the subset
has no indexed memory access and vrgather cannot cross strips), then
strip-mines every butterfly block of every stage.
"""

import numpy as np
from typing import Dict, List

from ..compiler.ir import IrBuilder
from ..compiler.pipeline import compile_module
from ..isa.assembler import assemble
from ..models import ArithOp, Isa, Kernel
from .kernels import rvv_config, zoozve_config
from .layout import KernelBuild, KernelLayout
from .oracles import Q15_ROUND, Q15_SHIFT, bit_reverse_indices, log2, twiddles

WORD = 4


def fft_layout(n: int) -> KernelLayout:
    layout = KernelLayout(outputs=("out_re", "out_im"))
    for name in ("in_re", "in_im", "out_re", "out_im"):
        layout.add(name, n, 32)
    return layout


def stage_tables(n: int, half: int) -> Dict[str, np.ndarray]:
    """Per-position tables of one stage: bottom index, top index, twiddle and sign."""
    wr, wi = twiddles(n)
    p = np.arange(n)
    m = 2 * half
    local = p % m
    top = local < half
    tw = (local % half) * (n // m)
    return {
        "bidx": np.where(top, p + half, p),
        "ia": np.where(top, p, p - half),
        "wr": wr[tw],
        "wi": wi[tw],
        "sgn": np.where(top, 1, -1),
    }


# =================================================================
# Zoozve
# =================================================================

def _zoozve_fft(n: int, config) -> KernelBuild:
    config = zoozve_config(Kernel.FFT, config)
    layout = fft_layout(n)
    tables: Dict[str, np.ndarray] = {"bitrev": bit_reverse_indices(n)}
    layout.add("bitrev", n, 32)
    for s in range(1, log2(n) + 1):
        for key, values in stage_tables(n, 1 << (s - 1)).items():
            layout.add(f"{key}{s}", n, 32)
            tables[f"{key}{s}"] = values

    b = IrBuilder(vew=32)
    for r in layout.regions.values():
        b.buffer(r.name, r.length, r.address)
    rnd, shift, one = b.const(Q15_ROUND, "rnd"), b.const(Q15_SHIFT, "shift"), b.const(1, "one")

    rev = b.load("bitrev", name="rev")
    xr = b.gather(b.load("in_re", name="in_re"), rev, name="xr0")
    xi = b.gather(b.load("in_im", name="in_im"), rev, name="xi0")

    for s in range(1, log2(n) + 1):
        bidx = b.load(f"bidx{s}")
        br, bi = b.gather(xr, bidx), b.gather(xi, bidx)
        wr, wi = b.load(f"wr{s}"), b.load(f"wi{s}")

        re = b.binary(ArithOp.SUB, b.binary(ArithOp.MUL, br, wr), b.binary(ArithOp.MUL, bi, wi))
        tr = b.binary_vx(ArithOp.SRA, b.binary_vx(ArithOp.ADD, re, rnd), shift)
        im = b.binary(ArithOp.ADD, b.binary(ArithOp.MUL, br, wi), b.binary(ArithOp.MUL, bi, wr))
        ti = b.binary_vx(ArithOp.SRA, b.binary_vx(ArithOp.ADD, im, rnd), shift)

        sgn = b.load(f"sgn{s}")
        tr, ti = b.binary(ArithOp.MUL, tr, sgn), b.binary(ArithOp.MUL, ti, sgn)

        ia = b.load(f"ia{s}")
        top_r, top_i = b.gather(xr, ia), b.gather(xi, ia)
        xr = b.binary_vx(ArithOp.SRA, b.binary(ArithOp.ADD, top_r, tr), one, name=f"xr{s}")
        xi = b.binary_vx(ArithOp.SRA, b.binary(ArithOp.ADD, top_i, ti), one, name=f"xi{s}")

    b.store(xr, "out_re")
    b.store(xi, "out_im")
    compiled = compile_module(b.build(), config, name="fft")
    return KernelBuild(compiled.program, layout, config, tables, compiled)


# =================================================================
# RVV
# =================================================================

STRIP_BODY = """
    rvv.vsetvli t0, a0, e32, m1
    add a1, s0, s5
    add a2, s0, s2
    add a3, a2, s5
    add a4, s1, s2
    rvv.vle v1, s0
    rvv.vle v2, a1
    rvv.vle v3, a2
    rvv.vle v4, a3
    rvv.vle v5, s1
    rvv.vle v6, a4
    rvv.vmul v7, v3, v5
    rvv.vmul v8, v4, v6
    rvv.vsub v7, v7, v8
    rvv.vadd.vx v7, v7, s7
    rvv.vsra.vx v7, v7, s8
    rvv.vmul v8, v3, v6
    rvv.vmul v9, v4, v5
    rvv.vadd v8, v8, v9
    rvv.vadd.vx v8, v8, s7
    rvv.vsra.vx v8, v8, s8
    rvv.vadd v10, v1, v7
    rvv.vsra.vx v10, v10, s9
    rvv.vadd v11, v2, v8
    rvv.vsra.vx v11, v11, s9
    rvv.vsub v12, v1, v7
    rvv.vsra.vx v12, v12, s9
    rvv.vsub v13, v2, v8
    rvv.vsra.vx v13, v13, s9
    rvv.vse v10, s0
    rvv.vse v11, a1
    rvv.vse v12, a2
    rvv.vse v13, a3
    sub a0, a0, t0
    slli t1, t0, 2
    add s0, s0, t1
    add s1, s1, t1
"""


def _rvv_fft(n: int, config) -> KernelBuild:
    # the butterfly needs 13 registers, so LMUL stays 1
    config = rvv_config(Kernel.FFT, config.vlen_bits, 1)
    layout = fft_layout(n)
    rev = bit_reverse_indices(n)
    wr, wi = twiddles(n)

    out_re = layout["out_re"].address
    tables: Dict[str, np.ndarray] = {"brtab": out_re + WORD * rev}
    layout.add("brtab", n, 32)
    for s in range(1, log2(n) + 1):
        half = 1 << (s - 1)
        tw = np.arange(half) * (n // (2 * half))
        # real parts followed by imaginary parts: wi sits half words after wr
        layout.add(f"tw{s}", 2 * half, 32)
        tables[f"tw{s}"] = np.concatenate([wr[tw], wi[tw]])

    in_re = layout["in_re"].address
    dim_in = layout["in_im"].address - in_re
    dim_out = layout["out_im"].address - out_re

    lines: List[str] = [
        "    li s4, 4",
        f"    li s5, {dim_out}",
        f"    li s7, {Q15_ROUND}",
        f"    li s8, {Q15_SHIFT}",
        "    li s9, 1",
        f"    li a1, {in_re}",
        f"    li a2, {layout['brtab'].address}",
        f"    li a5, {in_re + WORD * n}",
        "bitrev:",
        "    lw t0, 0(a2)",
        "    lw t1, 0(a1)",
        f"    lw t2, {dim_in}(a1)",
        "    sw t1, 0(t0)",
        f"    sw t2, {dim_out}(t0)",
        "    add a1, a1, s4",
        "    add a2, a2, s4",
        "    bne a1, a5, bitrev",
        f"    li s3, {out_re + WORD * n}",
    ]
    for s in range(1, log2(n) + 1):
        half = 1 << (s - 1)
        lines += [
            f"    li s0, {out_re}",
            f"    li s2, {WORD * half}",
            f"block{s}:",
            f"    li a0, {half}",
            f"    li s1, {layout[f'tw{s}'].address}",
            f"strip{s}:",
            STRIP_BODY.rstrip("\n"),
            f"    bne a0, zero, strip{s}",
            "    add s0, s0, s2",
            f"    bne s0, s3, block{s}",
        ]
    return KernelBuild(assemble("\n".join(lines) + "\n"), layout, config, tables)


def gen_fft(n: int, isa: Isa, config) -> KernelBuild:
    if isa == Isa.ZOOZVE:
        return _zoozve_fft(n, config)
    return _rvv_fft(n, config)
