"""
dotproduct and axpy for both ISAs, plus the per-kernel machine
configurations, input generation and expected outputs.

The Zoozve versions are compiled from the intrinsic IR and run without any
loop. The RVV versions are the canonical strip-mined loops:

    dotproduct (LMUL 2, 64 elements per strip)   10 instructions per strip
    axpy       (LMUL 8, 256 elements per strip)  11 instructions per strip

Both store their result to the same addresses, so paired runs can be
compared byte for byte.
"""

import logging
import numpy as np
from typing import Dict, Optional

from ..compiler.ir import IrBuilder
from ..compiler.pipeline import compile_module
from ..isa.assembler import assemble
from ..models import ArithOp, Isa, Kernel
from ..schemas import RvvConfig, VConfig
from .layout import KernelBuild, KernelLayout
from .oracles import axpy_reference, dot_reference, fft_q15

logger = logging.getLogger(__name__)

ELEMENT_BITS = {Kernel.DOTPRODUCT: 16, Kernel.AXPY: 16, Kernel.FFT: 32}
# strips of 64 and 256 elements at VLEN 512
RVV_LMUL = {Kernel.DOTPRODUCT: 2, Kernel.AXPY: 8, Kernel.FFT: 1}

INPUT_LOW, INPUT_HIGH = -16384, 16384


# =================================================================
# Configurations
# =================================================================

def zoozve_config(kernel: Kernel, base: Optional[VConfig] = None) -> VConfig:
    return (base or VConfig()).with_vew(ELEMENT_BITS[kernel])


def rvv_config(kernel: Kernel, vlen_bits: int = 512, lmul: Optional[int] = None) -> RvvConfig:
    return RvvConfig(vlen_bits=vlen_bits, vew_bits=ELEMENT_BITS[kernel], lmul=lmul or RVV_LMUL[kernel])


def _as_rvv(kernel: Kernel, config: RvvConfig) -> RvvConfig:
    return rvv_config(kernel, config.vlen_bits, config.lmul)


# =================================================================
# Layouts
# =================================================================

def dot_layout(n: int) -> KernelLayout:
    layout = KernelLayout(outputs=("out",))
    layout.add("a", n, 16)
    layout.add("b", n, 16)
    layout.add("out", 1, 16)
    return layout


def axpy_layout(n: int) -> KernelLayout:
    layout = KernelLayout(outputs=("y",))
    layout.add("alpha", 1, 32, scalar=True)
    layout.add("x", n, 16)
    layout.add("y", n, 16)
    return layout


def _declare(builder: IrBuilder, layout: KernelLayout) -> None:
    for r in layout.regions.values():
        builder.buffer(r.name, None if r.scalar else r.length, r.address)


# =================================================================
# dotproduct
# =================================================================

def gen_dotproduct(n: int, isa: Isa, config) -> KernelBuild:
    layout = dot_layout(n)
    if isa == Isa.ZOOZVE:
        config = zoozve_config(Kernel.DOTPRODUCT, config)
        b = IrBuilder(vew=16)
        _declare(b, layout)
        prod = b.binary(ArithOp.MUL, b.load("a", name="a"), b.load("b", name="b"), name="prod")
        b.store(b.redsum(prod, name="sum"), "out")
        compiled = compile_module(b.build(), config, name="dotproduct")
        return KernelBuild(compiled.program, layout, config, compiled=compiled)

    config = _as_rvv(Kernel.DOTPRODUCT, config)
    lm = config.lmul
    # pointers advance a full strip; after a short last strip they are dead
    stride = 2 * config.vlmax
    text = f"""
        li a0, {n}
        li a1, {layout['a'].address}
        li a2, {layout['b'].address}
        li t1, {stride}
        rvv.vsetvli zero, zero, e16, m{lm}
        rvv.vxor v{3 * lm}, v{3 * lm}, v{3 * lm}
    loop:
        rvv.vsetvli t0, a0, e16, m{lm}
        rvv.vle v0, a1
        rvv.vle v{lm}, a2
        rvv.vmul v{2 * lm}, v0, v{lm}
        rvv.vredsum v{3 * lm}, v{2 * lm}, v{3 * lm}
        sub a0, a0, t0
        add a1, a1, t1
        add a2, a2, t1
        bne a0, zero, loop
        rvv.vmv.x.s t2, v{3 * lm}
        li a3, {layout['out'].address}
        sh t2, 0(a3)
    """
    return KernelBuild(assemble(text), layout, config)


# =================================================================
# axpy
# =================================================================

def gen_axpy(n: int, isa: Isa, config) -> KernelBuild:
    layout = axpy_layout(n)
    if isa == Isa.ZOOZVE:
        config = zoozve_config(Kernel.AXPY, config)
        b = IrBuilder(vew=16)
        _declare(b, layout)
        alpha = b.sload("alpha", name="alpha")
        scaled = b.binary_vx(ArithOp.MUL, b.load("x", name="x"), alpha, name="ax")
        b.store(b.binary(ArithOp.ADD, scaled, b.load("y", name="y"), name="r"), "y")
        compiled = compile_module(b.build(), config, name="axpy")
        return KernelBuild(compiled.program, layout, config, compiled=compiled)

    config = _as_rvv(Kernel.AXPY, config)
    lm = config.lmul
    # pointers advance a full strip; after a short last strip they are dead
    stride = 2 * config.vlmax
    text = f"""
        li a0, {n}
        li a1, {layout['x'].address}
        li a2, {layout['y'].address}
        li a4, {layout['alpha'].address}
        lw a3, 0(a4)
        li t1, {stride}
    loop:
        rvv.vsetvli t0, a0, e16, m{lm}
        rvv.vle v0, a1
        rvv.vle v{lm}, a2
        rvv.vmul.vx v0, v0, a3
        rvv.vadd v0, v0, v{lm}
        rvv.vse v0, a2
        sub a0, a0, t0
        add a1, a1, t1
        add a2, a2, t1
        bne a0, zero, loop
    """
    return KernelBuild(assemble(text), layout, config)


# =================================================================
# Inputs and expected outputs
# =================================================================

def make_inputs(kernel: Kernel, n: int, seed: int) -> Dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)

    def draw(dtype):
        return rng.integers(INPUT_LOW, INPUT_HIGH, size=n).astype(dtype)

    if kernel == Kernel.DOTPRODUCT:
        return {"a": draw(np.int16), "b": draw(np.int16)}
    if kernel == Kernel.AXPY:
        alpha = np.array([rng.integers(INPUT_LOW, INPUT_HIGH)], dtype=np.int32)
        return {"alpha": alpha, "x": draw(np.int16), "y": draw(np.int16)}
    return {"in_re": draw(np.int32), "in_im": draw(np.int32)}


def expected_outputs(kernel: Kernel, inputs: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    if kernel == Kernel.DOTPRODUCT:
        return {"out": np.array([dot_reference(inputs["a"], inputs["b"])], dtype=np.int16)}
    if kernel == Kernel.AXPY:
        return {"y": axpy_reference(int(inputs["alpha"][0]), inputs["x"], inputs["y"])}
    re, im = fft_q15(inputs["in_re"], inputs["in_im"])
    return {"out_re": re, "out_im": im}
