"""Catalog of the IR intrinsics and vector types a machine configuration supports."""

from typing import List

from ..models import ArithOp
from ..schemas import VConfig
from .ir import VALID_VEWS


SIGNATURES = [
    "load     <L x iW> @buffer[offset]                  -> <L x iW>",
    "store    <L x iW> %v, @buffer[offset]",
    *[f"{op.value:<8} <L x iW> %a, %b                       -> <L x iW>" for op in ArithOp],
    *[f"{op.value + '.vx':<8} <L x iW> %v, %scalar                  -> <L x iW>" for op in ArithOp],
    "redsum   <1 x iW> %v                               -> <1 x iW>",
    "gather   <L x iW> %data, %index                    -> <L x iW>, L = index length",
    "scatter  <D x iW> %data, %index                    -> <D x iW>, data length = index length",
    "const    <integer>                                 -> i32",
    "sload    @scalar_buffer                            -> i32",
]


def largest_vector(config: VConfig, vew: int) -> int:
    """Elements of the widest value the whole register file can hold."""
    return config.num_vregs * config.vlen_bits // vew


def render_catalog(config: VConfig) -> str:
    lines: List[str] = [
        f"# machine: VLEN={config.vlen_bits} vregs={config.num_vregs}",
        "# intrinsics",
        *SIGNATURES,
        "# vector types",
    ]
    for vew in VALID_VEWS:
        if vew > config.vlen_bits:
            continue
        epr = config.vlen_bits // vew
        lines.append(f"<1..{largest_vector(config, vew)} x i{vew}>  ({epr} elements per register)")
    return "\n".join(lines) + "\n"
