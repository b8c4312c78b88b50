"""Intrinsic IR compiler: split, grouped allocation, lowering and coalescing."""

from .coalesce import coalesce
from .intervals import compute_live_intervals, force_intervals
from .ir import IrBuilder, IrModule, parse_ir, print_module, verify
from .lower import direct_lower, lower, materialize
from .pipeline import CompileResult, compile_module
from .regalloc import allocate_grouped
from .split import split_intrinsics

__all__ = [
    "CompileResult", "IrBuilder", "IrModule", "allocate_grouped", "coalesce",
    "compile_module", "compute_live_intervals", "direct_lower", "force_intervals",
    "lower", "materialize", "parse_ir", "print_module", "split_intrinsics", "verify",
]
