"""
Simplified RVV baseline: 32 architectural vector registers grouped by a
power-of-two LMUL, vsetvli-driven vector length, same-VL vrgather, plus the
register utilization model of LMUL grouping.
"""

import logging
import numpy as np
from typing import Optional, Tuple

from ..errors import SimTimeout, SimTrap
from ..isa.instructions import (
    RVV_GROUP_OPERANDS, Program, RvvArithVV, RvvArithVX, RvvGather, RvvLoad, RvvMvXS,
    RvvRedSum, RvvStore, VSetVli, is_zoozve,
)
from ..schemas import RvvConfig, TraceStats
from .core import (
    DEFAULT_MAX_STEPS, DEFAULT_MEM_SIZE, SCALAR_HANDLERS, SIGNED, UNSIGNED, CoreState,
    broadcast, reduce_sum, vector_op,
)
from .trace import StatsCounter, TraceWriter

logger = logging.getLogger(__name__)

NUM_RVV_REGS = 32


# =================================================================
# Strip-mining and utilization model
# =================================================================

def vsetvli(avl: int, config: RvvConfig) -> int:
    return min(avl, config.vlmax)


def strip_mine_iterations(n: int, config: RvvConfig) -> int:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return -(-n // config.vlmax)


def rvv_utilization(vl: int, config: RvvConfig) -> float:
    """Fraction of the LMUL group's element slots that hold live elements."""
    if not 0 < vl <= config.vlmax:
        raise ValueError(f"vl={vl} must lie in (0, {config.vlmax}]")
    return vl / config.vlmax


def underutilization_band(config: RvvConfig) -> Optional[Tuple[int, int]]:
    """
    Closed range of vector lengths that already need the full LMUL group but
    fill at most (lmul - 1) of its registers:
    [(2^(n-1) + 1) * VLEN/VEW, (2^n - 1) * VLEN/VEW] with n = log2(lmul).
    None for LMUL 1.
    """
    if config.lmul == 1:
        return None
    n = config.lmul.bit_length() - 1
    epr = config.elements_per_register
    return (2 ** (n - 1) + 1) * epr, (2 ** n - 1) * epr


# =================================================================
# Machine state
# =================================================================

class RvvState(CoreState):
    def __init__(self, config: RvvConfig, mem_size: int = DEFAULT_MEM_SIZE,
                 init_mem: Optional[bytes] = None):
        super().__init__(mem_size, init_mem)
        self.config = config
        self.vregs = np.zeros(NUM_RVV_REGS * config.vlen_bytes, dtype=np.uint8)
        self.vl = 0
        self.vtype = (config.vew_bits, config.lmul)

    @property
    def vew(self) -> int:
        return self.vtype[0]

    @property
    def lmul(self) -> int:
        return self.vtype[1]

    @property
    def vlmax(self) -> int:
        return self.lmul * self.config.vlen_bits // self.vew

    def regs(self, base: int, count: int) -> np.ndarray:
        """Writable view of count elements starting at register base."""
        start = base * self.config.vlen_bytes
        end = start + count * self.vew // 8
        if end > len(self.vregs):
            raise self.trap(f"v{base} group of {count} elements exceeds the register file")
        return self.vregs[start:end].view(SIGNED[self.vew])

    def check_aligned(self, instr) -> None:
        for attr in RVV_GROUP_OPERANDS.get(type(instr), ()):
            reg = getattr(instr, attr)
            if reg % self.lmul:
                raise self.trap(f"v{reg} is not aligned to lmul={self.lmul}")


# =================================================================
# RVV instruction semantics
# =================================================================

def _vsetvli(state: RvvState, instr: VSetVli) -> None:
    state.vtype = (instr.vew, instr.lmul)
    # rs_avl = x0 requests vl = vlmax
    avl = state.vlmax if instr.rs_avl == 0 else state.avl(instr.rs_avl)
    state.vl = min(avl, state.vlmax)
    state.set_x(instr.rd, state.vl)


def _load(state: RvvState, instr: RvvLoad) -> None:
    if state.vl:
        state.regs(instr.vd, state.vl)[:] = state.mem_view(state.x[instr.rs_addr], state.vl, state.vew)


def _store(state: RvvState, instr: RvvStore) -> None:
    if state.vl:
        src = state.regs(instr.vs3, state.vl).copy()
        state.mem_view(state.x[instr.rs_addr], state.vl, state.vew)[:] = src


def _arith_vv(state: RvvState, instr: RvvArithVV) -> None:
    if state.vl:
        a = state.regs(instr.vs1, state.vl).copy()
        b = state.regs(instr.vs2, state.vl).copy()
        state.regs(instr.vd, state.vl)[:] = vector_op(instr.op, a, b)


def _arith_vx(state: RvvState, instr: RvvArithVX) -> None:
    if state.vl:
        a = state.regs(instr.vs2, state.vl).copy()
        b = broadcast(state.x[instr.rs2], a.dtype)
        state.regs(instr.vd, state.vl)[:] = vector_op(instr.op, a, b)


def _redsum(state: RvvState, instr: RvvRedSum) -> None:
    if state.vl:
        values = state.regs(instr.vs2, state.vl).copy()
        acc = state.regs(instr.vs1, 1)[:1].copy()
        state.regs(instr.vd, 1)[0] = reduce_sum(np.concatenate([acc, values]), values.dtype)


def _gather(state: RvvState, instr: RvvGather) -> None:
    if state.vl:
        vlmax = state.vlmax
        idx = state.regs(instr.vs2, state.vl).view(UNSIGNED[state.vew]).astype(np.int64)
        data = state.regs(instr.vs1, vlmax).copy()
        in_range = idx < vlmax
        result = np.where(in_range, data[np.where(in_range, idx, 0)], 0).astype(data.dtype)
        state.regs(instr.vd, state.vl)[:] = result


def _mv_x_s(state: RvvState, instr: RvvMvXS) -> None:
    state.set_x(instr.rd, int(state.regs(instr.vs2, 1)[0]))


def _advancing(handler):
    def run(state, instr):
        state.check_aligned(instr)
        handler(state, instr)
        state.pc += 1
    return run


HANDLERS = {
    VSetVli: _advancing(_vsetvli),
    RvvLoad: _advancing(_load),
    RvvStore: _advancing(_store),
    RvvArithVV: _advancing(_arith_vv),
    RvvArithVX: _advancing(_arith_vx),
    RvvRedSum: _advancing(_redsum),
    RvvGather: _advancing(_gather),
    RvvMvXS: _advancing(_mv_x_s),
    **SCALAR_HANDLERS,
}


def step_rvv(state: RvvState, instr) -> RvvState:
    handler = HANDLERS.get(type(instr))
    if handler is None:
        raise state.trap(f"{type(instr).__name__} is not an RVV or scalar instruction")
    handler(state, instr)
    return state


def run_rvv(program: Program, config: RvvConfig, init_mem: Optional[bytes] = None,
            max_steps: int = DEFAULT_MAX_STEPS, mem_size: int = DEFAULT_MEM_SIZE,
            trace: Optional[TraceWriter] = None) -> Tuple[RvvState, TraceStats]:
    state = RvvState(config, mem_size, init_mem)
    state.pc = program.entry
    counter = StatsCounter()
    length = len(program)

    while state.pc != length:
        if not 0 <= state.pc < length:
            raise SimTrap(state.pc, f"pc {state.pc} outside program of length {length}", state, counter.snapshot())
        if counter.dynamic_count >= max_steps:
            raise SimTimeout(max_steps, state, counter.snapshot())

        index = state.pc
        instr = program[index]
        try:
            if is_zoozve(instr):
                raise state.trap(f"{type(instr).__name__} is not an RVV or scalar instruction")
            step_rvv(state, instr)
        except SimTrap as e:
            e.stats = counter.snapshot()
            logger.debug("trap at %d: %s", index, e.cause)
            raise
        counter.count(instr)
        # a strip is a vsetvli driven by an application vector length
        if isinstance(instr, VSetVli) and instr.rs_avl != 0 and state.vl > 0:
            counter.strip_iterations += 1
        if trace is not None:
            trace.record(index, instr)

    stats = counter.snapshot()
    logger.debug("rvv run finished: %d instructions, %d strips", stats.dynamic_count, stats.strip_iterations)
    return state, stats
