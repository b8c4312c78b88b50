"""
Functional simulator for Zoozve programs.

The vector register file is one flat byte array; a register group is the
slice starting at its head register, viewed as elements of the width held in
CSR 0. Every vector instruction reads its inputs in full before writing
(value semantics), leaves destination elements past avl untouched and counts
as one dynamic instruction even when avl is 0.
"""

import logging
import numpy as np
from typing import Optional, Tuple

from ..errors import SimTimeout, SimTrap
from ..isa.groups import group_size
from ..isa.instructions import (
    Program, VArithVV, VArithVX, VGather, VLoad, VRedSum, VScatter, VSetCsr, VStore,
    is_rvv,
)
from ..models import SELECTOR_BY_VEW, VEW_BY_SELECTOR, Csr
from ..schemas import TraceStats, VConfig
from .core import (
    DEFAULT_MAX_STEPS, DEFAULT_MEM_SIZE, SCALAR_HANDLERS, SIGNED, UNSIGNED, CoreState,
    broadcast, reduce_sum, vector_op,
)
from .trace import StatsCounter, TraceWriter

logger = logging.getLogger(__name__)

HEAD_BITS = 13


class MachineState(CoreState):
    def __init__(self, config: VConfig, mem_size: int = DEFAULT_MEM_SIZE,
                 init_mem: Optional[bytes] = None):
        super().__init__(mem_size, init_mem)
        self.config = config
        self.vregs = np.zeros(config.num_vregs * config.vlen_bytes, dtype=np.uint8)
        self.csrs = {Csr.VEW_SELECT: SELECTOR_BY_VEW[config.vew_bits], Csr.INDEX_EXT: 0}

    @property
    def vew(self) -> int:
        return VEW_BY_SELECTOR[self.csrs[Csr.VEW_SELECT]]

    @property
    def elements_per_register(self) -> int:
        return self.config.vlen_bits // self.vew

    def effective_head(self, head: int) -> int:
        return (self.csrs[Csr.INDEX_EXT] << HEAD_BITS) | head

    def capacity(self, head: int) -> int:
        """Elements between a head register and the end of the register file."""
        return max(self.config.num_vregs - self.effective_head(head), 0) * self.elements_per_register

    def group(self, head: int, count: int) -> np.ndarray:
        """Writable view of the first count elements of the group at head."""
        head = self.effective_head(head)
        vew = self.vew
        size = group_size(count, vew, self.config.vlen_bits)
        if head + size > self.config.num_vregs:
            raise self.trap(f"register group v{head}+{size} exceeds {self.config.num_vregs} registers")
        start = head * self.config.vlen_bytes
        return self.vregs[start:start + count * vew // 8].view(SIGNED[vew])

    def read_vector(self, head: int, count: int) -> np.ndarray:
        return self.group(head, count).copy()


# =================================================================
# Zoozve instruction semantics
# =================================================================

def _vload(state: MachineState, instr: VLoad) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        src = state.mem_view(state.x[instr.rs_addr], avl, state.vew)
        state.group(instr.vd, avl)[:] = src


def _vstore(state: MachineState, instr: VStore) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        src = state.read_vector(instr.vs3, avl)
        state.mem_view(state.x[instr.rs_addr], avl, state.vew)[:] = src


def _varith_vv(state: MachineState, instr: VArithVV) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        a = state.read_vector(instr.vs1, avl)
        b = state.read_vector(instr.vs2, avl)
        state.group(instr.vd, avl)[:] = vector_op(instr.op, a, b)


def _varith_vx(state: MachineState, instr: VArithVX) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        a = state.read_vector(instr.vs2, avl)
        b = broadcast(state.x[instr.rs2], a.dtype)
        state.group(instr.vd, avl)[:] = vector_op(instr.op, a, b)


def _vredsum(state: MachineState, instr: VRedSum) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        values = state.read_vector(instr.vs2, avl)
        state.group(instr.vd, 1)[0] = reduce_sum(values, values.dtype)


def _indices(state: MachineState, head: int, avl: int, capacity: int, what: str) -> np.ndarray:
    idx = state.read_vector(head, avl).view(UNSIGNED[state.vew]).astype(np.int64)
    bad = np.nonzero(idx >= capacity)[0]
    if len(bad):
        i = int(bad[0])
        raise state.trap(f"{what} index {int(idx[i])} at element {i} exceeds capacity {capacity}")
    return idx


def _vgather(state: MachineState, instr: VGather) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        idx = _indices(state, instr.vs2, avl, state.capacity(instr.vs1), "gather")
        data = state.read_vector(instr.vs1, int(idx.max()) + 1)
        state.group(instr.vd, avl)[:] = data[idx]


def _vscatter(state: MachineState, instr: VScatter) -> None:
    avl = state.avl(instr.rs_avl)
    if avl:
        idx = _indices(state, instr.vs2, avl, state.capacity(instr.vd), "scatter")
        data = state.read_vector(instr.vs1, avl)
        # duplicates: the highest source position wins
        _, last = np.unique(idx[::-1], return_index=True)
        keep = avl - 1 - last
        state.group(instr.vd, int(idx.max()) + 1)[idx[keep]] = data[keep]


def _vsetcsr(state: MachineState, instr: VSetCsr) -> None:
    value = state.x[instr.rs_value]
    if instr.csr_id == Csr.VEW_SELECT:
        if value not in VEW_BY_SELECTOR:
            raise state.trap(f"unsupported VEW selector {value}")
    elif instr.csr_id == Csr.INDEX_EXT:
        if value < 0:
            raise state.trap(f"negative register-index extension {value}")
    else:
        raise state.trap(f"unknown csr {instr.csr_id}")
    state.csrs[Csr(instr.csr_id)] = value
    state.pc += 1


def _advancing(handler):
    def run(state, instr):
        handler(state, instr)
        state.pc += 1
    return run


HANDLERS = {
    VLoad: _advancing(_vload),
    VStore: _advancing(_vstore),
    VArithVV: _advancing(_varith_vv),
    VArithVX: _advancing(_varith_vx),
    VRedSum: _advancing(_vredsum),
    VGather: _advancing(_vgather),
    VScatter: _advancing(_vscatter),
    VSetCsr: _vsetcsr,
    **SCALAR_HANDLERS,
}


def step(state: MachineState, instr) -> MachineState:
    """Execute one instruction in place and return the same state."""
    handler = HANDLERS.get(type(instr))
    if handler is None:
        raise state.trap(f"{type(instr).__name__} is not a Zoozve or scalar instruction")
    handler(state, instr)
    return state


def run(program: Program, config: VConfig, init_mem: Optional[bytes] = None,
        max_steps: int = DEFAULT_MAX_STEPS, mem_size: int = DEFAULT_MEM_SIZE,
        trace: Optional[TraceWriter] = None) -> Tuple[MachineState, TraceStats]:
    state = MachineState(config, mem_size, init_mem)
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
            if is_rvv(instr):
                raise state.trap(f"{type(instr).__name__} is not a Zoozve or scalar instruction")
            step(state, instr)
        except SimTrap as e:
            e.stats = counter.snapshot()
            logger.debug("trap at %d: %s", index, e.cause)
            raise
        counter.count(instr)
        if trace is not None:
            trace.record(index, instr)

    stats = counter.snapshot()
    logger.debug("zoozve run finished: %d instructions", stats.dynamic_count)
    return state, stats
