"""
State and semantics shared by both simulators: 32 scalar registers, flat
little-endian byte memory, the pc, the scalar subset and the element-wise
vector arithmetic.
"""

import numpy as np
from typing import Optional

from ..errors import SimTrap
from ..isa.instructions import Branch, Jal, Li, ScalarArith, ScalarLoad, ScalarStore, Slli
from ..models import ArithOp, BranchCond, MemWidth, ScalarOp

DEFAULT_MEM_SIZE = 16 * 1024 * 1024
DEFAULT_MAX_STEPS = 100_000_000

SIGNED = {8: np.dtype("<i1"), 16: np.dtype("<i2"), 32: np.dtype("<i4"), 64: np.dtype("<i8")}
UNSIGNED = {8: np.dtype("<u1"), 16: np.dtype("<u2"), 32: np.dtype("<u4"), 64: np.dtype("<u8")}
WIDTH_BYTES = {MemWidth.WORD: 4, MemWidth.HALF: 2}


def wrap64(v: int) -> int:
    return ((v + (1 << 63)) & ((1 << 64) - 1)) - (1 << 63)


def broadcast(value: int, dtype) -> np.ndarray:
    # truncate a 64-bit scalar to the element width (two's complement)
    return np.array(value, dtype=np.int64).astype(dtype)


class CoreState:
    def __init__(self, mem_size: int = DEFAULT_MEM_SIZE, init_mem: Optional[bytes] = None):
        self.x = [0] * 32
        self.mem = np.zeros(mem_size, dtype=np.uint8)
        if init_mem is not None:
            image = np.frombuffer(bytes(init_mem), dtype=np.uint8)
            if len(image) > mem_size:
                raise ValueError(f"memory image of {len(image)} bytes exceeds mem_size={mem_size}")
            self.mem[:len(image)] = image
        self.pc = 0

    def trap(self, cause: str) -> SimTrap:
        return SimTrap(self.pc, cause, self)

    def set_x(self, rd: int, value: int) -> None:
        if rd:
            self.x[rd] = wrap64(value)

    def avl(self, rs: int) -> int:
        value = self.x[rs]
        if value < 0:
            raise self.trap(f"negative vector length {value} in x{rs}")
        return value

    def mem_view(self, addr: int, count: int, width_bits: int) -> np.ndarray:
        """Little-endian view of count elements at addr; traps on bad access."""
        size = width_bits // 8
        if addr % size:
            raise self.trap(f"misaligned {width_bits}-bit access at 0x{addr:x}")
        if addr < 0 or addr + count * size > len(self.mem):
            raise self.trap(f"memory access [0x{addr:x}, +{count * size}) out of bounds")
        return self.mem[addr:addr + count * size].view(SIGNED[width_bits])

    def read_bytes(self, addr: int, length: int) -> bytes:
        return self.mem[addr:addr + length].tobytes()


# =================================================================
# Element-wise vector arithmetic
# =================================================================

def vector_op(op: ArithOp, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a op b elementwise with wraparound; shifts use the low log2(VEW) bits of b."""
    if op == ArithOp.ADD:
        return a + b
    if op == ArithOp.SUB:
        return a - b
    if op == ArithOp.MUL:
        return a * b
    if op == ArithOp.AND:
        return a & b
    if op == ArithOp.OR:
        return a | b
    if op == ArithOp.XOR:
        return a ^ b

    bits = a.dtype.itemsize * 8
    shamt = (b & (bits - 1)).astype(UNSIGNED[bits])
    if op == ArithOp.SRA:
        return a >> shamt.astype(a.dtype)
    # sll in the unsigned domain so bits shifted past the top are dropped
    return (np.ascontiguousarray(a).view(UNSIGNED[bits]) << shamt).view(a.dtype)


def reduce_sum(values: np.ndarray, dtype) -> int:
    # int64 accumulation, wrapped back to the element width
    return int(broadcast(int(values.astype(np.int64).sum()), dtype))


# =================================================================
# Scalar subset
# =================================================================

def _scalar_arith(state: CoreState, instr: ScalarArith) -> None:
    a, b = state.x[instr.rs1], state.x[instr.rs2]
    if instr.op == ScalarOp.ADD:
        state.set_x(instr.rd, a + b)
    elif instr.op == ScalarOp.SUB:
        state.set_x(instr.rd, a - b)
    else:
        state.set_x(instr.rd, a * b)
    state.pc += 1


def _li(state: CoreState, instr: Li) -> None:
    state.set_x(instr.rd, instr.imm)
    state.pc += 1


def _slli(state: CoreState, instr: Slli) -> None:
    state.set_x(instr.rd, state.x[instr.rs1] << instr.shamt)
    state.pc += 1


def _branch(state: CoreState, instr: Branch) -> None:
    a, b = state.x[instr.rs1], state.x[instr.rs2]
    taken = a != b if instr.cond == BranchCond.NE else a >= b
    state.pc = instr.target if taken else state.pc + 1


def _jal(state: CoreState, instr: Jal) -> None:
    state.set_x(instr.rd, state.pc + 1)
    state.pc = instr.target


def _scalar_load(state: CoreState, instr: ScalarLoad) -> None:
    width = WIDTH_BYTES[instr.width] * 8
    view = state.mem_view(state.x[instr.rs1] + instr.offset, 1, width)
    state.set_x(instr.rd, int(view[0]))
    state.pc += 1


def _scalar_store(state: CoreState, instr: ScalarStore) -> None:
    width = WIDTH_BYTES[instr.width] * 8
    view = state.mem_view(state.x[instr.rs1] + instr.offset, 1, width)
    view[0] = broadcast(state.x[instr.rs2], SIGNED[width])
    state.pc += 1


SCALAR_HANDLERS = {
    Li: _li,
    ScalarArith: _scalar_arith,
    Slli: _slli,
    Branch: _branch,
    Jal: _jal,
    ScalarLoad: _scalar_load,
    ScalarStore: _scalar_store,
}
