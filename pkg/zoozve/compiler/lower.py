"""
Lowering of an allocated split module to Zoozve assembly.

`lower` produces one SplitInstr per split op: a Zoozve instruction whose
vector fields hold the assigned physical registers, annotated with its element
count, byte address and scalar operand. Scalar registers are only chosen by
`materialize`, after coalescing, so both the split and the coalesced
sequences become complete programs.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Tuple

from ..errors import IrError
from ..isa.instructions import (
    Li, Program, ScalarLoad, VArithVV, VArithVX, VGather, VLoad, VRedSum, VScatter,
    VSetCsr, VStore,
)
from ..models import SELECTOR_BY_VEW, Csr, DelimiterKind, MemWidth
from .ir import (
    BinaryOp, BinaryVxOp, Buffer, ConstOp, DelimiterOp, GatherOp, IrModule, LoadOp,
    RedSumOp, ScatterOp, SLoadOp, StoreOp,
)
from .regalloc import Assignment

logger = logging.getLogger(__name__)

DATA_BASE = 0x1000
BUFFER_ALIGN = 64
SELECTOR_REG = 31
FIRST_CACHE_REG = 1
LAST_SCALAR_REG = 30


@dataclass(frozen=True)
class SplitInstr:
    instr: object
    count: int = 0
    address: Optional[int] = None
    scalar: Optional[str] = None
    groups: Tuple[int, ...] = ()


def layout_buffers(buffers: Dict[str, Buffer]) -> Dict[str, int]:
    """Byte address of every buffer; buffers without one are packed after DATA_BASE."""
    addresses = {name: b.address for name, b in buffers.items() if b.address is not None}
    cursor = max([DATA_BASE] + [b.address + b.size_bytes for b in buffers.values() if b.address is not None])
    for name, b in buffers.items():
        if b.address is None:
            cursor = -(-cursor // BUFFER_ALIGN) * BUFFER_ALIGN
            addresses[name] = cursor
            cursor += b.size_bytes
    return addresses


def _length(module: IrModule, operand) -> int:
    names = operand if isinstance(operand, tuple) else (operand,)
    return sum(module.types[n].length for n in names)


def _head(operand) -> str:
    return operand[0] if isinstance(operand, tuple) else operand


def lower(module: IrModule, assignment: Assignment) -> List[SplitInstr]:
    vew = module.vew
    layout = layout_buffers(module.buffers)
    reg = assignment.registers
    out: List[SplitInstr] = []
    groups: List[int] = []

    for op in module.ops:
        tag = tuple(groups[-1:])
        if isinstance(op, DelimiterOp):
            if op.kind == DelimiterKind.BEGIN:
                groups.append(op.group_id)
            else:
                groups.pop()
        elif isinstance(op, LoadOp):
            addr = layout[op.buffer] + op.offset * vew // 8
            out.append(SplitInstr(VLoad(reg[op.result], 0, 0), op.type.length, addr, groups=tag))
        elif isinstance(op, StoreOp):
            addr = layout[op.buffer] + op.offset * vew // 8
            out.append(SplitInstr(VStore(reg[op.value], 0, 0), op.type.length, addr, groups=tag))
        elif isinstance(op, BinaryOp):
            instr = VArithVV(op.op, reg[op.result], reg[op.lhs], reg[op.rhs], 0)
            out.append(SplitInstr(instr, op.type.length, groups=tag))
        elif isinstance(op, BinaryVxOp):
            instr = VArithVX(op.op, reg[op.result], reg[op.vec], 0, 0)
            out.append(SplitInstr(instr, op.type.length, scalar=op.scalar, groups=tag))
        elif isinstance(op, RedSumOp):
            instr = VRedSum(reg[op.result], reg[_head(op.operand)], 0)
            out.append(SplitInstr(instr, _length(module, op.operand), groups=tag))
        elif isinstance(op, GatherOp):
            instr = VGather(reg[_head(op.result)], reg[_head(op.data)], reg[_head(op.index)], 0)
            out.append(SplitInstr(instr, _length(module, op.index), groups=tag))
        elif isinstance(op, ScatterOp):
            instr = VScatter(reg[_head(op.result)], reg[_head(op.data)], reg[_head(op.index)], 0)
            out.append(SplitInstr(instr, _length(module, op.data), groups=tag))
        elif isinstance(op, ConstOp):
            out.append(SplitInstr(Li(0, op.value), scalar=op.result))
        elif isinstance(op, SLoadOp):
            out.append(SplitInstr(ScalarLoad(MemWidth.WORD, 0, 0, 0), address=layout[op.buffer], scalar=op.result))

    logger.debug("lowered %d ops to %d split instructions", len(module), len(out))
    return out


class ScalarRegisters:
    """
    Scalar register bookkeeping for materialization: IR scalar values are
    pinned from x30 downward, element counts and addresses are cached as
    constants in the remaining registers with least-recently-used eviction.
    """

    def __init__(self, scalar_values: List[str]):
        self.pinned = {name: LAST_SCALAR_REG - i for i, name in enumerate(scalar_values)}
        last_free = LAST_SCALAR_REG - len(self.pinned)
        if last_free - FIRST_CACHE_REG + 1 < 2:
            raise IrError(None, f"{len(self.pinned)} scalar values leave no registers for constants")
        self.free = list(range(FIRST_CACHE_REG, last_free + 1))
        self.cache: "OrderedDict[int, int]" = OrderedDict()

    def constant(self, value: int, out: list) -> int:
        if value in self.cache:
            self.cache.move_to_end(value)
            return self.cache[value]
        if self.free:
            r = self.free.pop(0)
        else:
            _, r = self.cache.popitem(last=False)
        self.cache[value] = r
        out.append(Li(r, value))
        return r


def materialize(instrs: List[SplitInstr], vew: int) -> Program:
    """Emit the vsetcsr prologue and the scalar setup for every split instruction."""
    scalars = [s.scalar for s in instrs if isinstance(s.instr, (Li, ScalarLoad))]
    regs = ScalarRegisters(scalars)
    out: list = [Li(SELECTOR_REG, SELECTOR_BY_VEW[vew]), VSetCsr(int(Csr.VEW_SELECT), SELECTOR_REG)]

    for s in instrs:
        instr = s.instr
        if isinstance(instr, Li):
            out.append(Li(regs.pinned[s.scalar], instr.imm))
        elif isinstance(instr, ScalarLoad):
            addr = regs.constant(s.address, out)
            out.append(ScalarLoad(MemWidth.WORD, regs.pinned[s.scalar], addr, 0))
        else:
            avl = regs.constant(s.count, out)
            fields = {"rs_avl": avl}
            if isinstance(instr, (VLoad, VStore)):
                fields["rs_addr"] = regs.constant(s.address, out)
            if isinstance(instr, VArithVX):
                fields["rs2"] = regs.pinned[s.scalar]
            out.append(replace(instr, **fields))
    return Program(tuple(out))


def direct_lower(instrs: List[SplitInstr]) -> List[SplitInstr]:
    """One wide instruction per delimiter group: head registers, total element count."""
    out: List[SplitInstr] = []
    for s in instrs:
        if out and s.groups and out[-1].groups == s.groups:
            prev = out[-1]
            out[-1] = replace(prev, count=prev.count + s.count)
        else:
            out.append(s)
    return out
