"""
Intrinsic splitting.

Every vector value of L elements becomes k = ceil(L * VEW / VLEN)
single-register values named `<value>.<j>`; split j holds elements
[j * epr, min((j + 1) * epr, L)). The splits of one op are bracketed by a
delimiter pair so the allocator places them in consecutive registers.
redsum, gather and scatter cannot be split (their element indices cross
register boundaries); they keep one result spanning the whole group and read
their operands as whole groups.
"""

import logging
from typing import Dict, List, Tuple

from ..errors import CapacityError, IrError
from ..isa.groups import group_size
from ..models import DelimiterKind
from ..schemas import VConfig
from .ir import (
    BinaryOp, BinaryVxOp, ConstOp, DelimiterOp, GatherOp, IrModule, LoadOp, RedSumOp,
    ScatterOp, SLoadOp, StoreOp, VecType, verify,
)

logger = logging.getLogger(__name__)


def split_lengths(length: int, epr: int) -> List[int]:
    """Element count of each split of a length-element value."""
    return [min(epr, length - start) for start in range(0, length, epr)]


def member_name(value: str, j: int) -> str:
    return f"{value}.{j}"


def split_intrinsics(module: IrModule, config: VConfig) -> IrModule:
    if module.is_split:
        raise IrError(None, "module is already split")
    vew = module.vew or config.vew_bits
    config = config.with_vew(vew)
    epr = config.elements_per_register

    # value -> names of its splits
    members: Dict[str, Tuple[str, ...]] = {}
    ops = []
    group_id = 0

    def check_capacity(t: VecType):
        size = group_size(t.length, vew, config.vlen_bits)
        if size > config.num_vregs:
            raise CapacityError(0, size, config.num_vregs)

    for op in module.ops:
        if isinstance(op, (ConstOp, SLoadOp)):
            ops.append(op)
            continue

        check_capacity(op.type)
        lengths = split_lengths(op.type.length, epr)
        body = []

        if isinstance(op, LoadOp):
            names = tuple(member_name(op.result, j) for j in range(len(lengths)))
            for j, n in enumerate(lengths):
                body.append(LoadOp(names[j], VecType(n, vew), op.buffer, op.offset + j * epr))
            members[op.result] = names
        elif isinstance(op, StoreOp):
            src = members[op.value]
            for j, n in enumerate(lengths):
                body.append(StoreOp(src[j], VecType(n, vew), op.buffer, op.offset + j * epr))
        elif isinstance(op, BinaryOp):
            names = tuple(member_name(op.result, j) for j in range(len(lengths)))
            lhs, rhs = members[op.lhs], members[op.rhs]
            for j, n in enumerate(lengths):
                body.append(BinaryOp(names[j], op.op, VecType(n, vew), lhs[j], rhs[j]))
            members[op.result] = names
        elif isinstance(op, BinaryVxOp):
            names = tuple(member_name(op.result, j) for j in range(len(lengths)))
            vec = members[op.vec]
            for j, n in enumerate(lengths):
                body.append(BinaryVxOp(names[j], op.op, VecType(n, vew), vec[j], op.scalar))
            members[op.result] = names
        elif isinstance(op, RedSumOp):
            result = member_name(op.result, 0)
            body.append(RedSumOp(result, op.type, members[op.operand]))
            members[op.result] = (result,)
        elif isinstance(op, (GatherOp, ScatterOp)):
            names = tuple(member_name(op.result, j) for j in range(len(lengths)))
            body.append(type(op)(names, op.type, members[op.data], members[op.index]))
            members[op.result] = names
        else:
            raise IrError(None, f"cannot split {type(op).__name__}")

        ops.append(DelimiterOp(group_id, DelimiterKind.BEGIN))
        ops.extend(body)
        ops.append(DelimiterOp(group_id, DelimiterKind.END))
        group_id += 1

    split = verify(module.buffers, ops)
    logger.info("split %d ops into %d (%d delimiter groups)", len(module), len(split), group_id)
    return split
