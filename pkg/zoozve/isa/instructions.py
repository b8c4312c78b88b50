"""
Instruction vocabulary of both vector ISAs and the shared scalar subset.

Every instruction is a frozen dataclass, so instructions compare by value and
can be shared freely between threads. Zoozve vector operands are register
*heads* (13-bit indices, the group extends from the head as far as rs_avl
requires); RVV operands are 5-bit register numbers grouped by the current LMUL.
"""

from dataclasses import dataclass, field
from typing import ClassVar, Dict, Tuple, Union

from ..models import ArithOp, BranchCond, InstrClass, MemWidth, ScalarOp


# =================================================================
# Zoozve extension
# =================================================================

@dataclass(frozen=True)
class VLoad:
    vd: int
    rs_addr: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_MEMORY


@dataclass(frozen=True)
class VStore:
    vs3: int
    rs_addr: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_MEMORY


@dataclass(frozen=True)
class VArithVV:
    op: ArithOp
    vd: int
    vs1: int
    vs2: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


@dataclass(frozen=True)
class VArithVX:
    op: ArithOp
    vd: int
    vs2: int
    rs2: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


# vd[0] = sum(vs2[0:avl])
@dataclass(frozen=True)
class VRedSum:
    vd: int
    vs2: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


# vd[i] = vs1[vs2[i]] for i < avl
@dataclass(frozen=True)
class VGather:
    vd: int
    vs1: int
    vs2: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


# vd[vs2[i]] = vs1[i] for i < avl
@dataclass(frozen=True)
class VScatter:
    vd: int
    vs1: int
    vs2: int
    rs_avl: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


@dataclass(frozen=True)
class VSetCsr:
    csr_id: int
    rs_value: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_CONTROL


# =================================================================
# Scalar subset
# =================================================================

@dataclass(frozen=True)
class Li:
    rd: int
    imm: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


@dataclass(frozen=True)
class ScalarArith:
    op: ScalarOp
    rd: int
    rs1: int
    rs2: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


@dataclass(frozen=True)
class Slli:
    rd: int
    rs1: int
    shamt: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


# target is an absolute instruction index
@dataclass(frozen=True)
class Branch:
    cond: BranchCond
    rs1: int
    rs2: int
    target: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


@dataclass(frozen=True)
class Jal:
    rd: int
    target: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


@dataclass(frozen=True)
class ScalarLoad:
    width: MemWidth
    rd: int
    rs1: int
    offset: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


@dataclass(frozen=True)
class ScalarStore:
    width: MemWidth
    rs2: int
    rs1: int
    offset: int
    klass: ClassVar[InstrClass] = InstrClass.SCALAR


# =================================================================
# RVV baseline subset
# =================================================================

@dataclass(frozen=True)
class VSetVli:
    rd: int
    rs_avl: int
    vew: int
    lmul: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_CONTROL


@dataclass(frozen=True)
class RvvLoad:
    vd: int
    rs_addr: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_MEMORY


@dataclass(frozen=True)
class RvvStore:
    vs3: int
    rs_addr: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_MEMORY


@dataclass(frozen=True)
class RvvArithVV:
    op: ArithOp
    vd: int
    vs1: int
    vs2: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


@dataclass(frozen=True)
class RvvArithVX:
    op: ArithOp
    vd: int
    vs2: int
    rs2: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


# vd[0] = vs1[0] + sum(vs2[0:vl])
@dataclass(frozen=True)
class RvvRedSum:
    vd: int
    vs2: int
    vs1: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


# vd[i] = vs1[vs2[i]] (0 when the index is >= vlmax) for i < vl
@dataclass(frozen=True)
class RvvGather:
    vd: int
    vs1: int
    vs2: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


@dataclass(frozen=True)
class RvvMvXS:
    rd: int
    vs2: int
    klass: ClassVar[InstrClass] = InstrClass.VECTOR_ARITH


ZOOZVE_TYPES = (VLoad, VStore, VArithVV, VArithVX, VRedSum, VGather, VScatter, VSetCsr)
SCALAR_TYPES = (Li, ScalarArith, Slli, Branch, Jal, ScalarLoad, ScalarStore)
RVV_TYPES = (VSetVli, RvvLoad, RvvStore, RvvArithVV, RvvArithVX, RvvRedSum, RvvGather, RvvMvXS)

Instruction = Union[
    VLoad, VStore, VArithVV, VArithVX, VRedSum, VGather, VScatter, VSetCsr,
    Li, ScalarArith, Slli, Branch, Jal, ScalarLoad, ScalarStore,
    VSetVli, RvvLoad, RvvStore, RvvArithVV, RvvArithVX, RvvRedSum, RvvGather, RvvMvXS,
]


def is_zoozve(instr) -> bool:
    return isinstance(instr, ZOOZVE_TYPES)


def is_rvv(instr) -> bool:
    return isinstance(instr, RVV_TYPES)


def is_scalar(instr) -> bool:
    return isinstance(instr, SCALAR_TYPES)


@dataclass(frozen=True)
class Program:
    """Assembled instruction sequence with its label table."""
    instrs: Tuple[Instruction, ...]
    labels: Dict[str, int] = field(default_factory=dict)
    entry: int = 0

    def __len__(self) -> int:
        return len(self.instrs)

    def __iter__(self):
        return iter(self.instrs)

    def __getitem__(self, index):
        return self.instrs[index]

    def same_code(self, other: "Program") -> bool:
        # instruction-for-instruction identity, label names ignored
        return self.instrs == other.instrs and self.entry == other.entry


# RVV operands that name a LMUL register group (base must be lmul-aligned)
RVV_GROUP_OPERANDS = {
    RvvLoad: ("vd",),
    RvvStore: ("vs3",),
    RvvArithVV: ("vd", "vs1", "vs2"),
    RvvArithVX: ("vd", "vs2"),
    RvvRedSum: ("vs2",),
    RvvGather: ("vd", "vs1", "vs2"),
}
