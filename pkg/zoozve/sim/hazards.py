"""
Register-range hazard analysis.

Every vector instruction is reduced to the register groups it reads and
writes; two instructions depend on each other when any of their groups
overlap. This mirrors a bank of head/tail comparators whose outputs are
OR-reduced into one hazard signal.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..errors import UnsupportedInputError
from ..isa.groups import group_size
from ..isa.instructions import (
    Branch, Jal, Li, Program, ScalarArith, ScalarLoad, Slli, VArithVV, VArithVX, VGather,
    VLoad, VRedSum, VScatter, VSetCsr, VStore,
)
from ..models import VEW_BY_SELECTOR, Csr, HazardKind, ScalarOp
from ..schemas import RegisterGroup, VConfig
from .core import wrap64
from .machine import HEAD_BITS

logger = logging.getLogger(__name__)


VECTOR_TYPES = (VLoad, VStore, VArithVV, VArithVX, VRedSum, VGather, VScatter)


def hazard_check(a: RegisterGroup, b: RegisterGroup) -> bool:
    return a.head < b.tail and b.head < a.tail


@dataclass(frozen=True)
class Access:
    reads: Tuple[RegisterGroup, ...] = ()
    writes: Tuple[RegisterGroup, ...] = ()


@dataclass(frozen=True)
class HazardGraph:
    nodes: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int, HazardKind]]
    accesses: Dict[int, Access] = field(default_factory=dict)

    def edges_of_kind(self, kind: HazardKind) -> List[Tuple[int, int]]:
        return sorted((i, j) for i, j, k in self.edges if k == kind)


class _ConstTracker:
    """Constant propagation over the scalar registers of a straight-line program."""

    def __init__(self):
        self.x: Dict[int, Optional[int]] = {0: 0}

    def get(self, reg: int) -> Optional[int]:
        return 0 if reg == 0 else self.x.get(reg)

    def set(self, reg: int, value: Optional[int]) -> None:
        if reg:
            self.x[reg] = None if value is None else wrap64(value)

    def update(self, index: int, instr) -> None:
        if isinstance(instr, Li):
            self.set(instr.rd, instr.imm)
        elif isinstance(instr, ScalarArith):
            a, b = self.get(instr.rs1), self.get(instr.rs2)
            if a is None or b is None:
                self.set(instr.rd, None)
            else:
                self.set(instr.rd, {ScalarOp.ADD: a + b, ScalarOp.SUB: a - b, ScalarOp.MUL: a * b}[instr.op])
        elif isinstance(instr, Slli):
            a = self.get(instr.rs1)
            self.set(instr.rd, None if a is None else a << instr.shamt)
        elif isinstance(instr, ScalarLoad):
            self.set(instr.rd, None)
        elif isinstance(instr, Jal):
            self.set(instr.rd, index + 1)


def _group(head: int, count: int, vew: int, config: VConfig) -> RegisterGroup:
    return RegisterGroup(head=head, tail=head + group_size(count, vew, config.vlen_bits))


def _to_end(head: int, config: VConfig) -> RegisterGroup:
    # conservative extent for gather data and scatter destinations
    return RegisterGroup(head=head, tail=max(config.num_vregs, head + 1))


def instruction_access(instr, avl: int, vew: int, ext: int, config: VConfig) -> Access:
    """Register groups touched by one Zoozve instruction given its avl."""
    if avl == 0 or not isinstance(instr, VECTOR_TYPES):
        return Access()

    def h(reg):
        return (ext << HEAD_BITS) | reg

    if isinstance(instr, VLoad):
        return Access(writes=(_group(h(instr.vd), avl, vew, config),))
    if isinstance(instr, VStore):
        return Access(reads=(_group(h(instr.vs3), avl, vew, config),))
    if isinstance(instr, VArithVV):
        return Access(reads=(_group(h(instr.vs1), avl, vew, config), _group(h(instr.vs2), avl, vew, config)),
                      writes=(_group(h(instr.vd), avl, vew, config),))
    if isinstance(instr, VArithVX):
        return Access(reads=(_group(h(instr.vs2), avl, vew, config),),
                      writes=(_group(h(instr.vd), avl, vew, config),))
    if isinstance(instr, VRedSum):
        return Access(reads=(_group(h(instr.vs2), avl, vew, config),),
                      writes=(_group(h(instr.vd), 1, vew, config),))
    if isinstance(instr, VGather):
        return Access(reads=(_to_end(h(instr.vs1), config), _group(h(instr.vs2), avl, vew, config)),
                      writes=(_group(h(instr.vd), avl, vew, config),))
    if isinstance(instr, VScatter):
        return Access(reads=(_group(h(instr.vs1), avl, vew, config), _group(h(instr.vs2), avl, vew, config)),
                      writes=(_to_end(h(instr.vd), config),))
    return Access()


def build_hazard_graph(program: Program, config: VConfig,
                       annotations: Optional[Dict[int, int]] = None) -> HazardGraph:
    """
    RAW/WAR/WAW edges between every pair i < j of vector instructions.

    avl values come from constant propagation of li/add/sub/mul/slli, or from
    `annotations` (instruction index -> element count), which also makes
    programs with branches acceptable (they are then read in program order).
    """
    annotations = annotations or {}
    has_branches = any(isinstance(i, (Branch, Jal)) for i in program)
    if has_branches and not annotations:
        raise UnsupportedInputError("hazard analysis needs a straight-line program or avl annotations")

    consts = _ConstTracker()
    vew = config.vew_bits
    ext = 0
    accesses: Dict[int, Access] = {}

    for index, instr in enumerate(program):
        if isinstance(instr, VSetCsr):
            value = consts.get(instr.rs_value)
            if value is None:
                raise UnsupportedInputError(f"instruction {index}: vsetcsr value is not a known constant")
            if instr.csr_id == Csr.VEW_SELECT and value in VEW_BY_SELECTOR:
                vew = VEW_BY_SELECTOR[value]
            elif instr.csr_id == Csr.INDEX_EXT:
                ext = value
        elif isinstance(instr, VECTOR_TYPES):
            avl = annotations.get(index, consts.get(instr.rs_avl))
            if avl is None:
                raise UnsupportedInputError(f"instruction {index}: avl in x{instr.rs_avl} is not statically known")
            accesses[index] = instruction_access(instr, max(avl, 0), vew, ext, config)
        consts.update(index, instr)

    edges = set()
    order = sorted(accesses)
    for pos, i in enumerate(order):
        a = accesses[i]
        for j in order[pos + 1:]:
            b = accesses[j]
            if any(hazard_check(w, r) for w in a.writes for r in b.reads):
                edges.add((i, j, HazardKind.RAW))
            if any(hazard_check(r, w) for r in a.reads for w in b.writes):
                edges.add((i, j, HazardKind.WAR))
            if any(hazard_check(w1, w2) for w1 in a.writes for w2 in b.writes):
                edges.add((i, j, HazardKind.WAW))

    logger.debug("hazard graph: %d nodes, %d edges", len(program), len(edges))
    return HazardGraph(tuple(range(len(program))), frozenset(edges), accesses)
