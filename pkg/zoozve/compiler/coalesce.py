"""
Assembly coalescing: merge runs of adjacent per-register instructions back
into one wide instruction.

A run grows while the next instruction has the same opcode and scalar
operand, every vector operand sits in the register right after the run's
last one, memory operands continue byte-contiguously, and the run's last
instruction fills its register. A candidate that reads a register the run
already writes ends the run, since the merged instruction reads all of its
inputs before writing.
"""

import logging
from dataclasses import replace
from typing import List

from ..isa.instructions import VArithVV, VArithVX, VLoad, VStore
from ..schemas import RegisterGroup
from ..sim.hazards import hazard_check
from .lower import SplitInstr

logger = logging.getLogger(__name__)

# element-wise instructions and their (written, read) vector operands
MERGEABLE = {
    VLoad: (("vd",), ()),
    VStore: ((), ("vs3",)),
    VArithVV: (("vd",), ("vs1", "vs2")),
    VArithVX: (("vd",), ("vs2",)),
}


def _registers(instr, attrs, size=1):
    return [RegisterGroup(head=getattr(instr, a), tail=getattr(instr, a) + size) for a in attrs]


def _extends(run: List[SplitInstr], cand: SplitInstr, epr: int, vew_bytes: int) -> bool:
    last, first = run[-1], run[0]
    a, b = last.instr, cand.instr
    if type(a) is not type(b) or type(b) not in MERGEABLE:
        return False
    if getattr(a, "op", None) != getattr(b, "op", None) or last.scalar != cand.scalar:
        return False
    if last.count != epr:
        return False

    writes, reads = MERGEABLE[type(b)]
    for attr in writes + reads:
        if getattr(b, attr) != getattr(a, attr) + 1:
            return False
    if last.address is not None and cand.address != last.address + last.count * vew_bytes:
        return False

    run_writes = _registers(first.instr, writes, len(run))
    return not any(hazard_check(w, r) for w in run_writes for r in _registers(b, reads))


def _merge(run: List[SplitInstr]) -> SplitInstr:
    if len(run) == 1:
        return run[0]
    groups = tuple(dict.fromkeys(g for s in run for g in s.groups))
    return replace(run[0], count=sum(s.count for s in run), groups=groups)


def coalesce(instrs: List[SplitInstr], epr: int, vew: int) -> List[SplitInstr]:
    out: List[SplitInstr] = []
    run: List[SplitInstr] = []
    for s in instrs:
        if run and _extends(run, s, epr, vew // 8):
            run.append(s)
            continue
        if run:
            out.append(_merge(run))
        run = [s]
    if run:
        out.append(_merge(run))

    logger.info("coalesced %d split instructions into %d", len(instrs), len(out))
    return out
