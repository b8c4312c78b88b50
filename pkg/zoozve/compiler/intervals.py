"""Live intervals over a split module, with delimiter-group forcing."""

from dataclasses import dataclass, replace
from typing import Dict, List, Optional

from ..isa.groups import group_size
from ..models import DelimiterKind
from ..schemas import VConfig
from .ir import DelimiterOp, IrModule, VecType, defined_values, used_values


@dataclass(frozen=True)
class LiveInterval:
    vreg: str
    start: int
    end: int
    group_id: Optional[int] = None
    group_rank: int = 0
    # physical registers the value occupies; 0 for scalar values
    size: int = 1

    def overlaps(self, other: "LiveInterval") -> bool:
        return self.start <= other.end and other.start <= self.end


def raw_live_intervals(module: IrModule, config: VConfig) -> List[LiveInterval]:
    """[definition, last use] per value; group membership comes from the enclosing delimiters."""
    vew = module.vew or config.vew_bits
    starts: Dict[str, int] = {}
    ends: Dict[str, int] = {}
    groups: Dict[str, tuple] = {}
    ranks: Dict[int, int] = {}
    current: List[int] = []

    for index, op in enumerate(module.ops):
        if isinstance(op, DelimiterOp):
            if op.kind == DelimiterKind.BEGIN:
                current.append(op.group_id)
            else:
                current.pop()
            continue
        for name in used_values(op):
            ends[name] = index
        for result in defined_values(op):
            starts[result] = ends[result] = index
            if current:
                g = current[-1]
                groups[result] = (g, ranks.get(g, 0))
                ranks[g] = ranks.get(g, 0) + 1

    intervals = []
    for name, start in starts.items():
        t = module.types[name]
        size = group_size(t.length, vew, config.vlen_bits) if isinstance(t, VecType) else 0
        group_id, rank = groups.get(name, (None, 0))
        intervals.append(LiveInterval(name, start, ends[name], group_id, rank, size))
    return intervals


def force_intervals(intervals: List[LiveInterval]) -> List[LiveInterval]:
    """Widen every group member to the union of its group, anchored at the first member's definition."""
    span: Dict[int, tuple] = {}
    for iv in intervals:
        if iv.group_id is None:
            continue
        lo, hi = span.get(iv.group_id, (iv.start, iv.end))
        span[iv.group_id] = (min(lo, iv.start), max(hi, iv.end))
    return [iv if iv.group_id is None else replace(iv, start=span[iv.group_id][0], end=span[iv.group_id][1])
            for iv in intervals]


def compute_live_intervals(module: IrModule, config: VConfig) -> List[LiveInterval]:
    return force_intervals(raw_live_intervals(module, config))
