"""
Grouped linear-scan register allocation.

Allocation units are whole delimiter groups: after interval forcing every
member of a group shares one [start, end], so the group is placed as a single
run of consecutive physical registers and member k lands at head + k. Units
are visited in (start, group id) order; at each start the units whose end lies
before it expire, and the new unit takes the lowest head whose run of the
required size is free. There is no spilling.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..errors import AllocationError
from ..schemas import RegisterGroup, VConfig
from .intervals import LiveInterval

logger = logging.getLogger(__name__)


@dataclass
class Unit:
    key: Tuple[int, str]
    group_id: Optional[int]
    start: int
    end: int
    members: List[LiveInterval]

    @property
    def size(self) -> int:
        return sum(m.size for m in self.members)


@dataclass
class Assignment:
    registers: Dict[str, int] = field(default_factory=dict)
    groups: Dict[int, RegisterGroup] = field(default_factory=dict)
    peak_pressure: int = 0

    def group_of(self, vreg: str, size: int = 1) -> RegisterGroup:
        head = self.registers[vreg]
        return RegisterGroup(head=head, tail=head + max(size, 1))


def _units(intervals: List[LiveInterval]) -> List[Unit]:
    units: Dict[tuple, Unit] = {}
    for iv in intervals:
        if iv.size == 0:
            continue
        # ungrouped vector values form a unit of their own
        key = (iv.group_id, "") if iv.group_id is not None else (-1, iv.vreg)
        unit = units.get(key)
        if unit is None:
            unit = units[key] = Unit(key, iv.group_id, iv.start, iv.end, [])
        unit.start = min(unit.start, iv.start)
        unit.end = max(unit.end, iv.end)
        unit.members.append(iv)
    for unit in units.values():
        unit.members.sort(key=lambda m: m.group_rank)
    return sorted(units.values(), key=lambda u: (u.start, u.key))


def _first_fit(active: List[Tuple[int, int, Unit]], size: int, num_vregs: int) -> Optional[int]:
    """Lowest head with `size` free registers; active is (head, tail, unit) sorted by head."""
    cursor = 0
    for head, tail, _ in active:
        if head - cursor >= size:
            return cursor
        cursor = max(cursor, tail)
    return cursor if num_vregs - cursor >= size else None


def allocate_grouped(intervals: List[LiveInterval], config: VConfig) -> Assignment:
    assignment = Assignment()
    active: List[Tuple[int, int, Unit]] = []

    for unit in _units(intervals):
        # expire units that died before this one starts
        active = [a for a in active if a[2].end >= unit.start]
        pressure = sum(a[1] - a[0] for a in active) + unit.size
        assignment.peak_pressure = max(assignment.peak_pressure, pressure)

        head = _first_fit(active, unit.size, config.num_vregs)
        if head is None:
            group = unit.group_id if unit.group_id is not None else -1
            raise AllocationError(group, unit.size, pressure, config.num_vregs)

        offset = head
        for member in unit.members:
            assignment.registers[member.vreg] = offset
            offset += member.size
        if unit.group_id is not None:
            assignment.groups[unit.group_id] = RegisterGroup(head=head, tail=head + unit.size)

        active.append((head, head + unit.size, unit))
        active.sort(key=lambda a: a[0])

    logger.info("allocated %d groups, peak pressure %d of %d registers",
                len(assignment.groups), assignment.peak_pressure, config.num_vregs)
    return assignment
