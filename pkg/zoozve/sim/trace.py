"""
Observation helpers shared by both simulators: dynamic instruction counting,
the per-instruction trace stream and the final-state hex dump.
"""

from typing import IO, Iterable, Optional, Tuple

from ..isa.assembler import format_instr
from ..models import InstrClass
from ..schemas import TraceStats


class StatsCounter:
    def __init__(self):
        self.per_class = {c: 0 for c in InstrClass}
        self.dynamic_count = 0
        self.strip_iterations = 0

    def count(self, instr) -> None:
        self.per_class[instr.klass] += 1
        self.dynamic_count += 1

    def snapshot(self) -> TraceStats:
        return TraceStats(
            dynamic_count=self.dynamic_count,
            per_class=dict(self.per_class),
            strip_iterations=self.strip_iterations,
        )


class TraceWriter:
    """Streams one `index<TAB>disassembly<TAB>class` line per executed instruction."""

    def __init__(self, stream: IO[str]):
        self.stream = stream

    def record(self, index: int, instr) -> None:
        self.stream.write(f"{index}\t{format_instr(instr)}\t{instr.klass.value}\n")


def _hex_rows(blob: bytes, base: int, width: int = 32) -> Iterable[str]:
    for off in range(0, len(blob), width):
        yield f"  {base + off:08x}: {blob[off:off + width].hex()}"


def dump_state(state, mem_ranges: Iterable[Tuple[int, int]] = (),
               vreg_ranges: Iterable[Tuple[int, int]] = (),
               vlen_bytes: Optional[int] = None) -> str:
    """Hex dump of the selected memory ranges and register groups plus nonzero x registers."""
    vlen_bytes = vlen_bytes or state.config.vlen_bytes
    lines = [f"pc = {state.pc}"]
    nonzero = " ".join(f"x{i}={v}" for i, v in enumerate(state.x) if v)
    lines.append(f"x: {nonzero or 'all zero'}")

    for addr, length in mem_ranges:
        lines.append(f"mem [0x{addr:x}, +{length}):")
        lines.extend(_hex_rows(state.read_bytes(addr, length), addr))

    for head, tail in vreg_ranges:
        lines.append(f"v[{head},{tail}):")
        blob = state.vregs[head * vlen_bytes:tail * vlen_bytes].tobytes()
        for reg in range(tail - head):
            chunk = blob[reg * vlen_bytes:(reg + 1) * vlen_bytes]
            lines.append(f"  v{head + reg}: {chunk.hex()}")
    return "\n".join(lines) + "\n"
