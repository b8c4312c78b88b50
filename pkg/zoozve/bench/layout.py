"""
Memory layouts shared by the Zoozve and RVV versions of a kernel.

Regions are packed from DATA_BASE in declaration order, each aligned to 64
bytes, so both versions of a kernel read their inputs from and write their
outputs to identical addresses.
"""

import numpy as np
from dataclasses import dataclass, field
from typing import Dict, Iterable, Tuple

from ..compiler.lower import BUFFER_ALIGN, DATA_BASE
from ..sim.core import SIGNED


@dataclass(frozen=True)
class Region:
    name: str
    address: int
    length: int
    width: int
    # a 32-bit scalar cell rather than a vector buffer
    scalar: bool = False

    @property
    def size_bytes(self) -> int:
        return self.length * self.width // 8

    @property
    def end(self) -> int:
        return self.address + self.size_bytes


@dataclass
class KernelLayout:
    regions: Dict[str, Region] = field(default_factory=dict)
    # regions compared between the two ISAs and against the oracle
    outputs: Tuple[str, ...] = ()

    def add(self, name: str, length: int, width: int, scalar: bool = False) -> Region:
        cursor = max([DATA_BASE] + [r.end for r in self.regions.values()])
        address = -(-cursor // BUFFER_ALIGN) * BUFFER_ALIGN
        region = self.regions[name] = Region(name, address, length, width, scalar)
        return region

    def __getitem__(self, name: str) -> Region:
        return self.regions[name]

    @property
    def end(self) -> int:
        return max([DATA_BASE] + [r.end for r in self.regions.values()])

    def image(self, values: Dict[str, np.ndarray]) -> bytes:
        """Memory image holding each given region's values (other bytes zero)."""
        mem = np.zeros(self.end, dtype=np.uint8)
        for name, data in values.items():
            region = self.regions[name]
            raw = np.asarray(data).astype(SIGNED[region.width]).tobytes()
            if len(raw) != region.size_bytes:
                raise ValueError(f"{name}: expected {region.length} elements, got {len(np.asarray(data))}")
            mem[region.address:region.end] = np.frombuffer(raw, dtype=np.uint8)
        return mem.tobytes()

    def read(self, mem: np.ndarray, name: str) -> np.ndarray:
        region = self.regions[name]
        return mem[region.address:region.end].view(SIGNED[region.width]).copy()

    def read_outputs(self, mem: np.ndarray) -> Dict[str, np.ndarray]:
        return {name: self.read(mem, name) for name in self.outputs}

    def ranges(self, names: Iterable[str]) -> Tuple[Tuple[int, int], ...]:
        return tuple((self.regions[n].address, self.regions[n].size_bytes) for n in names)


@dataclass
class KernelBuild:
    """A generated kernel: its program, memory layout and constant tables."""
    program: object
    layout: KernelLayout
    config: object
    tables: Dict[str, np.ndarray] = field(default_factory=dict)
    # CompileResult of Zoozve kernels
    compiled: object = None

    def image(self, inputs: Dict[str, np.ndarray]) -> bytes:
        return self.layout.image({**self.tables, **inputs})
