from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from typing import Dict, Literal, Optional, Union

from .models import InstrClass, Isa, Kernel

"""
Pydantic models for the toolchain.
These models validate machine configurations and carry run statistics and
benchmark results between the simulators, the harness and the CLI."""


def _is_power_of_two(v: int) -> bool:
    return v > 0 and v & (v - 1) == 0


class VConfig(BaseModel):
    """Zoozve machine parameters."""
    model_config = ConfigDict(frozen=True)

    vlen_bits: int = Field(512, gt=0, description="Bit width of one vector register")
    num_vregs: int = Field(2048, ge=32, description="Vector register count")
    vew_bits: Literal[8, 16, 32] = Field(16, description="Element width held in CSR 0")

    @field_validator('vlen_bits')
    @classmethod
    def validate_vlen(cls, v):
        if not _is_power_of_two(v):
            raise ValueError('vlen_bits must be a power of two')
        if v % 8:
            raise ValueError('vlen_bits must be a multiple of 8')
        return v

    @model_validator(mode='after')
    def validate_element_fits(self):
        if self.vlen_bits < self.vew_bits:
            raise ValueError(f'vlen_bits={self.vlen_bits} is narrower than vew_bits={self.vew_bits}')
        return self

    @property
    def elements_per_register(self) -> int:
        return self.vlen_bits // self.vew_bits

    @property
    def vlen_bytes(self) -> int:
        return self.vlen_bits // 8

    def with_vew(self, vew_bits: int) -> "VConfig":
        return VConfig(vlen_bits=self.vlen_bits, num_vregs=self.num_vregs, vew_bits=vew_bits)


class RvvConfig(BaseModel):
    """Parameters of the simplified RVV baseline (32 architectural registers)."""
    model_config = ConfigDict(frozen=True)

    vlen_bits: int = Field(512, gt=0)
    vew_bits: Literal[8, 16, 32] = 16
    lmul: Literal[1, 2, 4, 8] = 1
    num_vregs: Literal[32] = 32

    @field_validator('vlen_bits')
    @classmethod
    def validate_vlen(cls, v):
        if not _is_power_of_two(v) or v % 8:
            raise ValueError('vlen_bits must be a power of two and a multiple of 8')
        return v

    @model_validator(mode='after')
    def validate_element_fits(self):
        if self.vlen_bits < self.vew_bits:
            raise ValueError(f'vlen_bits={self.vlen_bits} is narrower than vew_bits={self.vew_bits}')
        return self

    @property
    def elements_per_register(self) -> int:
        return self.vlen_bits // self.vew_bits

    @property
    def vlmax(self) -> int:
        # per-strip element capacity
        return self.lmul * self.vlen_bits // self.vew_bits

    @property
    def vlen_bytes(self) -> int:
        return self.vlen_bits // 8


class RegisterGroup(BaseModel):
    """Half-open run of physical vector registers [head, tail)."""
    model_config = ConfigDict(frozen=True)

    head: int = Field(ge=0)
    tail: int

    @model_validator(mode='after')
    def validate_non_empty(self):
        if self.tail <= self.head:
            raise ValueError(f'tail ({self.tail}) must be greater than head ({self.head})')
        return self

    @property
    def size(self) -> int:
        return self.tail - self.head

    def __str__(self) -> str:
        return f"v[{self.head},{self.tail})"


class TraceStats(BaseModel):
    """Dynamic instruction count and strip-mining iterations of one run."""
    model_config = ConfigDict(frozen=True)

    dynamic_count: int = Field(0, ge=0)
    per_class: Dict[InstrClass, int] = Field(default_factory=lambda: {c: 0 for c in InstrClass})
    strip_iterations: int = Field(0, ge=0)

    # dynamic_count must equal the sum of the class counters
    @model_validator(mode='after')
    def validate_class_sum(self):
        if sum(self.per_class.values()) != self.dynamic_count:
            raise ValueError('dynamic_count must equal the sum of per_class counts')
        return self


class BenchCase(BaseModel):
    model_config = ConfigDict(frozen=True)

    kernel: Kernel
    n: int = Field(gt=0, description="Problem size in elements (complex points for fft)")
    isa: Isa
    config: Union[VConfig, RvvConfig]
    seed: int = 0

    @model_validator(mode='after')
    def validate_case(self):
        if self.kernel == Kernel.FFT:
            if not _is_power_of_two(self.n) or not 32 <= self.n <= 2048:
                raise ValueError('fft size must be a power of two in [32, 2048]')
        elif not _is_power_of_two(self.n) or not 512 <= self.n <= 16384:
            raise ValueError(f'{self.kernel.value} size must be a power of two in [512, 16384]')

        expected = VConfig if self.isa == Isa.ZOOZVE else RvvConfig
        if not isinstance(self.config, expected):
            raise ValueError(f'{self.isa.value} cases need a {expected.__name__}')
        return self

    @property
    def key(self):
        return (self.kernel.value, self.n, self.isa.value, self.seed)


class BenchResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    case: BenchCase
    stats: TraceStats
    # rvv.dynamic_count / zoozve.dynamic_count; only set on paired runs
    speedup: Optional[float] = None
    correct: bool


class CliConfig(BaseModel):
    """Flags and config-file values of the command line, validated up front."""
    model_config = ConfigDict(frozen=True)

    vlen: int = 512
    vregs: int = 2048
    vew: Literal[8, 16, 32] = 16
    # unset: rvv runs use 1, bench kernels their own
    lmul: Optional[Literal[1, 2, 4, 8]] = None
    mem_size: int = Field(16 * 1024 * 1024, gt=0)
    max_steps: int = Field(100_000_000, gt=0)
    seed: int = 0
    outdir: str = "out"
    jobs: int = Field(1, ge=1)

    @model_validator(mode='after')
    def validate_machines(self):
        # surface VConfig/RvvConfig invariants before any work starts
        try:
            self.vconfig()
            self.rvv_config()
        except ValidationError as e:
            raise ValueError(e.errors()[0]["msg"])
        return self

    def vconfig(self) -> VConfig:
        return VConfig(vlen_bits=self.vlen, num_vregs=self.vregs, vew_bits=self.vew)

    def rvv_config(self) -> RvvConfig:
        return RvvConfig(vlen_bits=self.vlen, vew_bits=self.vew, lmul=self.lmul or 1)
