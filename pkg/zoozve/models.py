import enum

"""
Enumerations shared across the toolchain.
"""


# =================================================================
# Enums - machine vocabulary
# =================================================================


# Element-wise operations shared by both vector ISAs
class ArithOp(str, enum.Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    AND = "and"
    OR = "or"
    XOR = "xor"
    SRA = "sra"
    SLL = "sll"


class InstrClass(str, enum.Enum):
    VECTOR_MEMORY = "vector-load/store"
    VECTOR_ARITH = "vector-arith"
    VECTOR_CONTROL = "vector-control"
    SCALAR = "scalar"


class Csr(enum.IntEnum):
    VEW_SELECT = 0
    INDEX_EXT = 1


# vsetcsr selector value -> element width in bits
VEW_BY_SELECTOR = {0: 8, 1: 16, 2: 32}
SELECTOR_BY_VEW = {v: k for k, v in VEW_BY_SELECTOR.items()}


class HazardKind(str, enum.Enum):
    RAW = "RAW"
    WAR = "WAR"
    WAW = "WAW"


# =================================================================
# Enums - compiler and benchmark
# =================================================================


class DelimiterKind(str, enum.Enum):
    BEGIN = "begin"
    END = "end"


class Isa(str, enum.Enum):
    ZOOZVE = "zoozve"
    RVV = "rvv"


class Kernel(str, enum.Enum):
    FFT = "fft"
    DOTPRODUCT = "dotproduct"
    AXPY = "axpy"


# =================================================================
# Enums - scalar subset
# =================================================================


class ScalarOp(str, enum.Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


class BranchCond(str, enum.Enum):
    NE = "bne"
    GE = "bge"


# scalar memory access width
class MemWidth(str, enum.Enum):
    WORD = "w"
    HALF = "h"
