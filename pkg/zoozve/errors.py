"""
Exception hierarchy for the toolchain.

Every error carries a human readable ``detail`` and the process exit code the
command line maps it to.
"""

from typing import Any, Optional


class ZoozveError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# =================================================================
# Command line / input errors
# =================================================================

class InputError(ZoozveError):
    """Missing or unreadable input, or a file with a bad header."""
    exit_code = 1


class UsageError(ZoozveError):
    """Invalid flag combination or configuration value."""
    exit_code = 2


class CorrectnessError(ZoozveError):
    """A benchmark output disagrees with its oracle."""
    exit_code = 3


# =================================================================
# isa-core
# =================================================================

class EncodingError(ZoozveError):
    pass


class DecodeError(ZoozveError):
    def __init__(self, word: int, reason: str):
        super().__init__(f"cannot decode 0x{word:016x}: {reason}")
        self.word = word


class AssemblyError(ZoozveError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


class CapacityError(ZoozveError):
    def __init__(self, head: int, size: int, num_vregs: int):
        super().__init__(
            f"register group at v{head} needs {size} registers "
            f"but only {max(num_vregs - head, 0)} remain (of {num_vregs})"
        )
        self.head = head
        self.size = size


# =================================================================
# Simulators
# =================================================================

class SimTrap(ZoozveError):
    exit_code = 4

    def __init__(self, index: int, cause: str, state: Any = None, stats: Any = None):
        super().__init__(f"trap at instruction {index}: {cause}")
        self.index = index
        self.cause = cause
        self.state = state
        self.stats = stats


class SimTimeout(ZoozveError):
    exit_code = 4

    def __init__(self, max_steps: int, state: Any = None, stats: Any = None):
        super().__init__(f"exceeded max_steps={max_steps}")
        self.max_steps = max_steps
        self.state = state
        self.stats = stats


class UnsupportedInputError(ZoozveError):
    pass


# =================================================================
# mini-compiler
# =================================================================

class IrError(ZoozveError):
    def __init__(self, index: Optional[int], reason: str):
        where = f"op {index}" if index is not None else "module"
        super().__init__(f"{where}: {reason}")
        self.index = index


class AllocationError(ZoozveError):
    def __init__(self, group: int, size: int, pressure: int, num_vregs: int):
        super().__init__(
            f"no run of {size} consecutive free registers for group g{group} "
            f"(peak pressure {pressure} of {num_vregs} registers)"
        )
        self.group = group
        self.size = size
        self.pressure = pressure


class StageError(ZoozveError):
    def __init__(self, stage: str, cause: ZoozveError):
        super().__init__(f"{stage}: {cause.detail}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
