from .assembler import assemble, disassemble, format_instr
from .encoding import decode, encode
from .groups import compute_group, group_size
from .instructions import Program

__all__ = [
    "Program", "assemble", "compute_group", "decode", "disassemble",
    "encode", "format_instr", "group_size",
]
