import os

from ..errors import InputError
from ..isa.assembler import assemble
from ..isa.binfile import read_program
from ..isa.instructions import Program

"""
File helpers shared by the subcommands; every OS error becomes an InputError
naming the path."""

ASM_SUFFIXES = (".s", ".asm")


def read_text(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")


def read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")


def write_text(path: str, text: str) -> None:
    try:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w") as f:
            f.write(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}")


def load_program(path: str) -> Program:
    """Assemble a text program or decode a binary one, chosen by suffix."""
    if path.endswith(ASM_SUFFIXES):
        return assemble(read_text(path))
    return read_program(path)


def replace_suffix(path: str, suffix: str) -> str:
    return os.path.splitext(path)[0] + suffix
