import struct
from typing import List

from ..errors import InputError
from .encoding import decode_program, encode_program
from .instructions import Program

"""
Binary program files: "ZOOZ", version u16, count u32, then little-endian
64-bit instruction words."""

MAGIC = b"ZOOZ"
VERSION = 1
HEADER = struct.Struct("<4sHI")


def pack_words(words: List[int]) -> bytes:
    return HEADER.pack(MAGIC, VERSION, len(words)) + struct.pack(f"<{len(words)}Q", *words)


def unpack_words(blob: bytes, source: str = "<bytes>") -> List[int]:
    if len(blob) < HEADER.size:
        raise InputError(f"{source}: truncated header")
    magic, version, count = HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise InputError(f"{source}: bad magic {magic!r}")
    if version != VERSION:
        raise InputError(f"{source}: unsupported version {version}")
    expected = HEADER.size + 8 * count
    if len(blob) != expected:
        raise InputError(f"{source}: expected {expected} bytes for {count} instructions, got {len(blob)}")
    return list(struct.unpack_from(f"<{count}Q", blob, HEADER.size))


def write_program(program: Program, path: str) -> None:
    with open(path, "wb") as f:
        f.write(pack_words(encode_program(program)))


def read_program(path: str) -> Program:
    try:
        with open(path, "rb") as f:
            blob = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    return decode_program(unpack_words(blob, path))
