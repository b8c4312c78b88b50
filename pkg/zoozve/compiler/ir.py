"""
SSA intrinsic IR.

A module is a table of memory buffers plus a straight-line list of ops. Every
vector value carries an explicit type <L x iW>; one element width W is used
across the whole module. Split modules (after intrinsic splitting) add
delimiter pseudo-ops and let redsum/gather/scatter name whole register groups
as bracketed member lists, e.g.
`[%g.0, %g.1] = gather <64 x i16> [%d.0, %d.1], [%i.0, %i.1]`. A gather or
scatter result list defines one single-register value per member.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from ..errors import IrError
from ..isa.encoding import SCALAR_SLOTS
from ..models import ArithOp, DelimiterKind

logger = logging.getLogger(__name__)

VALID_VEWS = (8, 16, 32)
SCALAR_BITS = 32
# const values are materialized by a single li
LI_IMM_BITS = SCALAR_SLOTS["imm"][1]
CONST_RANGE = (-(1 << (LI_IMM_BITS - 1)), (1 << (LI_IMM_BITS - 1)) - 1)


# =================================================================
# Types, buffers and ops
# =================================================================

@dataclass(frozen=True)
class VecType:
    length: int
    vew: int

    def __str__(self) -> str:
        return f"<{self.length} x i{self.vew}>"


@dataclass(frozen=True)
class ScalarType:
    def __str__(self) -> str:
        return f"i{SCALAR_BITS}"


SCALAR = ScalarType()
IrType = Union[VecType, ScalarType]
# a value name, or the member list of a whole register group
Operand = Union[str, Tuple[str, ...]]


@dataclass(frozen=True)
class Buffer:
    name: str
    type: IrType
    address: Optional[int] = None

    @property
    def size_bytes(self) -> int:
        if isinstance(self.type, VecType):
            return self.type.length * self.type.vew // 8
        return SCALAR_BITS // 8


@dataclass(frozen=True)
class LoadOp:
    result: str
    type: VecType
    buffer: str
    offset: int = 0


@dataclass(frozen=True)
class StoreOp:
    value: str
    type: VecType
    buffer: str
    offset: int = 0


@dataclass(frozen=True)
class BinaryOp:
    result: str
    op: ArithOp
    type: VecType
    lhs: str
    rhs: str


@dataclass(frozen=True)
class BinaryVxOp:
    result: str
    op: ArithOp
    type: VecType
    vec: str
    scalar: str


@dataclass(frozen=True)
class ConstOp:
    result: str
    value: int


@dataclass(frozen=True)
class SLoadOp:
    result: str
    buffer: str


@dataclass(frozen=True)
class RedSumOp:
    result: str
    type: VecType
    operand: Operand


@dataclass(frozen=True)
class GatherOp:
    result: Operand
    type: VecType
    data: Operand
    index: Operand


@dataclass(frozen=True)
class ScatterOp:
    result: Operand
    type: VecType
    data: Operand
    index: Operand


@dataclass(frozen=True)
class DelimiterOp:
    group_id: int
    kind: DelimiterKind


IrOp = Union[LoadOp, StoreOp, BinaryOp, BinaryVxOp, ConstOp, SLoadOp, RedSumOp,
             GatherOp, ScatterOp, DelimiterOp]
UNSPLITTABLE = (RedSumOp, GatherOp, ScatterOp)


def _names(operand: Operand) -> Tuple[str, ...]:
    return operand if isinstance(operand, tuple) else (operand,)


def defined_values(op) -> Tuple[str, ...]:
    result = getattr(op, "result", None)
    return () if result is None else _names(result)


def member_lengths(length: int, count: int) -> Optional[List[int]]:
    """
    Per-register lengths of a `length`-element value held in `count` registers,
    all full but the last. Registers hold a power of two of elements, so the
    split is unique; None when no such split exists.
    """
    epr = 1
    while epr * count < length:
        epr *= 2
    lengths = [epr] * (length // epr) + ([length % epr] if length % epr else [])
    return lengths if len(lengths) == count else None


def used_values(op) -> Tuple[str, ...]:
    if isinstance(op, StoreOp):
        return (op.value,)
    if isinstance(op, BinaryOp):
        return (op.lhs, op.rhs)
    if isinstance(op, BinaryVxOp):
        return (op.vec, op.scalar)
    if isinstance(op, RedSumOp):
        return _names(op.operand)
    if isinstance(op, (GatherOp, ScatterOp)):
        return _names(op.data) + _names(op.index)
    return ()


@dataclass(frozen=True)
class IrModule:
    buffers: Dict[str, Buffer]
    ops: Tuple[IrOp, ...]
    types: Dict[str, IrType] = field(default_factory=dict, compare=False)

    @property
    def vew(self) -> Optional[int]:
        for t in self.types.values():
            if isinstance(t, VecType):
                return t.vew
        for b in self.buffers.values():
            if isinstance(b.type, VecType):
                return b.type.vew
        return None

    @property
    def is_split(self) -> bool:
        return any(isinstance(op, DelimiterOp) for op in self.ops)

    def __iter__(self) -> Iterator[IrOp]:
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def to_text(self) -> str:
        return print_module(self)


# =================================================================
# Verification
# =================================================================

def _operand_length(operand: Operand, types: Dict[str, IrType], index: int) -> int:
    total = 0
    for name in _names(operand):
        t = types[name]
        if not isinstance(t, VecType):
            raise IrError(index, f"{name} is not a vector value")
        total += t.length
    return total


def verify(buffers: Dict[str, Buffer], ops: List[IrOp]) -> IrModule:
    """Check SSA form, types, buffer bounds, one VEW per module and delimiter nesting."""
    types: Dict[str, IrType] = {}
    vews = {b.type.vew for b in buffers.values() if isinstance(b.type, VecType)}
    open_groups = set()
    seen_groups = set()

    for b in buffers.values():
        if isinstance(b.type, VecType) and (b.type.length < 1 or b.type.vew not in VALID_VEWS):
            raise IrError(None, f"buffer @{b.name} has invalid type {b.type}")
        align = b.type.vew // 8 if isinstance(b.type, VecType) else SCALAR_BITS // 8
        if b.address is not None and (b.address < 0 or b.address % align):
            raise IrError(None, f"buffer @{b.name} address 0x{b.address:x} is not {align}-byte aligned")

    for index, op in enumerate(ops):
        for name in used_values(op):
            if name not in types:
                raise IrError(index, f"use of undefined value %{name}")

        t = getattr(op, "type", None)
        if isinstance(t, VecType):
            if t.length < 1 or t.vew not in VALID_VEWS:
                raise IrError(index, f"invalid vector type {t}")
            vews.add(t.vew)
            if len(vews) > 1:
                raise IrError(index, f"mixed element widths {sorted(vews)} in one module")

        if isinstance(op, (LoadOp, StoreOp)):
            buf = buffers.get(op.buffer)
            if buf is None:
                raise IrError(index, f"unknown buffer @{op.buffer}")
            if not isinstance(buf.type, VecType):
                raise IrError(index, f"@{op.buffer} is a scalar buffer")
            if buf.type.vew != t.vew:
                raise IrError(index, f"type {t} does not match buffer @{op.buffer} {buf.type}")
            if op.offset < 0 or op.offset + t.length > buf.type.length:
                raise IrError(index, f"access of {t.length} elements at {op.offset} overruns @{op.buffer}")
            if isinstance(op, StoreOp) and types[op.value] != t:
                raise IrError(index, f"stored value %{op.value} has type {types[op.value]}, expected {t}")
        elif isinstance(op, BinaryOp):
            for name in (op.lhs, op.rhs):
                if types[name] != t:
                    raise IrError(index, f"operand %{name} has type {types[name]}, expected {t}")
        elif isinstance(op, BinaryVxOp):
            if types[op.vec] != t:
                raise IrError(index, f"operand %{op.vec} has type {types[op.vec]}, expected {t}")
            if types[op.scalar] != SCALAR:
                raise IrError(index, f"operand %{op.scalar} is not a scalar")
        elif isinstance(op, ConstOp):
            if not CONST_RANGE[0] <= op.value <= CONST_RANGE[1]:
                raise IrError(index, f"constant {op.value} does not fit the {LI_IMM_BITS}-bit li immediate")
        elif isinstance(op, SLoadOp):
            buf = buffers.get(op.buffer)
            if buf is None or buf.type != SCALAR:
                raise IrError(index, f"sload needs a scalar buffer, got @{op.buffer}")
        elif isinstance(op, RedSumOp):
            if t.length != 1:
                raise IrError(index, f"redsum produces <1 x i{t.vew}>, got {t}")
            _operand_length(op.operand, types, index)
        elif isinstance(op, GatherOp):
            _operand_length(op.data, types, index)
            if _operand_length(op.index, types, index) != t.length:
                raise IrError(index, f"gather result length must equal the index length")
        elif isinstance(op, ScatterOp):
            if _operand_length(op.data, types, index) != _operand_length(op.index, types, index):
                raise IrError(index, "scatter data and index lengths differ")
        elif isinstance(op, DelimiterOp):
            if op.kind == DelimiterKind.BEGIN:
                if op.group_id in open_groups or op.group_id in seen_groups:
                    raise IrError(index, f"group g{op.group_id} opened twice")
                open_groups.add(op.group_id)
                seen_groups.add(op.group_id)
            else:
                if op.group_id not in open_groups:
                    raise IrError(index, f"group g{op.group_id} closed without begin")
                open_groups.discard(op.group_id)

        results = defined_values(op)
        if isinstance(op, (GatherOp, ScatterOp)) and isinstance(op.result, tuple):
            lengths = member_lengths(t.length, len(results))
            if lengths is None:
                raise IrError(index, f"{t} cannot be held in {len(results)} registers")
            result_types = [VecType(n, t.vew) for n in lengths]
        else:
            result_types = [SCALAR if isinstance(op, (ConstOp, SLoadOp)) else t] * len(results)
        for result, rtype in zip(results, result_types):
            if result in types:
                raise IrError(index, f"value %{result} defined twice")
            types[result] = rtype

    if open_groups:
        raise IrError(None, f"unclosed delimiter groups {sorted(open_groups)}")
    return IrModule(dict(buffers), tuple(ops), types)


# =================================================================
# Text form
# =================================================================

NAME = r"%([\w.]+)"
TYPE_RE = re.compile(r"^<\s*(\d+)\s*x\s*i(\d+)\s*>$")
BUFFER_RE = re.compile(r"^buffer\s+@(\w+)\s*:\s*(<[^>]*>|i32)(?:\s+at\s+(\S+))?$")
BUFREF_RE = re.compile(r"^@(\w+)(?:\[(\d+)\])?$")
DELIM_RE = re.compile(r"^delimiter\s+g(\d+)\s+(begin|end)$")
STORE_RE = re.compile(r"^store\s+(<[^>]*>)\s+" + NAME + r"\s*,\s*(\S+)$")
DEF_RE = re.compile(r"^(\[[^\]]*\]|%[\w.]+)\s*=\s*([\w.]+)\s*(.*)$")
TYPED_RE = re.compile(r"^(<[^>]*>)\s*(.*)$")
OPERAND_RE = re.compile(r"\[[^\]]*\]|%[\w.]+|@[\w\[\]]+|-?\w+")


def _parse_type(text: str, index: Optional[int]) -> VecType:
    m = TYPE_RE.match(text.strip())
    if not m:
        raise IrError(index, f"malformed type '{text}'")
    return VecType(int(m.group(1)), int(m.group(2)))


def _parse_operand(text: str, index: int) -> Operand:
    text = text.strip()
    if text.startswith("["):
        names = [t.strip() for t in text[1:-1].split(",") if t.strip()]
        if not names or not all(n.startswith("%") for n in names):
            raise IrError(index, f"malformed group operand '{text}'")
        return tuple(n[1:] for n in names)
    if not re.fullmatch(NAME, text):
        raise IrError(index, f"malformed value '{text}'")
    return text[1:]


def _parse_bufref(text: str, index: int) -> Tuple[str, int]:
    m = BUFREF_RE.match(text.strip())
    if not m:
        raise IrError(index, f"malformed buffer reference '{text}'")
    return m.group(1), int(m.group(2) or 0)


def _value(operand: Operand, index: int) -> str:
    if isinstance(operand, tuple):
        raise IrError(index, "group operand not allowed here")
    return operand


def _parse_op(line: str, index: int) -> IrOp:
    m = DELIM_RE.match(line)
    if m:
        return DelimiterOp(int(m.group(1)), DelimiterKind(m.group(2)))

    m = STORE_RE.match(line)
    if m:
        buf, offset = _parse_bufref(m.group(3), index)
        return StoreOp(m.group(2), _parse_type(m.group(1), index), buf, offset)

    m = DEF_RE.match(line)
    if not m:
        raise IrError(index, f"cannot parse '{line}'")
    target, opcode, rest = _parse_operand(m.group(1), index), m.group(2), m.group(3).strip()
    if opcode in ("gather", "scatter"):
        result = target
    else:
        result = _value(target, index)

    if opcode == "const":
        try:
            return ConstOp(result, int(rest, 0))
        except ValueError:
            raise IrError(index, f"malformed constant '{rest}'")
    if opcode == "sload":
        buf, _ = _parse_bufref(rest, index)
        return SLoadOp(result, buf)

    tm = TYPED_RE.match(rest)
    if not tm:
        raise IrError(index, f"{opcode} needs a vector type")
    vtype = _parse_type(tm.group(1), index)
    args = OPERAND_RE.findall(tm.group(2))

    def expect(n):
        if len(args) != n:
            raise IrError(index, f"{opcode} expects {n} operands, got {len(args)}")

    if opcode == "load":
        expect(1)
        buf, offset = _parse_bufref(args[0], index)
        return LoadOp(result, vtype, buf, offset)
    if opcode == "redsum":
        expect(1)
        return RedSumOp(result, vtype, _parse_operand(args[0], index))
    if opcode in ("gather", "scatter"):
        expect(2)
        cls = GatherOp if opcode == "gather" else ScatterOp
        return cls(result, vtype, _parse_operand(args[0], index), _parse_operand(args[1], index))

    base, _, suffix = opcode.partition(".")
    try:
        arith = ArithOp(base)
    except ValueError:
        raise IrError(index, f"unknown intrinsic '{opcode}'")
    expect(2)
    lhs, rhs = _value(_parse_operand(args[0], index), index), _value(_parse_operand(args[1], index), index)
    if suffix == "vx":
        return BinaryVxOp(result, arith, vtype, lhs, rhs)
    if suffix in ("", "vv"):
        return BinaryOp(result, arith, vtype, lhs, rhs)
    raise IrError(index, f"unknown intrinsic '{opcode}'")


def parse_ir(text: str) -> IrModule:
    buffers: Dict[str, Buffer] = {}
    ops: List[IrOp] = []

    for raw in text.splitlines():
        line = re.split(r"[;#]", raw, 1)[0].strip()
        if not line:
            continue
        if line.startswith("buffer"):
            m = BUFFER_RE.match(line)
            if not m:
                raise IrError(None, f"malformed buffer declaration '{line}'")
            name = m.group(1)
            if name in buffers:
                raise IrError(None, f"buffer @{name} declared twice")
            btype = SCALAR if m.group(2) == "i32" else _parse_type(m.group(2), None)
            address = int(m.group(3), 0) if m.group(3) else None
            buffers[name] = Buffer(name, btype, address)
            continue
        ops.append(_parse_op(line, len(ops)))

    module = verify(buffers, ops)
    logger.debug("parsed IR module: %d buffers, %d ops", len(buffers), len(ops))
    return module


def _operand_text(operand: Operand) -> str:
    if isinstance(operand, tuple):
        return "[" + ", ".join(f"%{n}" for n in operand) + "]"
    return f"%{operand}"


def _bufref(name: str, offset: int) -> str:
    return f"@{name}[{offset}]" if offset else f"@{name}"


def format_op(op: IrOp) -> str:
    if isinstance(op, LoadOp):
        return f"%{op.result} = load {op.type} {_bufref(op.buffer, op.offset)}"
    if isinstance(op, StoreOp):
        return f"store {op.type} %{op.value}, {_bufref(op.buffer, op.offset)}"
    if isinstance(op, BinaryOp):
        return f"%{op.result} = {op.op.value} {op.type} %{op.lhs}, %{op.rhs}"
    if isinstance(op, BinaryVxOp):
        return f"%{op.result} = {op.op.value}.vx {op.type} %{op.vec}, %{op.scalar}"
    if isinstance(op, ConstOp):
        return f"%{op.result} = const {op.value}"
    if isinstance(op, SLoadOp):
        return f"%{op.result} = sload @{op.buffer}"
    if isinstance(op, RedSumOp):
        return f"%{op.result} = redsum {op.type} {_operand_text(op.operand)}"
    if isinstance(op, (GatherOp, ScatterOp)):
        name = "gather" if isinstance(op, GatherOp) else "scatter"
        return f"{_operand_text(op.result)} = {name} {op.type} {_operand_text(op.data)}, {_operand_text(op.index)}"
    return f"delimiter g{op.group_id} {op.kind.value}"


def print_module(module: IrModule) -> str:
    lines = []
    for b in module.buffers.values():
        at = f" at 0x{b.address:x}" if b.address is not None else ""
        lines.append(f"buffer @{b.name} : {b.type}{at}")
    depth = 0
    for op in module.ops:
        if isinstance(op, DelimiterOp) and op.kind == DelimiterKind.END:
            depth -= 1
        lines.append("  " * depth + format_op(op))
        if isinstance(op, DelimiterOp) and op.kind == DelimiterKind.BEGIN:
            depth += 1
    return "\n".join(lines) + "\n"


# =================================================================
# Programmatic construction
# =================================================================

class IrBuilder:
    """Builds a verified module from Python; value names are generated."""

    def __init__(self, vew: int):
        self.vew = vew
        self.buffers: Dict[str, Buffer] = {}
        self.ops: List[IrOp] = []
        self.types: Dict[str, IrType] = {}
        self._counter = 0

    def _fresh(self, hint: str) -> str:
        self._counter += 1
        return f"{hint}{self._counter}"

    def _vec(self, length: int) -> VecType:
        return VecType(length, self.vew)

    def _emit(self, op, result_type=None) -> Optional[str]:
        self.ops.append(op)
        result = getattr(op, "result", None)
        if result is not None:
            self.types[result] = result_type
        return result

    def buffer(self, name: str, length: Optional[int] = None, address: Optional[int] = None) -> str:
        """Declare a vector buffer of `length` elements, or a scalar one when length is None."""
        btype = SCALAR if length is None else self._vec(length)
        self.buffers[name] = Buffer(name, btype, address)
        return name

    def length_of(self, value: str) -> int:
        return self.types[value].length

    def load(self, buffer: str, length: Optional[int] = None, offset: int = 0, name: Optional[str] = None) -> str:
        length = length or self.buffers[buffer].type.length
        t = self._vec(length)
        return self._emit(LoadOp(name or self._fresh("v"), t, buffer, offset), t)

    def store(self, value: str, buffer: str, offset: int = 0) -> None:
        self._emit(StoreOp(value, self.types[value], buffer, offset))

    def binary(self, op: ArithOp, lhs: str, rhs: str, name: Optional[str] = None) -> str:
        t = self.types[lhs]
        return self._emit(BinaryOp(name or self._fresh("t"), ArithOp(op), t, lhs, rhs), t)

    def binary_vx(self, op: ArithOp, vec: str, scalar: str, name: Optional[str] = None) -> str:
        t = self.types[vec]
        return self._emit(BinaryVxOp(name or self._fresh("t"), ArithOp(op), t, vec, scalar), t)

    def const(self, value: int, name: Optional[str] = None) -> str:
        return self._emit(ConstOp(name or self._fresh("k"), value), SCALAR)

    def sload(self, buffer: str, name: Optional[str] = None) -> str:
        return self._emit(SLoadOp(name or self._fresh("k"), buffer), SCALAR)

    def redsum(self, value: str, name: Optional[str] = None) -> str:
        t = self._vec(1)
        return self._emit(RedSumOp(name or self._fresh("s"), t, value), t)

    def gather(self, data: str, index: str, name: Optional[str] = None) -> str:
        t = self._vec(self.length_of(index))
        return self._emit(GatherOp(name or self._fresh("g"), t, data, index), t)

    def scatter(self, data: str, index: str, dest_length: int, name: Optional[str] = None) -> str:
        t = self._vec(dest_length)
        return self._emit(ScatterOp(name or self._fresh("s"), t, data, index), t)

    def build(self) -> IrModule:
        return verify(self.buffers, self.ops)
