"""
Two-pass assembler and disassembler for the Zoozve, scalar and RVV mnemonics.

Grammar: one instruction or label per line, `#` starts a comment, operands are
separated by commas. Labels (`name:`) resolve to absolute instruction indices;
branch targets may also be written as a plain integer index.
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from ..errors import AssemblyError, EncodingError
from ..models import ArithOp, BranchCond, MemWidth, ScalarOp
from .encoding import check_fields
from .instructions import (
    RVV_GROUP_OPERANDS, Branch, Jal, Li, Program, RvvArithVV, RvvArithVX, RvvGather,
    RvvLoad, RvvMvXS, RvvRedSum, RvvStore, ScalarArith, ScalarLoad, ScalarStore, Slli,
    VArithVV, VArithVX, VGather, VLoad, VRedSum, VScatter, VSetCsr, VSetVli, VStore,
)

logger = logging.getLogger(__name__)

# ===== Register names =====
XREGS = {f"x{i}": i for i in range(32)}
XREGS.update({
    "zero": 0, "ra": 1, "sp": 2, "gp": 3, "tp": 4,
    "t0": 5, "t1": 6, "t2": 7, "s0": 8, "fp": 8, "s1": 9,
    "a0": 10, "a1": 11, "a2": 12, "a3": 13, "a4": 14, "a5": 15, "a6": 16, "a7": 17,
    "s2": 18, "s3": 19, "s4": 20, "s5": 21, "s6": 22, "s7": 23,
    "s8": 24, "s9": 25, "s10": 26, "s11": 27,
    "t3": 28, "t4": 29, "t5": 30, "t6": 31,
})

LABEL_RE = re.compile(r"^([A-Za-z_.$][\w.$]*):\s*(.*)$")
MEM_RE = re.compile(r"^(.*)\((\w+)\)$")
VREG_RE = re.compile(r"^v(\d+)$")

# Operand kinds:
#   v  vector register      x  scalar register   i  immediate
#   t  branch target        m  offset(base)      e  element width (e8/e16/e32)
#   l  lmul (m1..m8)
MNEMONICS: Dict[str, Tuple[type, Tuple[Tuple[str, str], ...], dict]] = {
    "vle": (VLoad, (("v", "vd"), ("x", "rs_addr"), ("x", "rs_avl")), {}),
    "vse": (VStore, (("v", "vs3"), ("x", "rs_addr"), ("x", "rs_avl")), {}),
    "vredsum": (VRedSum, (("v", "vd"), ("v", "vs2"), ("x", "rs_avl")), {}),
    "vgather": (VGather, (("v", "vd"), ("v", "vs1"), ("v", "vs2"), ("x", "rs_avl")), {}),
    "vscatter": (VScatter, (("v", "vd"), ("v", "vs1"), ("v", "vs2"), ("x", "rs_avl")), {}),
    "vsetcsr": (VSetCsr, (("i", "csr_id"), ("x", "rs_value")), {}),

    "li": (Li, (("x", "rd"), ("i", "imm")), {}),
    "slli": (Slli, (("x", "rd"), ("x", "rs1"), ("i", "shamt")), {}),
    "jal": (Jal, (("x", "rd"), ("t", "target")), {}),

    "rvv.vsetvli": (VSetVli, (("x", "rd"), ("x", "rs_avl"), ("e", "vew"), ("l", "lmul")), {}),
    "rvv.vle": (RvvLoad, (("v", "vd"), ("x", "rs_addr")), {}),
    "rvv.vse": (RvvStore, (("v", "vs3"), ("x", "rs_addr")), {}),
    "rvv.vredsum": (RvvRedSum, (("v", "vd"), ("v", "vs2"), ("v", "vs1")), {}),
    "rvv.vrgather": (RvvGather, (("v", "vd"), ("v", "vs1"), ("v", "vs2")), {}),
    "rvv.vmv.x.s": (RvvMvXS, (("x", "rd"), ("v", "vs2")), {}),
}

for _op in ArithOp:
    MNEMONICS[f"v{_op.value}"] = (VArithVV, (("v", "vd"), ("v", "vs1"), ("v", "vs2"), ("x", "rs_avl")), {"op": _op})
    MNEMONICS[f"v{_op.value}.vx"] = (VArithVX, (("v", "vd"), ("v", "vs2"), ("x", "rs2"), ("x", "rs_avl")), {"op": _op})
    MNEMONICS[f"rvv.v{_op.value}"] = (RvvArithVV, (("v", "vd"), ("v", "vs1"), ("v", "vs2")), {"op": _op})
    MNEMONICS[f"rvv.v{_op.value}.vx"] = (RvvArithVX, (("v", "vd"), ("v", "vs2"), ("x", "rs2")), {"op": _op})
for _op in ScalarOp:
    MNEMONICS[_op.value] = (ScalarArith, (("x", "rd"), ("x", "rs1"), ("x", "rs2")), {"op": _op})
for _cond in BranchCond:
    MNEMONICS[_cond.value] = (Branch, (("x", "rs1"), ("x", "rs2"), ("t", "target")), {"cond": _cond})
for _width in MemWidth:
    MNEMONICS[f"l{_width.value}"] = (ScalarLoad, (("x", "rd"), ("m", "offset")), {"width": _width})
    MNEMONICS[f"s{_width.value}"] = (ScalarStore, (("x", "rs2"), ("m", "offset")), {"width": _width})

# accepted spellings that disassemble to the canonical mnemonic
ALIASES = {f"v{op.value}.vv": f"v{op.value}" for op in ArithOp}
ALIASES.update({f"rvv.v{op.value}.vv": f"rvv.v{op.value}" for op in ArithOp})

# (class, discriminator value) -> mnemonic
_MNEMONIC_OF = {(cls, next(iter(fixed.values()), None)): name for name, (cls, _, fixed) in MNEMONICS.items()}


def mnemonic_of(instr) -> str:
    fixed = [getattr(instr, a) for a in ("op", "cond", "width") if hasattr(instr, a)]
    return _MNEMONIC_OF[(type(instr), fixed[0] if fixed else None)]


# =================================================================
# Parsing
# =================================================================

def _split_lines(text: str) -> List[Tuple[int, Optional[str], str]]:
    """Return (line_no, label, body) for every non-empty line."""
    out = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label = None
        m = LABEL_RE.match(line)
        if m:
            label, line = m.group(1), m.group(2).strip()
        out.append((line_no, label, line))
    return out


def _parse_int(tok: str, line_no: int) -> int:
    try:
        return int(tok, 0)
    except ValueError:
        raise AssemblyError(line_no, f"malformed immediate '{tok}'")


def _parse_xreg(tok: str, line_no: int) -> int:
    if tok not in XREGS:
        raise AssemblyError(line_no, f"malformed scalar register '{tok}'")
    return XREGS[tok]


def _parse_vreg(tok: str, line_no: int) -> int:
    m = VREG_RE.match(tok)
    if not m:
        raise AssemblyError(line_no, f"malformed vector register '{tok}'")
    return int(m.group(1))


def _parse_operand(kind: str, tok: str, line_no: int, labels: Dict[str, int]):
    if kind == "v":
        return _parse_vreg(tok, line_no)
    if kind == "x":
        return _parse_xreg(tok, line_no)
    if kind == "i":
        return _parse_int(tok, line_no)
    if kind == "t":
        if re.fullmatch(r"-?\d+", tok):
            return int(tok)
        if tok not in labels:
            raise AssemblyError(line_no, f"unresolved label '{tok}'")
        return labels[tok]
    if kind == "e":
        m = re.fullmatch(r"e(8|16|32)", tok)
        if not m:
            raise AssemblyError(line_no, f"malformed element width '{tok}'")
        return int(m.group(1))
    if kind == "l":
        m = re.fullmatch(r"m(1|2|4|8)", tok)
        if not m:
            raise AssemblyError(line_no, f"malformed lmul '{tok}'")
        return int(m.group(1))
    raise AssertionError(kind)


def assemble(text: str) -> Program:
    lines = _split_lines(text)

    # pass 1: label table
    labels: Dict[str, int] = {}
    index = 0
    for line_no, label, body in lines:
        if label is not None:
            if label in labels:
                raise AssemblyError(line_no, f"duplicate label '{label}'")
            labels[label] = index
        if body:
            index += 1

    # pass 2: instructions
    instrs = []
    lmul = 1
    for line_no, _, body in lines:
        if not body:
            continue
        parts = body.split(None, 1)
        name = ALIASES.get(parts[0].lower(), parts[0].lower())
        if name not in MNEMONICS:
            raise AssemblyError(line_no, f"unknown mnemonic '{parts[0]}'")
        cls, kinds, fixed = MNEMONICS[name]

        operands = [t.strip() for t in parts[1].split(",")] if len(parts) > 1 else []
        if len(operands) != len(kinds):
            raise AssemblyError(line_no, f"{name} expects {len(kinds)} operands, got {len(operands)}")

        fields = dict(fixed)
        for (kind, attr), tok in zip(kinds, operands):
            if kind == "m":
                m = MEM_RE.match(tok)
                if not m:
                    raise AssemblyError(line_no, f"malformed memory operand '{tok}'")
                fields[attr] = _parse_int(m.group(1).strip() or "0", line_no)
                fields["rs1"] = _parse_xreg(m.group(2), line_no)
            else:
                fields[attr] = _parse_operand(kind, tok, line_no, labels)

        instr = cls(**fields)
        try:
            check_fields(instr)
        except EncodingError as e:
            raise AssemblyError(line_no, e.detail)

        if isinstance(instr, VSetVli):
            lmul = instr.lmul
        for attr in RVV_GROUP_OPERANDS.get(cls, ()):
            reg = getattr(instr, attr)
            if reg % lmul:
                raise AssemblyError(line_no, f"v{reg} is not aligned to lmul={lmul}")

        if isinstance(instr, (Branch, Jal)) and not 0 <= instr.target <= index:
            raise AssemblyError(line_no, f"branch target {instr.target} outside program of length {index}")
        instrs.append(instr)

    logger.debug("assembled %d instructions, %d labels", len(instrs), len(labels))
    return Program(tuple(instrs), labels)


# =================================================================
# Formatting
# =================================================================

def format_instr(instr, target_names: Optional[Dict[int, str]] = None) -> str:
    """Render one instruction in assembler syntax."""
    name = mnemonic_of(instr)
    _, kinds, _ = MNEMONICS[name]
    rendered = []
    for kind, attr in kinds:
        value = getattr(instr, attr)
        if kind == "v":
            rendered.append(f"v{value}")
        elif kind == "x":
            rendered.append(f"x{value}")
        elif kind == "t":
            rendered.append((target_names or {}).get(value, str(value)))
        elif kind == "m":
            rendered.append(f"{value}(x{instr.rs1})")
        elif kind == "e":
            rendered.append(f"e{value}")
        elif kind == "l":
            rendered.append(f"m{value}")
        else:
            rendered.append(str(int(value)))
    return f"{name} {', '.join(rendered)}"


def disassemble(program: Program) -> str:
    # one name per branch target; prefer the program's own labels
    names: Dict[int, str] = {}
    for label, index in sorted(program.labels.items()):
        names.setdefault(index, label)
    taken = set(program.labels)
    for instr in program:
        if isinstance(instr, (Branch, Jal)) and instr.target not in names:
            name = f"L{instr.target}"
            while name in taken:
                name += "_"
            names[instr.target] = name
            taken.add(name)

    lines = []
    for index, instr in enumerate(program):
        if index in names:
            lines.append(f"{names[index]}:")
        lines.append(f"    {format_instr(instr, names)}")
    if len(program) in names:
        lines.append(f"{names[len(program)]}:")
    return "\n".join(lines) + "\n"
