"""
64-bit binary encoding of every instruction.

Two flat formats, frozen in docs/isa.md:

    vector  opcode[6:0] funct[12:7] vd[25:13] vs1[38:26] vs2[51:39] rsA[56:52] rsB[61:57] pad[63:62]
    scalar  opcode[6:0] funct[12:7] rd[17:13] rs1[22:18] rs2[27:23] imm[63:28] (signed)

Each instruction variant is described once by a Form (opcode, funct and the
slot each attribute lives in); encode and decode are both driven by that
table, so they stay inverse to each other.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from ..errors import DecodeError, EncodingError
from ..models import ArithOp, BranchCond, MemWidth, ScalarOp
from .instructions import (
    Branch, Jal, Li, Program, RvvArithVV, RvvArithVX, RvvGather, RvvLoad, RvvMvXS,
    RvvRedSum, RvvStore, ScalarArith, ScalarLoad, ScalarStore, Slli, VArithVV,
    VArithVX, VGather, VLoad, VRedSum, VScatter, VSetCsr, VSetVli, VStore,
)

WORD_MASK = (1 << 64) - 1

# slot -> (shift, bits)
VECTOR_SLOTS = {"vd": (13, 13), "vs1": (26, 13), "vs2": (39, 13), "rsA": (52, 5), "rsB": (57, 5)}
SCALAR_SLOTS = {"rd": (13, 5), "rs1": (18, 5), "rs2": (23, 5), "imm": (28, 36)}
SIGNED_SLOTS = {"imm"}

# ===== Opcode regions =====
ZOOZVE_MEM = 0x0B      # custom-0
ZOOZVE_ARITH = 0x2B    # custom-1
ZOOZVE_CTRL = 0x5B     # custom-2
RVV_LOAD = 0x07        # LOAD-FP
RVV_STORE = 0x27       # STORE-FP
RVV_OPV = 0x57         # OP-V
OP_LOAD = 0x03
OP_IMM = 0x13
OP_STORE = 0x23
OP = 0x33
OP_BRANCH = 0x63
OP_JAL = 0x6F

VSETVLI_FUNCT = 63

# fields stored as small codes rather than their value
FIELD_CODES = {
    "vew": {8: 0, 16: 1, 32: 2},
    "lmul": {1: 0, 2: 1, 4: 2, 8: 3},
}

# attribute value ranges narrower than their slot
ATTR_RANGES = {
    "target": (0, (1 << 35) - 1),
    "shamt": (0, 63),
}


@dataclass(frozen=True)
class Form:
    cls: type
    opcode: int
    funct: int
    slots: Tuple[Tuple[str, str], ...]
    fixed: Tuple[Tuple[str, object], ...] = ()
    vector: bool = True
    # RVV register fields are 5 bits wide inside the 13-bit slots
    narrow: bool = False

    @property
    def mnemonic_key(self):
        return self.fixed[0][1] if self.fixed else None


def _build_forms() -> List[Form]:
    forms = [
        Form(VLoad, ZOOZVE_MEM, 0, (("vd", "vd"), ("rsA", "rs_addr"), ("rsB", "rs_avl"))),
        Form(VStore, ZOOZVE_MEM, 1, (("vd", "vs3"), ("rsA", "rs_addr"), ("rsB", "rs_avl"))),
        Form(VRedSum, ZOOZVE_ARITH, 16, (("vd", "vd"), ("vs2", "vs2"), ("rsB", "rs_avl"))),
        Form(VGather, ZOOZVE_ARITH, 17, (("vd", "vd"), ("vs1", "vs1"), ("vs2", "vs2"), ("rsB", "rs_avl"))),
        Form(VScatter, ZOOZVE_ARITH, 18, (("vd", "vd"), ("vs1", "vs1"), ("vs2", "vs2"), ("rsB", "rs_avl"))),
        Form(VSetCsr, ZOOZVE_CTRL, 0, (("vd", "csr_id"), ("rsA", "rs_value"))),

        Form(Li, OP_IMM, 0, (("rd", "rd"), ("imm", "imm")), vector=False),
        Form(Slli, OP_IMM, 1, (("rd", "rd"), ("rs1", "rs1"), ("imm", "shamt")), vector=False),
        Form(Jal, OP_JAL, 0, (("rd", "rd"), ("imm", "target")), vector=False),

        Form(VSetVli, RVV_OPV, VSETVLI_FUNCT,
             (("rsA", "rd"), ("rsB", "rs_avl"), ("vs1", "vew"), ("vs2", "lmul"))),
        Form(RvvLoad, RVV_LOAD, 0, (("vd", "vd"), ("rsA", "rs_addr")), narrow=True),
        Form(RvvStore, RVV_STORE, 0, (("vd", "vs3"), ("rsA", "rs_addr")), narrow=True),
        Form(RvvRedSum, RVV_OPV, 16, (("vd", "vd"), ("vs2", "vs2"), ("vs1", "vs1")), narrow=True),
        Form(RvvGather, RVV_OPV, 17, (("vd", "vd"), ("vs1", "vs1"), ("vs2", "vs2")), narrow=True),
        Form(RvvMvXS, RVV_OPV, 18, (("rsA", "rd"), ("vs2", "vs2")), narrow=True),
    ]

    for i, op in enumerate(ArithOp):
        forms.append(Form(VArithVV, ZOOZVE_ARITH, i,
                          (("vd", "vd"), ("vs1", "vs1"), ("vs2", "vs2"), ("rsB", "rs_avl")), (("op", op),)))
        forms.append(Form(VArithVX, ZOOZVE_ARITH, 8 + i,
                          (("vd", "vd"), ("vs2", "vs2"), ("rsA", "rs2"), ("rsB", "rs_avl")), (("op", op),)))
        forms.append(Form(RvvArithVV, RVV_OPV, i,
                          (("vd", "vd"), ("vs1", "vs1"), ("vs2", "vs2")), (("op", op),), narrow=True))
        forms.append(Form(RvvArithVX, RVV_OPV, 8 + i,
                          (("vd", "vd"), ("vs2", "vs2"), ("rsA", "rs2")), (("op", op),), narrow=True))

    for i, op in enumerate(ScalarOp):
        forms.append(Form(ScalarArith, OP, i, (("rd", "rd"), ("rs1", "rs1"), ("rs2", "rs2")),
                          (("op", op),), vector=False))
    for i, cond in enumerate(BranchCond):
        forms.append(Form(Branch, OP_BRANCH, i, (("rs1", "rs1"), ("rs2", "rs2"), ("imm", "target")),
                          (("cond", cond),), vector=False))
    for i, width in enumerate(MemWidth):
        forms.append(Form(ScalarLoad, OP_LOAD, i, (("rd", "rd"), ("rs1", "rs1"), ("imm", "offset")),
                          (("width", width),), vector=False))
        forms.append(Form(ScalarStore, OP_STORE, i, (("rs2", "rs2"), ("rs1", "rs1"), ("imm", "offset")),
                          (("width", width),), vector=False))
    return forms


FORMS = _build_forms()
_BY_VARIANT: Dict[tuple, Form] = {(f.cls, f.mnemonic_key): f for f in FORMS}
_BY_CODE: Dict[Tuple[int, int], Form] = {(f.opcode, f.funct): f for f in FORMS}
_DISCRIMINATOR = {f.cls: f.fixed[0][0] for f in FORMS if f.fixed}


def form_for(instr) -> Form:
    cls = type(instr)
    attr = _DISCRIMINATOR.get(cls)
    key = getattr(instr, attr) if attr else None
    form = _BY_VARIANT.get((cls, key))
    if form is None:
        raise EncodingError(f"no encoding for {instr!r}")
    return form


def _slot_range(form: Form, slot: str, attr: str) -> Tuple[int, int]:
    if attr in ATTR_RANGES:
        return ATTR_RANGES[attr]
    _, bits = (VECTOR_SLOTS if form.vector else SCALAR_SLOTS)[slot]
    if slot in SIGNED_SLOTS:
        return -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    if form.narrow and slot in ("vd", "vs1", "vs2"):
        bits = 5
    return 0, (1 << bits) - 1


def check_fields(instr) -> Form:
    """Raise EncodingError if any field is out of range; returns the form."""
    form = form_for(instr)
    for slot, attr in form.slots:
        value = getattr(instr, attr)
        if attr in FIELD_CODES:
            if value not in FIELD_CODES[attr]:
                raise EncodingError(f"{attr}={value} is not one of {sorted(FIELD_CODES[attr])}")
            continue
        if not isinstance(value, int) or isinstance(value, bool):
            raise EncodingError(f"{attr} must be an integer, got {value!r}")
        lo, hi = _slot_range(form, slot, attr)
        if not lo <= value <= hi:
            raise EncodingError(f"{attr}={value} outside [{lo}, {hi}] for {form.cls.__name__}")
    return form


def encode(instr) -> int:
    form = check_fields(instr)
    slots = VECTOR_SLOTS if form.vector else SCALAR_SLOTS
    word = form.opcode | (form.funct << 7)
    for slot, attr in form.slots:
        value = getattr(instr, attr)
        if attr in FIELD_CODES:
            value = FIELD_CODES[attr][value]
        shift, bits = slots[slot]
        word |= (value & ((1 << bits) - 1)) << shift
    return word


def _used_mask(form: Form) -> int:
    slots = VECTOR_SLOTS if form.vector else SCALAR_SLOTS
    mask = 0x1FFF
    for slot, _ in form.slots:
        shift, bits = slots[slot]
        mask |= ((1 << bits) - 1) << shift
    return mask


def decode(word: int) -> object:
    if not 0 <= word <= WORD_MASK:
        raise DecodeError(word & WORD_MASK, "not a 64-bit word")

    opcode = word & 0x7F
    funct = (word >> 7) & 0x3F
    form = _BY_CODE.get((opcode, funct))
    if form is None:
        raise DecodeError(word, f"undefined opcode 0x{opcode:02x} funct {funct}")
    if word & ~_used_mask(form) & WORD_MASK:
        raise DecodeError(word, "nonzero unused field")

    slots = VECTOR_SLOTS if form.vector else SCALAR_SLOTS
    fields = dict(form.fixed)
    for slot, attr in form.slots:
        shift, bits = slots[slot]
        value = (word >> shift) & ((1 << bits) - 1)
        if slot in SIGNED_SLOTS and value >> (bits - 1):
            value -= 1 << bits

        if attr in FIELD_CODES:
            reverse = {code: v for v, code in FIELD_CODES[attr].items()}
            if value not in reverse:
                raise DecodeError(word, f"invalid {attr} code {value}")
            value = reverse[value]
        else:
            lo, hi = _slot_range(form, slot, attr)
            if not lo <= value <= hi:
                raise DecodeError(word, f"{attr}={value} outside [{lo}, {hi}]")
        fields[attr] = value
    return form.cls(**fields)


def encode_program(program: Iterable) -> List[int]:
    return [encode(i) for i in program]


def decode_program(words: Iterable[int], labels: Optional[Dict[str, int]] = None) -> Program:
    return Program(tuple(decode(w) for w in words), dict(labels or {}))
