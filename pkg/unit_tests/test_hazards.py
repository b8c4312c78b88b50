import pytest

from zoozve.errors import UnsupportedInputError
from zoozve.isa.assembler import assemble
from zoozve.isa.instructions import (
    Li, Program, VArithVV, VArithVX, VGather, VLoad, VRedSum, VScatter, VSetCsr, VStore,
)
from zoozve.models import VEW_BY_SELECTOR, ArithOp, HazardKind
from zoozve.schemas import RegisterGroup, VConfig
from zoozve.sim.hazards import build_hazard_graph, hazard_check

CONFIG = VConfig(vlen_bits=128, num_vregs=64, vew_bits=16)
AVL_REGS = {1: 0, 2: 5, 3: 17, 4: 40}


# ========== COMPARATOR ==========

def test_hazard_check_is_half_open_overlap():
    a = RegisterGroup(head=0, tail=4)
    assert hazard_check(a, RegisterGroup(head=3, tail=5))
    assert not hazard_check(a, RegisterGroup(head=4, tail=8))
    assert hazard_check(RegisterGroup(head=2, tail=3), a), "containment is an overlap"


def random_group(rng):
    head = int(rng.integers(0, 60))
    return RegisterGroup(head=head, tail=head + int(rng.integers(1, 9)))


def test_hazard_check_is_symmetric_and_reflexive(rng):
    """Agrees with register-set intersection in both argument orders; a group hazards with itself."""
    for _ in range(2000):
        a, b = random_group(rng), random_group(rng)
        shared = set(range(a.head, a.tail)) & set(range(b.head, b.tail))
        assert hazard_check(a, b) == hazard_check(b, a) == bool(shared), f"{a} {b}"
        assert hazard_check(a, a), f"{a} must hazard with itself"


# ========== ORACLE ==========

def element_registers(head, avl, vew):
    """Registers holding elements 0..avl-1 of a group, one element at a time."""
    return {head + (e * vew) // CONFIG.vlen_bits for e in range(avl)}


def to_end(head):
    return set(range(head, CONFIG.num_vregs))


def brute_force_access(instr, avl, vew):
    regs = lambda h: element_registers(h, avl, vew)
    if avl == 0:
        return set(), set()
    if isinstance(instr, VLoad):
        return set(), regs(instr.vd)
    if isinstance(instr, VStore):
        return regs(instr.vs3), set()
    if isinstance(instr, VArithVV):
        return regs(instr.vs1) | regs(instr.vs2), regs(instr.vd)
    if isinstance(instr, VArithVX):
        return regs(instr.vs2), regs(instr.vd)
    if isinstance(instr, VRedSum):
        return regs(instr.vs2), {instr.vd}
    if isinstance(instr, VGather):
        return to_end(instr.vs1) | regs(instr.vs2), regs(instr.vd)
    return regs(instr.vs1) | regs(instr.vs2), to_end(instr.vd)


def brute_force_edges(program, vew):
    accesses = {}
    for index, instr in enumerate(program):
        if hasattr(instr, "rs_avl") and not isinstance(instr, Li):
            accesses[index] = brute_force_access(instr, AVL_REGS[instr.rs_avl], vew)
    edges = set()
    for i in accesses:
        for j in accesses:
            if i >= j:
                continue
            (ri, wi), (rj, wj) = accesses[i], accesses[j]
            if wi & rj:
                edges.add((i, j, HazardKind.RAW))
            if ri & wj:
                edges.add((i, j, HazardKind.WAR))
            if wi & wj:
                edges.add((i, j, HazardKind.WAW))
    return edges


def random_program(rng):
    selector = int(rng.integers(3))
    instrs = [Li(reg, avl) for reg, avl in AVL_REGS.items()]
    instrs += [Li(5, selector), VSetCsr(0, 5)]
    for _ in range(20):
        kind = int(rng.integers(7))
        h = lambda: int(rng.integers(0, 24))
        avl = int(rng.integers(1, 5))
        if kind == 0:
            instrs.append(VLoad(h(), 6, avl))
        elif kind == 1:
            instrs.append(VStore(h(), 6, avl))
        elif kind == 2:
            instrs.append(VArithVV(ArithOp.ADD, h(), h(), h(), avl))
        elif kind == 3:
            instrs.append(VArithVX(ArithOp.MUL, h(), h(), 7, avl))
        elif kind == 4:
            instrs.append(VRedSum(h(), h(), avl))
        elif kind == 5:
            instrs.append(VGather(h(), h(), h(), avl))
        else:
            instrs.append(VScatter(h(), h(), h(), avl))
    return Program(tuple(instrs)), VEW_BY_SELECTOR[selector]


def test_graph_matches_element_expansion(rng):
    """Interval comparison equals the element-by-element oracle on 1000 random programs."""
    for _ in range(1000):
        program, vew = random_program(rng)
        graph = build_hazard_graph(program, CONFIG)
        expected = brute_force_edges(program, vew)
        assert set(graph.edges) == expected, f"hazard edges differ for {program.instrs}"


# ========== ANALYSIS INPUTS ==========

def test_edges_of_simple_chain():
    program = assemble("""
        li a0, 8
        li a1, 0x1000
        vle v0, a1, a0
        vadd v1, v0, v0, a0
        vse v1, a1, a0
        vle v0, a1, a0
    """)
    graph = build_hazard_graph(program, CONFIG)
    assert graph.edges_of_kind(HazardKind.RAW) == [(2, 3), (3, 4)]
    assert graph.edges_of_kind(HazardKind.WAR) == [(3, 5)]
    assert graph.edges_of_kind(HazardKind.WAW) == [(2, 5)]


def test_branches_need_annotations():
    program = assemble("""
        li a0, 8
    top:
        vle v0, a1, a0
        bne a0, zero, top
    """)
    with pytest.raises(UnsupportedInputError):
        build_hazard_graph(program, CONFIG)
    graph = build_hazard_graph(program, CONFIG, annotations={1: 8})
    assert graph.accesses[1].writes == (RegisterGroup(head=0, tail=1),)


def test_unknown_avl_is_unsupported():
    program = assemble("lw a0, 0(a1)\nvle v0, a1, a0\n")
    with pytest.raises(UnsupportedInputError):
        build_hazard_graph(program, CONFIG)


def test_avl_zero_has_no_edges():
    program = assemble("vle v0, a1, zero\nvse v0, a1, zero\n")
    assert not build_hazard_graph(program, CONFIG).edges
