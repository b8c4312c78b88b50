import pytest

from zoozve.compiler.builtins import largest_vector, render_catalog
from zoozve.compiler.ir import IrBuilder, SCALAR, VecType, parse_ir, print_module
from zoozve.compiler.split import split_intrinsics, split_lengths
from zoozve.errors import CapacityError, IrError
from zoozve.isa.groups import group_size
from zoozve.models import ArithOp, DelimiterKind
from zoozve.schemas import VConfig

SAXPY = """
; y = alpha * x + y
buffer @alpha : i32
buffer @x : <100 x i16>
buffer @y : <100 x i16> at 0x2000

%alpha = sload @alpha
%x = load <100 x i16> @x
%y = load <100 x i16> @y
%ax = mul.vx <100 x i16> %x, %alpha
%r = add.vv <100 x i16> %ax, %y
store <100 x i16> %r, @y
"""


# ========== PARSING ==========

def test_parse_module():
    module = parse_ir(SAXPY)
    assert list(module.buffers) == ["alpha", "x", "y"]
    assert module.buffers["y"].address == 0x2000
    assert module.buffers["alpha"].type == SCALAR
    assert module.vew == 16
    assert len(module) == 6
    assert module.types["r"] == VecType(100, 16)


def test_print_parse_round_trip():
    module = parse_ir(SAXPY)
    again = parse_ir(print_module(module))
    assert again.ops == module.ops
    assert again.buffers == module.buffers


@pytest.mark.parametrize("text,fragment", [
    ("%a = load <4 x i16> @nope\n", "unknown buffer"),
    ("buffer @b : <4 x i16>\n%a = load <8 x i16> @b\n", "overruns"),
    ("buffer @b : <4 x i16>\nstore <4 x i16> %a, @b\n", "undefined"),
    ("buffer @b : <4 x i16>\n%a = load <4 x i16> @b\n%a = add <4 x i16> %a, %a\n", "defined twice"),
    ("buffer @b : <4 x i16>\nbuffer @c : <4 x i32>\n%a = load <4 x i16> @b\n%c = load <4 x i32> @c\n", "mixed"),
    ("buffer @b : <4 x i16>\n%a = load <4 x i16> @b\n%s = redsum <4 x i16> %a\n", "redsum"),
    ("buffer @b : <4 x i16>\n%a = load <4 x i16> @b\n%c = frob <4 x i16> %a, %a\n", "unknown intrinsic"),
    ("buffer @b : <4 x i16> at 0x1001\n", "aligned"),
    ("delimiter g0 begin\n", "unclosed"),
    ("%k = const 0x800000000\n", "36-bit li immediate"),
    ("%k = const -0x800000001\n", "36-bit li immediate"),
])
def test_verify_errors(text, fragment):
    with pytest.raises(IrError) as exc:
        parse_ir(text)
    assert fragment in exc.value.detail, f"expected '{fragment}' in '{exc.value.detail}'"


def test_const_range_edges_verify():
    """Both ends of the signed li immediate are accepted as constants."""
    module = parse_ir("%hi = const 0x7FFFFFFFF\n%lo = const -0x800000000\n")
    assert [op.value for op in module.ops] == [2 ** 35 - 1, -(2 ** 35)]

    b = IrBuilder(vew=16)
    b.const(2 ** 35)
    with pytest.raises(IrError):
        b.build()


def test_verify_error_names_op_index():
    with pytest.raises(IrError) as exc:
        parse_ir("buffer @b : <4 x i16>\n%a = load <4 x i16> @b\nstore <2 x i16> %a, @b\n")
    assert exc.value.index == 1


# ========== BUILDER ==========

def test_builder_matches_parsed_module():
    b = IrBuilder(vew=16)
    b.buffer("alpha")
    b.buffer("x", 100)
    b.buffer("y", 100, 0x2000)
    alpha = b.sload("alpha", name="alpha")
    x, y = b.load("x", name="x"), b.load("y", name="y")
    ax = b.binary_vx(ArithOp.MUL, x, alpha, name="ax")
    b.store(b.binary(ArithOp.ADD, ax, y, name="r"), "y")
    assert print_module(b.build()) == print_module(parse_ir(SAXPY))


def test_builder_gather_takes_index_length():
    b = IrBuilder(vew=32)
    b.buffer("d", 64)
    b.buffer("i", 16)
    g = b.gather(b.load("d"), b.load("i"))
    assert b.length_of(g) == 16


# ========== SPLITTING ==========

def test_split_counts_match_register_groups(rng):
    """Each value splits into ceil(L * VEW / VLEN) members; the lengths add up to L."""
    for _ in range(300):
        vew = [8, 16, 32][int(rng.integers(3))]
        vlen = [128, 256, 512][int(rng.integers(3))]
        length = int(rng.integers(1, 300))
        config = VConfig(vlen_bits=vlen, num_vregs=4096, vew_bits=vew)

        b = IrBuilder(vew=vew)
        b.buffer("x", length)
        b.store(b.load("x", name="v"), "x")
        split = split_intrinsics(b.build(), config)

        members = [n for n in split.types if n.startswith("v.")]
        assert len(members) == group_size(length, vew, vlen), f"L={length} VEW={vew} VLEN={vlen}"
        assert sum(split.types[n].length for n in members) == length
        assert split_lengths(length, vlen // vew) == [split.types[n].length for n in members]


def test_split_brackets_every_op():
    split = split_intrinsics(parse_ir(SAXPY), VConfig(vlen_bits=512))
    assert split.is_split
    begins = [op for op in split.ops if getattr(op, "kind", None) == DelimiterKind.BEGIN]
    # sload is scalar and stays outside any group
    assert len(begins) == 5
    assert "x.3" in split.types and "x.4" not in split.types, "100 int16 elements take 4 registers"


def test_unsplittable_ops_keep_one_result():
    b = IrBuilder(vew=16)
    b.buffer("d", 70)
    b.buffer("o", 1)
    b.store(b.redsum(b.load("d", name="d"), name="s"), "o")
    split = split_intrinsics(b.build(), VConfig())
    text = print_module(split)
    assert "%s.0 = redsum <1 x i16> [%d.0, %d.1, %d.2]" in text


def test_gather_result_splits_into_members():
    """A 70-element gather defines one value per register, so an add can split over it."""
    b = IrBuilder(vew=16)
    b.buffer("d", 70)
    b.buffer("i", 70)
    g = b.gather(b.load("d", name="d"), b.load("i", name="i"), name="g")
    b.store(b.binary(ArithOp.ADD, g, g, name="t"), "d")
    split = split_intrinsics(b.build(), VConfig())

    text = print_module(split)
    assert "[%g.0, %g.1, %g.2] = gather <70 x i16> [%d.0, %d.1, %d.2], [%i.0, %i.1, %i.2]" in text
    assert [split.types[f"g.{j}"].length for j in range(3)] == [32, 32, 6]
    assert "%t.2 = add <6 x i16> %g.2, %g.2" in text
    assert parse_ir(text).types == split.types, "split text parses back to the same values"


def test_member_result_count_must_fit_the_type():
    text = """
buffer @d : <64 x i16>
%d = load <64 x i16> @d
[%g.0, %g.1, %g.2] = gather <64 x i16> %d, %d
"""
    with pytest.raises(IrError) as exc:
        parse_ir(text)
    assert "cannot be held in 3 registers" in str(exc.value)


def test_split_rejects_oversized_values():
    b = IrBuilder(vew=16)
    b.buffer("d", 32 * 2049)
    b.store(b.load("d"), "d")
    with pytest.raises(CapacityError):
        split_intrinsics(b.build(), VConfig())


def test_split_twice_is_an_error():
    split = split_intrinsics(parse_ir(SAXPY), VConfig())
    with pytest.raises(IrError):
        split_intrinsics(split, VConfig())


# ========== INTRINSIC CATALOG ==========

def test_catalog_lists_largest_vector_types():
    config = VConfig()
    assert largest_vector(config, 16) == 65536
    text = render_catalog(config)
    assert "<1..65536 x i16>  (32 elements per register)" in text
    assert "<1..131072 x i8>" in text
    assert "gather" in text and "mul.vx" in text
