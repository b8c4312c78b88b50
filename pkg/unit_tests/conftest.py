import numpy as np
import pytest

from zoozve.compiler.ir import IrBuilder
from zoozve.compiler.lower import layout_buffers
from zoozve.models import ArithOp
from zoozve.schemas import RvvConfig, VConfig


@pytest.fixture
def rng():
    """Seeded generator so every randomized test is reproducible."""
    return np.random.default_rng(1234)


@pytest.fixture
def small_config():
    """A 128-bit, 64-register machine: 8 int16 elements per register."""
    return VConfig(vlen_bits=128, num_vregs=64, vew_bits=16)


@pytest.fixture
def zoozve_config():
    return VConfig()


@pytest.fixture
def rvv_config():
    return RvvConfig(vlen_bits=512, vew_bits=16, lmul=1)


ELEMENTWISE_OPS = [ArithOp.ADD, ArithOp.SUB, ArithOp.MUL, ArithOp.XOR, ArithOp.AND, ArithOp.OR]
VX_OPS = [ArithOp.ADD, ArithOp.MUL, ArithOp.SLL, ArithOp.SRA]


def random_module(rng, max_length=40, max_ops=8):
    """
    A verified straight-line module over one vector length L: loads, element-wise
    ops, vx ops, gathers and scatters through a permutation buffer, and a redsum.
    Returns (module, inputs) where inputs maps buffer name -> int16 values.
    """
    length = int(rng.integers(1, max_length + 1))
    b = IrBuilder(vew=16)
    for name in ("in0", "in1", "perm", "out0", "out1"):
        b.buffer(name, length)
    b.buffer("sum", 1)
    b.buffer("alpha")

    pool = [b.load("in0"), b.load("in1")]
    scalars = [b.const(int(rng.integers(-5, 6))), b.sload("alpha")]
    perm = None
    for _ in range(int(rng.integers(1, max_ops + 1))):
        kind = int(rng.integers(6))
        pick = lambda: pool[int(rng.integers(len(pool)))]
        if kind == 0:
            pool.append(b.load(["in0", "in1"][int(rng.integers(2))]))
        elif kind in (1, 2):
            pool.append(b.binary(ELEMENTWISE_OPS[int(rng.integers(len(ELEMENTWISE_OPS)))], pick(), pick()))
        elif kind == 3:
            op = VX_OPS[int(rng.integers(len(VX_OPS)))]
            pool.append(b.binary_vx(op, pick(), scalars[int(rng.integers(len(scalars)))]))
        else:
            perm = perm or b.load("perm")
            if kind == 4:
                pool.append(b.gather(pick(), perm))
            else:
                pool.append(b.scatter(pick(), perm, length))

    b.store(pool[-1], "out0")
    b.store(pool[int(rng.integers(len(pool)))], "out1")
    b.store(b.redsum(pool[int(rng.integers(len(pool)))]), "sum")

    inputs = {
        "in0": rng.integers(-1000, 1000, size=length).astype(np.int16),
        "in1": rng.integers(-1000, 1000, size=length).astype(np.int16),
        "perm": rng.permutation(length).astype(np.int16),
        "alpha": np.array([int(rng.integers(-7, 8))], dtype=np.int32),
    }
    return b.build(), inputs


def module_image(module, inputs):
    """Memory image with each input written at its buffer's laid-out address."""
    addresses = layout_buffers(module.buffers)
    mem = np.zeros(0x4000, dtype=np.uint8)
    for name, values in inputs.items():
        raw = values.tobytes()
        mem[addresses[name]:addresses[name] + len(raw)] = np.frombuffer(raw, dtype=np.uint8)
    return mem.tobytes()


@pytest.fixture
def module_factory(rng):
    """Yields random_module bound to the seeded generator."""
    return lambda **kw: random_module(rng, **kw)


@pytest.fixture
def image_of():
    return module_image


@pytest.fixture
def compile_config():
    """8 int16 elements per register and room for every random module."""
    return VConfig(vlen_bits=128, num_vregs=256, vew_bits=16)
