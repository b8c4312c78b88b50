import contextlib
import logging
from typing import List, Tuple

from ..errors import InputError, SimTimeout, SimTrap, UsageError
from ..models import Isa
from ..schemas import CliConfig
from ..sim.machine import run
from ..sim.rvv import run_rvv
from ..sim.trace import TraceWriter, dump_state
from .files import load_program, read_bytes, write_text

logger = logging.getLogger(__name__)


def register(subparsers, common) -> None:
    p = subparsers.add_parser("run", parents=[common], help="simulate a program and print its statistics")
    p.add_argument("input", help="program (.s is assembled, anything else is read as a binary)")
    p.add_argument("--isa", choices=[i.value for i in Isa], default=Isa.ZOOZVE.value)
    p.add_argument("--mem-image", help="raw bytes loaded into memory at address 0")
    p.add_argument("--trace", help="write the executed instruction trace to this file")
    p.add_argument("--dump", help="write the final machine state to this file")
    p.add_argument("--dump-mem", action="append", default=[], metavar="ADDR:LEN",
                   help="memory range included in --dump (repeatable)")
    p.add_argument("--dump-vregs", action="append", default=[], metavar="HEAD:TAIL",
                   help="vector registers included in --dump (repeatable)")
    p.set_defaults(handler=cmd_run)


def _pairs(values: List[str], flag: str) -> List[Tuple[int, int]]:
    out = []
    for v in values:
        try:
            a, b = v.split(":")
            out.append((int(a, 0), int(b, 0)))
        except ValueError:
            raise UsageError(f"{flag} expects two integers as A:B, got '{v}'")
    return out


@contextlib.contextmanager
def _trace_writer(path):
    if path is None:
        yield None
        return
    try:
        f = open(path, "w")
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}")
    with f:
        yield TraceWriter(f)


def cmd_run(args, config: CliConfig) -> int:
    """
    Run a program on the Zoozve or RVV simulator; stdout gets one JSON line
    with the trace statistics, also when the run traps.
    """
    isa = Isa(args.isa)
    if isa == Isa.ZOOZVE and args.lmul is not None:
        raise UsageError("--lmul only applies to --isa rvv")
    mem_ranges = _pairs(args.dump_mem, "--dump-mem")
    vreg_ranges = _pairs(args.dump_vregs, "--dump-vregs")

    program = load_program(args.input)
    image = read_bytes(args.mem_image) if args.mem_image else None
    if image is not None and len(image) > config.mem_size:
        raise UsageError(f"memory image of {len(image)} bytes exceeds mem_size={config.mem_size}")

    if isa == Isa.ZOOZVE:
        runner, machine = run, config.vconfig()
    else:
        runner, machine = run_rvv, config.rvv_config()

    with _trace_writer(args.trace) as trace:
        try:
            state, stats = runner(program, machine, image, config.max_steps, config.mem_size, trace)
        except (SimTrap, SimTimeout) as e:
            if e.stats is not None:
                print(e.stats.model_dump_json())
            raise

    print(stats.model_dump_json())
    logger.info("%s run: %d instructions, %d strip iterations", isa.value, stats.dynamic_count, stats.strip_iterations)
    if args.dump:
        write_text(args.dump, dump_state(state, mem_ranges, vreg_ranges))
    return 0
