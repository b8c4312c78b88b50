import json
import logging
from typing import List

from ..bench.harness import check_results, run_benchmark
from ..bench.report import emit_csv, emit_plot, plot_rows, read_csv
from ..errors import UsageError
from ..models import Kernel
from ..schemas import BenchResult, CliConfig

logger = logging.getLogger(__name__)


def register(subparsers, common) -> None:
    p = subparsers.add_parser("bench", parents=[common], help="run the kernel sweeps on both ISAs")
    p.add_argument("--kernels", default=",".join(k.value for k in Kernel),
                   help="comma separated kernels (default: all)")
    p.add_argument("--sizes", help="comma separated sizes (default: each kernel's sweep)")
    p.add_argument("--seeds", type=int, default=1, help="number of input seeds, starting at --seed")
    p.add_argument("--csv", help="write the result table to this CSV file")
    p.add_argument("--plot", help="write the speedup chart to this SVG file")
    p.set_defaults(handler=cmd_bench)

    p = subparsers.add_parser("plot", parents=[common], help="render the chart of an earlier bench CSV")
    p.add_argument("--csv", required=True, help="CSV written by bench --csv")
    p.add_argument("-o", "--output", required=True, help="SVG output")
    p.set_defaults(handler=cmd_plot)


def _kernels(text: str) -> List[Kernel]:
    known = {k.value: k for k in Kernel}
    kernels = []
    for name in filter(None, (s.strip() for s in text.split(","))):
        if name not in known:
            raise UsageError(f"unknown kernel '{name}' (expected one of {', '.join(known)})")
        kernels.append(known[name])
    if not kernels:
        raise UsageError("--kernels is empty")
    return kernels


def _sizes(text: str) -> List[int]:
    try:
        return [int(s, 0) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes expects comma separated integers, got '{text}'")


def _summary(r: BenchResult) -> str:
    return json.dumps({
        "kernel": r.case.kernel.value,
        "n": r.case.n,
        "isa": r.case.isa.value,
        "seed": r.case.seed,
        "dyn_count": r.stats.dynamic_count,
        "strip_iters": r.stats.strip_iterations,
        "speedup": round(r.speedup, 2) if r.speedup is not None else None,
        "correct": r.correct,
    })


def cmd_bench(args, config: CliConfig) -> int:
    """
    Sweep the kernels, print one JSON line per run and fail with exit 3 when
    any output is wrong.
    """
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    kernels = _kernels(args.kernels)
    sizes = _sizes(args.sizes) if args.sizes else None
    seeds = tuple(range(config.seed, config.seed + args.seeds))

    results = run_benchmark(kernels, sizes, seeds, config.vconfig(), config.lmul, config.jobs,
                            config.max_steps, config.mem_size)
    for r in results:
        print(_summary(r))
    if args.csv:
        emit_csv(results, args.csv)
    if args.plot:
        emit_plot(results, args.plot)

    check_results(results)
    return 0


def cmd_plot(args, config: CliConfig) -> int:
    """
    Re-render the speedup chart from a CSV file.
    """
    plot_rows(read_csv(args.csv), args.output)
    return 0
