"""
Benchmark harness: runs every (kernel, size, seed) on both ISAs, checks the
outputs against the scalar references and against each other, and derives
the dynamic-instruction-count speedup of each pair.
"""

import logging
import numpy as np
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Dict, Iterable, List, Optional, Sequence

from ..errors import CorrectnessError
from ..models import Isa, Kernel
from ..schemas import BenchCase, BenchResult, VConfig
from ..sim.core import DEFAULT_MAX_STEPS, DEFAULT_MEM_SIZE
from ..sim.machine import run
from ..sim.rvv import run_rvv
from .fft import gen_fft
from .kernels import expected_outputs, gen_axpy, gen_dotproduct, make_inputs, rvv_config, zoozve_config
from .layout import KernelBuild

logger = logging.getLogger(__name__)

FFT_SIZES = tuple(2 ** k for k in range(5, 12))
BLAS_SIZES = tuple(2 ** k for k in range(9, 15))
DEFAULT_SIZES = {Kernel.FFT: FFT_SIZES, Kernel.DOTPRODUCT: BLAS_SIZES, Kernel.AXPY: BLAS_SIZES}

GENERATORS = {Kernel.DOTPRODUCT: gen_dotproduct, Kernel.AXPY: gen_axpy, Kernel.FFT: gen_fft}


@dataclass
class CaseOutcome:
    result: BenchResult
    outputs: Dict[str, bytes]


@lru_cache(maxsize=64)
def build_kernel(kernel: Kernel, n: int, isa: Isa, config) -> KernelBuild:
    """Generate (and for Zoozve compile) one kernel; programs do not depend on the seed."""
    build = GENERATORS[kernel](n, isa, config)
    logger.debug("generated %s n=%d for %s: %d static instructions",
                 kernel.value, n, isa.value, len(build.program))
    return build


def make_cases(kernels: Iterable[Kernel], sizes: Optional[Sequence[int]] = None,
               seeds: Sequence[int] = (0,), vconfig: Optional[VConfig] = None,
               lmul: Optional[int] = None) -> List[BenchCase]:
    """Zoozve and RVV cases for every kernel, size and seed; sizes default to each kernel's sweep."""
    vconfig = vconfig or VConfig()
    cases = []
    for kernel in kernels:
        kernel = Kernel(kernel)
        # only the BLAS kernels take an LMUL override
        k_lmul = lmul if kernel != Kernel.FFT else None
        configs = {
            Isa.ZOOZVE: zoozve_config(kernel, vconfig),
            Isa.RVV: rvv_config(kernel, vconfig.vlen_bits, k_lmul),
        }
        for n in sizes or DEFAULT_SIZES[kernel]:
            for seed in seeds:
                for isa, config in configs.items():
                    cases.append(BenchCase(kernel=kernel, n=n, isa=isa, config=config, seed=seed))
    return cases


def run_case(case: BenchCase, max_steps: int = DEFAULT_MAX_STEPS,
             mem_size: int = DEFAULT_MEM_SIZE) -> CaseOutcome:
    build = build_kernel(case.kernel, case.n, case.isa, case.config)
    inputs = make_inputs(case.kernel, case.n, case.seed)
    runner = run if case.isa == Isa.ZOOZVE else run_rvv
    state, stats = runner(build.program, build.config, build.image(inputs), max_steps, mem_size)

    outputs = build.layout.read_outputs(state.mem)
    expected = expected_outputs(case.kernel, inputs)
    correct = all(np.array_equal(outputs[name], expected[name]) for name in expected)
    if not correct:
        logger.warning("%s n=%d %s seed=%d disagrees with the reference",
                       case.kernel.value, case.n, case.isa.value, case.seed)
    logger.info("%s n=%d %s: %d instructions, %d strips",
                case.kernel.value, case.n, case.isa.value, stats.dynamic_count, stats.strip_iterations)
    result = BenchResult(case=case, stats=stats, correct=correct)
    return CaseOutcome(result, {name: v.tobytes() for name, v in outputs.items()})


def pair_outcomes(outcomes: List[CaseOutcome]) -> List[BenchResult]:
    """Attach speedups to Zoozve/RVV pairs; a pair whose outputs differ is incorrect on both sides."""
    by_pair: Dict[tuple, Dict[Isa, CaseOutcome]] = {}
    for o in outcomes:
        c = o.result.case
        by_pair.setdefault((c.kernel.value, c.n, c.seed), {})[c.isa] = o

    results = []
    for o in outcomes:
        c = o.result.case
        pair = by_pair[(c.kernel.value, c.n, c.seed)]
        if len(pair) < 2:
            results.append(o.result)
            continue
        z, r = pair[Isa.ZOOZVE], pair[Isa.RVV]
        speedup = r.result.stats.dynamic_count / z.result.stats.dynamic_count
        agree = z.outputs == r.outputs
        if not agree:
            logger.warning("%s n=%d seed=%d: zoozve and rvv outputs differ", c.kernel.value, c.n, c.seed)
        results.append(o.result.model_copy(update={"speedup": speedup, "correct": o.result.correct and agree}))
    return results


def run_cases(cases: Sequence[BenchCase], jobs: int = 1, max_steps: int = DEFAULT_MAX_STEPS,
              mem_size: int = DEFAULT_MEM_SIZE) -> List[BenchResult]:
    worker = partial(run_case, max_steps=max_steps, mem_size=mem_size)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(worker, cases))
    else:
        outcomes = [worker(c) for c in cases]
    # merged by case key so the order never depends on scheduling
    outcomes.sort(key=lambda o: o.result.case.key)
    return pair_outcomes(outcomes)


def run_benchmark(kernels: Iterable[Kernel], sizes: Optional[Sequence[int]] = None,
                  seeds: Sequence[int] = (0,), vconfig: Optional[VConfig] = None,
                  lmul: Optional[int] = None, jobs: int = 1,
                  max_steps: int = DEFAULT_MAX_STEPS, mem_size: int = DEFAULT_MEM_SIZE) -> List[BenchResult]:
    cases = make_cases(kernels, sizes, seeds, vconfig, lmul)
    logger.info("running %d benchmark cases with %d job(s)", len(cases), jobs)
    return run_cases(cases, jobs, max_steps, mem_size)


def check_results(results: Sequence[BenchResult]) -> None:
    failed = [r.case.key for r in results if not r.correct]
    if failed:
        listed = ", ".join("/".join(str(part) for part in key) for key in failed)
        raise CorrectnessError(f"{len(failed)} benchmark case(s) failed the correctness check: {listed}")
