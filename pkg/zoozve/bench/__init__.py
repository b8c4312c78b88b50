"""The three benchmark kernels for both ISAs, their references and the harness."""

from .fft import gen_fft
from .harness import check_results, make_cases, run_benchmark, run_case, run_cases
from .kernels import gen_axpy, gen_dotproduct
from .report import emit_csv, emit_plot

__all__ = [
    "check_results", "emit_csv", "emit_plot", "gen_axpy", "gen_dotproduct", "gen_fft",
    "make_cases", "run_benchmark", "run_case", "run_cases",
]
