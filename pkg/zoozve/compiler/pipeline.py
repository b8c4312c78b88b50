"""
The full compilation pipeline: verify, split, live intervals, grouped
allocation, lowering, coalescing and assembly, with every intermediate form
optionally written next to the output.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, TypeVar

from ..errors import InputError, StageError, ZoozveError
from ..isa.assembler import assemble, disassemble
from ..isa.binfile import read_program, write_program
from ..isa.instructions import Program
from ..schemas import VConfig
from .builtins import render_catalog
from .coalesce import coalesce
from .intervals import LiveInterval, compute_live_intervals
from .ir import IrModule, print_module, verify
from .lower import SplitInstr, lower, materialize
from .regalloc import Assignment, allocate_grouped
from .split import split_intrinsics

logger = logging.getLogger(__name__)

T = TypeVar("T")

STAGE_SUFFIXES = {
    "ir": ".0.ir",
    "split": ".split.ir",
    "before_merge": "_before_merge.s",
    "asm": ".s",
    "bin": ".bin",
    "disasm": "_asm.txt",
    "builtins": ".builtins.txt",
}


@dataclass
class CompileResult:
    program: Program
    before_merge: Program
    module: IrModule
    split: IrModule
    intervals: List[LiveInterval]
    assignment: Assignment
    lowered: List[SplitInstr]
    coalesced: List[SplitInstr]
    artifacts: Dict[str, str] = field(default_factory=dict)


def _stage(name: str, fn: Callable[..., T], *args) -> T:
    try:
        return fn(*args)
    except StageError:
        raise
    except ZoozveError as e:
        logger.debug("stage %s failed: %s", name, e.detail)
        raise StageError(name, e)


def compile_module(module: IrModule, config: VConfig, outdir: Optional[str] = None,
                   name: str = "kernel") -> CompileResult:
    module = _stage("verify", verify, module.buffers, list(module.ops))
    vew = module.vew or config.vew_bits
    config = config.with_vew(vew)

    split = _stage("split", split_intrinsics, module, config)
    intervals = _stage("intervals", compute_live_intervals, split, config)
    assignment = _stage("allocate", allocate_grouped, intervals, config)
    lowered = _stage("lower", lower, split, assignment)
    coalesced = _stage("coalesce", coalesce, lowered, config.elements_per_register, vew)

    before_merge = _stage("lower", materialize, lowered, vew)
    # re-assembling the printed program checks that the text form is complete
    program = _stage("assemble", lambda p: assemble(disassemble(p)), materialize(coalesced, vew))

    result = CompileResult(program, before_merge, module, split, intervals, assignment,
                           lowered, coalesced)
    logger.info("compiled %s: %d ops -> %d split instructions -> %d instructions",
                name, len(module), len(lowered), len(program))
    if outdir is not None:
        result.artifacts = _stage("write", write_artifacts, result, config, outdir, name)
    return result


def write_artifacts(result: CompileResult, config: VConfig, outdir: str, name: str) -> Dict[str, str]:
    try:
        os.makedirs(outdir, exist_ok=True)
        paths = {key: os.path.join(outdir, name + suffix) for key, suffix in STAGE_SUFFIXES.items()}
        texts = {
            "ir": print_module(result.module),
            "split": print_module(result.split),
            "before_merge": disassemble(result.before_merge),
            "asm": disassemble(result.program),
            "builtins": render_catalog(config),
        }
        for key, text in texts.items():
            with open(paths[key], "w") as f:
                f.write(text)
        write_program(result.program, paths["bin"])
        with open(paths["disasm"], "w") as f:
            f.write(disassemble(read_program(paths["bin"])))
    except OSError as e:
        raise InputError(f"cannot write to {outdir}: {e.strerror}")

    for path in paths.values():
        logger.debug("wrote %s", path)
    return paths
