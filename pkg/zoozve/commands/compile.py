import json
import logging
import os

from ..compiler.ir import parse_ir
from ..compiler.pipeline import compile_module
from ..schemas import CliConfig
from .files import read_text

logger = logging.getLogger(__name__)


def register(subparsers, common) -> None:
    p = subparsers.add_parser("compile", parents=[common], help="compile an IR module into staged artifacts")
    p.add_argument("input", help="IR module (.ir)")
    p.add_argument("--name", help="artifact base name (default: input file stem)")
    p.set_defaults(handler=cmd_compile)


def cmd_compile(args, config: CliConfig) -> int:
    """
    Run the compiler pipeline and write every stage into config.outdir.
    """
    module = parse_ir(read_text(args.input))
    name = args.name or os.path.splitext(os.path.basename(args.input))[0]
    result = compile_module(module, config.vconfig(), config.outdir, name)

    print(json.dumps({
        "name": name,
        "instructions": len(result.program),
        "before_merge": len(result.before_merge),
        "artifacts": result.artifacts,
    }))
    return 0
