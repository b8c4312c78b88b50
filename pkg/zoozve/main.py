import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import COMMANDS
from .errors import UsageError, ZoozveError
from .settings import load_config

"""
Command-line entry point: one subcommand per toolchain operation.
Results go to stdout, diagnostics to stderr, and every ZoozveError becomes
its exit code."""

logger = logging.getLogger("zoozve")

CONFIG_FLAGS = ("vlen", "vregs", "vew", "lmul", "mem_size", "max_steps", "seed", "outdir", "jobs")


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; unset values stay None so lower layers supply them."""
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="flat key=value configuration file")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    p.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    p.add_argument("--vlen", type=int, help="vector register width in bits")
    p.add_argument("--vregs", type=int, help="Zoozve vector register count")
    p.add_argument("--vew", type=int, help="element width in bits (8, 16, 32)")
    p.add_argument("--lmul", type=int, help="RVV register grouping (1, 2, 4, 8)")
    p.add_argument("--mem-size", dest="mem_size", type=int, help="memory size in bytes")
    p.add_argument("--max-steps", dest="max_steps", type=int, help="instruction limit of one run")
    p.add_argument("--seed", type=int, help="first input seed")
    p.add_argument("--outdir", help="directory for generated files")
    p.add_argument("--jobs", type=int, help="benchmark worker processes")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zoozve", description="Zoozve vector ISA toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    common = common_parser()
    for module in COMMANDS:
        module.register(subparsers, common)
    return parser


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage, 0 on --help / --version
        return int(e.code or 0)

    configure_logging(args.verbose, args.quiet)
    try:
        if args.verbose and args.quiet:
            raise UsageError("-v and -q are mutually exclusive")
        config = load_config(args.config, **{k: getattr(args, k) for k in CONFIG_FLAGS})
        try:
            return args.handler(args, config)
        except ValidationError as e:
            err = e.errors()[0]
            raise UsageError(f"{'.'.join(str(p) for p in err['loc']) or 'value'}: {err['msg']}")
    except ZoozveError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
