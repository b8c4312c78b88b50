import logging

from ..errors import InputError
from ..isa.assembler import assemble, disassemble
from ..isa.binfile import read_program, write_program
from ..schemas import CliConfig
from .files import read_text, replace_suffix, write_text

logger = logging.getLogger(__name__)


def register(subparsers, common) -> None:
    p = subparsers.add_parser("asm", parents=[common], help="assemble a text program into a binary")
    p.add_argument("input", help="assembly source (.s)")
    p.add_argument("-o", "--output", help="binary output (default: input with .bin)")
    p.set_defaults(handler=cmd_asm)

    p = subparsers.add_parser("disasm", parents=[common], help="disassemble a binary program")
    p.add_argument("input", help="binary program (.bin)")
    p.add_argument("-o", "--output", help="text output (default: stdout)")
    p.set_defaults(handler=cmd_disasm)


def cmd_asm(args, config: CliConfig) -> int:
    """
    Assemble args.input and write the encoded program.
    """
    program = assemble(read_text(args.input))
    output = args.output or replace_suffix(args.input, ".bin")
    try:
        write_program(program, output)
    except OSError as e:
        raise InputError(f"cannot write {output}: {e.strerror}")
    logger.info("assembled %d instructions into %s", len(program), output)
    return 0


def cmd_disasm(args, config: CliConfig) -> int:
    """
    Decode args.input; the listing goes to args.output or stdout.
    """
    text = disassemble(read_program(args.input))
    if args.output:
        write_text(args.output, text)
        logger.info("wrote disassembly to %s", args.output)
    else:
        print(text, end="")
    return 0
