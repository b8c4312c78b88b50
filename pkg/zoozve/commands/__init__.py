from . import asm, bench, compile, run

# registration order is the order of `zoozve --help`
COMMANDS = [asm, run, compile, bench]
