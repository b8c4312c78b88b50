"""Zoozve strip-mining-free vector ISA toolkit."""

__version__ = "0.1.0"
