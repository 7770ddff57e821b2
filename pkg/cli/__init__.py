"""Command-line surface: JSON documents, automata and subcommand dispatch."""

from .automaton import DFAO, MahlerRelation, automaton_to_mahler, minimize, reverse_reading
from .commands import run_command
from .main import main

__all__ = [
    "DFAO",
    "MahlerRelation",
    "automaton_to_mahler",
    "main",
    "minimize",
    "reverse_reading",
    "run_command",
]
