"""Coherent states of the hydrogen atom: exact generator algebra, special
functions, basis states, coherent-state closed forms and their verification."""

__version__ = "0.1.0"
