#!/usr/bin/env python3
"""
Exception types shared by the evaluators, the diagnostics and the harness.
"""


class MarcumError(Exception):
    """Base class for every error raised by the toolkit."""


class DomainError(MarcumError, ValueError):
    """A precondition on an argument does not hold."""

    def __init__(self, parameter: str, message: str):
        super().__init__(f"{parameter}: {message}")
        self.parameter = parameter
        self.message = message


class ConvergenceError(MarcumError, ArithmeticError):
    """A requested tolerance was not met within the iteration caps."""


class BracketError(ConvergenceError):
    """The end points of a root bracket do not straddle zero."""


class BesselOverflowError(MarcumError, OverflowError):
    """The unscaled Bessel value is not representable; use the scaled form."""


class GridTooCoarseError(MarcumError):
    """A shape scan saw more sign changes than the theory allows."""
