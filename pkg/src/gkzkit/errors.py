"""Shared exception types."""

from __future__ import annotations


class GkzError(Exception):
    """Base class for all toolkit errors."""


class DuplicatePointError(GkzError):
    """A point configuration contains a repeated point."""


class NotGeneratingError(GkzError):
    """The points do not generate the full integer lattice.

    Carries the offending invariant factor (0 means the points do not even
    span rationally).
    """

    def __init__(self, factor: int):
        self.factor = factor
        super().__init__(f"points do not generate the lattice (invariant factor {factor})")


class NotARelationError(GkzError):
    """A vector claimed as a lattice relation does not annihilate the points."""


class ScalarModeError(GkzError):
    """Rational-coefficient and symbolic-coefficient polynomials were mixed."""


class StructureError(GkzError):
    """The configuration does not have constant last coordinate 1 and no
    unimodular change of coordinates fixing that was found."""


class PochhammerPoleError(GkzError):
    """A rising-factorial factor vanishes or blows up for the requested range."""


class NotStabilizedError(GkzError):
    """A truncated dimension did not agree at two consecutive window bounds."""

    def __init__(self, dims: tuple[int, int], bound: int, message: str = ""):
        self.dims = dims
        self.bound = bound
        text = message or f"dimension not stabilized at bound {bound}: {dims[0]} vs {dims[1]}"
        super().__init__(text)


class ResonantError(GkzError):
    """A computation that requires a nonresonant parameter was given a resonant one."""


class SkippedPrimeError(GkzError):
    """A prime cannot be used (it divides a denominator of the parameter)."""


class RankConsistencyError(GkzError):
    """A mod-p solution dimension exceeded the rank, which should be impossible."""
