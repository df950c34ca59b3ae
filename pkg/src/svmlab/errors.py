"""Exception hierarchy.

Two branches matter for callers: :class:`DataError` means the input was
unusable (the CLI maps it to exit code 2), :class:`ComputeError` means a
numerical procedure failed on valid input (exit code 3).
"""

from __future__ import annotations


class SvmlabError(Exception):
    """Base class for every error raised by this package."""


class DataError(SvmlabError):
    """Invalid or unusable input."""


class ComputeError(SvmlabError):
    """A numerical procedure failed on otherwise valid input."""


# --- data / ingestion -------------------------------------------------------

class EmptyFile(DataError):
    """CSV file contains no data rows."""


class MalformedRow(DataError):
    """A CSV row is ragged or holds a non-numeric feature value."""


class LabelCardinality(DataError):
    """The label column does not hold exactly two distinct values."""


class SingleClass(DataError):
    """Only one class is present where both are required."""


class DegenerateClass(DataError):
    """A class has too few samples for the requested statistic."""


class TooFewSamples(DataError):
    """Not enough samples for the requested operation."""


class DimensionMismatch(DataError):
    """Feature vectors of incompatible dimension were combined."""


class LengthMismatch(DataError):
    """Parallel arrays disagree in length."""


class AllCoincident(DataError):
    """Every intra-class distance is zero; no scale can be derived."""


class NotTwoDimensional(DataError):
    """Operation requires exactly two features."""


class NotLinear(DataError):
    """Operation is defined for linear-kernel models only."""


class SchemaMismatch(DataError):
    """Model file has an unknown version or a broken layout."""


class EmptyMatrix(DataError):
    """Confusion matrix with zero total count."""


# --- numerics ---------------------------------------------------------------

class DegenerateProblem(ComputeError):
    """Dual problem with a single class; the equality constraint pins alpha at 0."""


class NonConvergence(ComputeError):
    """Solver hit its update budget before reaching tolerance.

    The best iterate found so far travels with the exception so partial
    results stay reachable.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SingularSystem(ComputeError):
    """The bordered KKT system is rank deficient; no ridge is added silently."""


class AssumptionViolated(ComputeError):
    """Closed-form solution contradicts the assumption it was built on."""


class NotSeparable(ComputeError):
    """Data is not separable under the given kernel."""


class NoSupportVectors(ComputeError):
    """Solution has no alpha above the support-vector threshold."""


class DomainError(ComputeError):
    """A formula was evaluated outside its domain (reported, never clamped)."""


class RegimeViolation(ComputeError):
    """Inputs are outside the parameter regime the comparison relies on."""
