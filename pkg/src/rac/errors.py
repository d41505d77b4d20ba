"""Exception types shared across the package.

Two families matter to the CLI: input problems (bad files, bad schema) exit
with code 1, computation problems (degenerate systems, undefined utility
combinations) exit with code 2.
"""


class RacError(Exception):
    """Base class for all package errors."""


class InputError(RacError):
    """A problem with user-supplied data or arguments. CLI exit code 1."""


class ComputeError(RacError):
    """A problem arising during computation. CLI exit code 2."""


# -- dataset ----------------------------------------------------------------

class SchemaError(InputError):
    """CSV header or cell layout does not match the documented schema."""


class MissingYear(InputError):
    """Year column is not contiguous (gap, duplicate, or reversal)."""


class NonPositiveValue(InputError):
    """A consumption or gross-return cell is zero or negative."""


# -- moments ----------------------------------------------------------------

class SeriesTooShort(ComputeError):
    """Fewer than two observations; no growth ratio can be formed."""


class NegativeVariance(ComputeError):
    """A variance argument was negative."""


# -- utility ----------------------------------------------------------------

class NonPositiveConsumption(ComputeError):
    """Utility requested for consumption <= 0."""


class UndefinedAtLogLimit(ComputeError):
    """The unshifted power utility has no value at rho = 1."""


# -- calibration ------------------------------------------------------------

class NoConvergence(ComputeError):
    """The solver exhausted its iteration budget without an acceptable point."""


class DegenerateSystem(ComputeError):
    """The three equations are exactly dependent; a one-parameter solution
    family exists and no single triple can be reported."""


# -- classification ---------------------------------------------------------

class Unclassifiable(ComputeError):
    """The (allocation sign, utility gap, curvature) combination matches no
    definition in the requested group."""


class InvalidCombination(ComputeError):
    """The combination is explicitly rejected (not-enough-risk-averse under a
    horizontal certain-utility curve)."""


# -- report -----------------------------------------------------------------

class EmptyReport(ComputeError):
    """render_table called with no rows."""
