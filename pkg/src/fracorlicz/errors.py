"""Exception hierarchy shared across the toolkit.

The command line front end maps these onto process exit codes, so the split
between "bad input", "the computation diverged" and "the iteration ran out of
budget" is part of the public contract.
"""


class ToolkitError(Exception):
    """Base class for every error raised deliberately by this package."""


class ConfigError(ToolkitError):
    """Invalid configuration: unknown keys, wrong types, inconsistent values.

    CLI exit code 2.
    """


class RangeError(ToolkitError):
    """An argument fell outside the trusted range of a Young function."""


class DegenerateInputError(ToolkitError):
    """Input violates a structural precondition (non-monotone density, ...)."""


class PreconditionError(ToolkitError):
    """A mathematical precondition failed (e.g. the near-zero integrability
    condition required by the Sobolev conjugate construction)."""


class ResolutionError(ToolkitError):
    """The grid is too coarse for the requested operation."""


class DivergenceError(ToolkitError):
    """A refinement ladder or integral failed to settle.  CLI exit code 3."""


class NonConvergenceError(ToolkitError):
    """An iteration hit its budget before reaching tolerance.  CLI exit code 4."""


#: exit codes used by the CLI
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_NONCONVERGENCE = 4


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CONFIG
    if isinstance(exc, DivergenceError):
        return EXIT_DIVERGENCE
    if isinstance(exc, NonConvergenceError):
        return EXIT_NONCONVERGENCE
    if isinstance(exc, ToolkitError):
        return EXIT_CONFIG
    return 1
