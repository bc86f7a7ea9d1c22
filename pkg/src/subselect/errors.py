"""Exception types shared across the package.

The CLI maps ConfigError (and subclasses) to exit code 2 and every other
package error to exit code 1.
"""


class SubselectError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SubselectError):
    """Invalid option value, flag combination, or config-file entry."""


class SizeCapError(ConfigError):
    """Input exceeds a hard size cap (the exhaustive oracle is test-scale only)."""


class AlignmentError(SubselectError):
    """Parallel files disagree: line counts differ or a pair is blank on one side."""


class EmptyCorpusError(SubselectError):
    """No usable sentences where at least one is required."""


class StateError(SubselectError):
    """Operation called on an object in the wrong state (e.g. unfitted features)."""
