"""Exception hierarchy.

Every error raised by the library derives from :class:`ModulithError` and
carries the process exit code the CLI maps it to.
"""

from __future__ import annotations


class ModulithError(Exception):
    exit_code = 1


class UsageError(ModulithError):
    exit_code = 2


class InputError(ModulithError, ValueError):
    """Malformed or inconsistent input (exit code 3)."""

    exit_code = 3


class NumericalError(ModulithError, ArithmeticError):
    """A numerical routine could not produce a trustworthy answer (exit code 4)."""

    exit_code = 4


# matrix-core
class DimensionMismatch(InputError):
    pass


class DuplicateLabel(InputError):
    pass


class NonBinaryElement(InputError):
    pass


class ZeroRowOrColumn(InputError):
    def __init__(self, label: str, kind: str):
        super().__init__(f"{kind} {label!r} has no 1-valued element")
        self.label = label
        self.kind = kind


class PartitionMismatch(InputError):
    pass


# spectral routes
class NotSymmetric(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateNullSpace(NumericalError):
    pass


class NotConnected(NumericalError):
    pass


class DegenerateSplit(NumericalError):
    pass


class SupportOverlapUnresolved(NumericalError):
    """Eigenvector supports overlap without nesting.

    ``fallback`` holds the combinatorial partition of the same matrix.
    """

    def __init__(self, message: str, fallback=None):
        super().__init__(message)
        self.fallback = fallback


class UnknownScheme(InputError):
    pass


# conceptualization
class OntologyError(InputError):
    pass


class CycleDetected(OntologyError):
    pass


class UndeclaredConcept(OntologyError):
    pass


class DuplicateConcept(OntologyError):
    pass


class NotASubclass(OntologyError):
    pass


class CapExceeded(OntologyError):
    pass


class UnknownDomain(OntologyError):
    pass


class UnknownConcept(OntologyError):
    pass


class RoleConflict(OntologyError):
    pass


class DuplicateAttribute(OntologyError):
    pass


class NotDistinguishable(OntologyError):
    pass


# design-loop
class NoViolations(ModulithError):
    pass
