"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`NeronError`,
so the CLI can map the whole family to exit code 1.
"""


class NeronError(Exception):
    """Base class for domain errors."""


class NotSquare(NeronError, ValueError):
    pass


class NotUnipotent(NeronError, ValueError):
    pass


class NotQuasiUnipotent(NeronError, ValueError):
    pass


class NotNilpotent(NeronError, ValueError):
    pass


class NonCommuting(NeronError, ValueError):
    pass


class FormulaMismatch(NeronError, AssertionError):
    """The three component-group formulas disagreed (a bug, never expected)."""


class DegenerateFiltration(NeronError, ValueError):
    pass


class ProjectionDegenerate(NeronError, ValueError):
    pass


class NonDiscreteFiber(NeronError, ValueError):
    pass


class NonIntegralDefect(NeronError, ValueError):
    pass


class AtOrigin(NeronError, ValueError):
    pass


class NotAdmissible(NeronError, ValueError):
    pass


class NotTorsion(NeronError, ValueError):
    pass


class UnsupportedN(NeronError, ValueError):
    pass


class NotExtendable(NeronError):
    """Raised when a normal function has a nonzero class at the puncture.

    The obstructing class is kept on ``cohomology_class``.
    """

    def __init__(self, message, cohomology_class=None):
        super().__init__(message)
        self.cohomology_class = cohomology_class


class BadParameters(NeronError, ValueError):
    pass


class BadCurve(NeronError, ValueError):
    pass


class SchemaError(NeronError, ValueError):
    pass


class ValidationError(NeronError, ValueError):
    pass


class InvalidOrbit(NeronError, ValueError):
    """Orbit data fails nilpotency, dimension or purity checks."""


class OnBoundary(NeronError, ValueError):
    pass
