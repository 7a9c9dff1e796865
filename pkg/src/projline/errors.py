"""Exception hierarchy for projline."""


class ProjLineError(Exception):
    """Base class for all projline errors."""


class CompositeModulus(ProjLineError, ValueError):
    pass


class MalformedTable(ProjLineError, ValueError):
    pass


class InvalidField(ProjLineError, ValueError):
    pass


class NotAField(ProjLineError):
    """Reconstructed structure failed the field axioms; carries the report."""

    def __init__(self, report):
        super().__init__("reconstructed structure is not a field:\n" + report.format())
        self.report = report


class DegeneratePoints(ProjLineError, ValueError):
    pass


class ZeroCoefficient(ProjLineError, ValueError):
    pass


class NonComposable(ProjLineError, ValueError):
    pass


class MalformedGroupoid(ProjLineError, ValueError):
    pass


class StructurallyInvalid(ProjLineError):
    def __init__(self, report):
        super().__init__("groupoid fails structural validation:\n" + report.format())
        self.report = report


class NotEndo(ProjLineError, ValueError):
    pass


class ParseError(ProjLineError, ValueError):
    def __init__(self, msg, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


class IdentityScalar(ProjLineError, ValueError):
    pass


class AxiomViolation(ProjLineError):
    def __init__(self, msg, witness=None):
        super().__init__(msg if witness is None else f"{msg}; witness: {witness}")
        self.witness = witness


class ReferenceNotUnit(ProjLineError, ValueError):
    pass


class TooFewPoints(ProjLineError, ValueError):
    pass


class UnsupportedFourPoint(TooFewPoints):
    """Four-point groupoid with -1 = 1: outside the coordinatization hypotheses."""


class SelfConjugate(ProjLineError):
    pass


class IncompatibleScalarMap(ProjLineError, ValueError):
    pass


class VerificationFailure(ProjLineError):
    def __init__(self, report):
        super().__init__("constructed projectivity failed verification:\n" + report.format())
        self.report = report


class SizeOutOfRange(ProjLineError, ValueError):
    pass
