"""Exception hierarchy for the casecalc engine."""


class CaseError(Exception):
    """Base class for all casecalc errors."""


# --- graph construction ---------------------------------------------------

class DuplicateId(CaseError):
    pass


class MalformedNode(CaseError):
    pass


class IllegalEndpoints(CaseError):
    pass


class SecondParent(CaseError):
    pass


class CycleIntroduced(CaseError):
    pass


class DuplicateLabel(CaseError):
    pass


class UnboundPlaceholder(CaseError):
    pass


class UnknownNodeId(CaseError):
    pass


# --- confirmation measures ------------------------------------------------

class SingularInput(CaseError):
    pass


class InsufficientFields(CaseError):
    pass


class InconsistentElicitation(CaseError):
    pass


# --- confidence propagation -----------------------------------------------

class MissingLeafAssignment(CaseError):
    pass


class UnsoundGraph(CaseError):
    """The graph has structural validity violations that block valuation."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotApplicable(CaseError):
    pass


class UnknownRule(CaseError):
    pass


# --- defeater lifecycle ---------------------------------------------------

class AlreadyResolved(CaseError):
    pass


class InvalidPayload(CaseError):
    pass


# --- document I/O -----------------------------------------------------------

class DocumentError(CaseError):
    """Base for case-file problems; carries a list of diagnostics."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics) or [message]


class CaseSyntaxError(DocumentError):
    pass


class CaseSchemaError(DocumentError):
    pass


class InvariantViolation(DocumentError):
    """A parsed document violates a graph well-formedness rule."""

    def __init__(self, message, rule="", diagnostics=()):
        super().__init__(message, diagnostics)
        self.rule = rule
