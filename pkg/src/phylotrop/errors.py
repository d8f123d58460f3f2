"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class PhylotropError(Exception):
    exit_code = 3


class ValidationError(PhylotropError, ValueError):
    """Input does not satisfy a documented precondition."""

    exit_code = 1


class NotFlagError(ValidationError):
    """A geodesic was requested on a complex that is not flag."""

    def __init__(self, witness):
        self.witness = frozenset(witness)
        super().__init__(f"complex is not flag; minimal non-face {sorted(self.witness)}")


class ParseError(ValidationError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class ResourceError(PhylotropError):
    """A configurable enumeration or runtime budget would be exceeded."""

    exit_code = 2


class CertificateError(PhylotropError):
    """A construction failed to reproduce one of its closed-form identities."""

    def __init__(self, equation, detail):
        self.equation = equation
        super().__init__(f"{equation}: {detail}")
