"""Exception hierarchy shared by every entropylab module."""

from __future__ import annotations


class EntropyLabError(Exception):
    """Base class for all library errors."""


class MalformedElement(EntropyLabError, ValueError):
    def __init__(self, element, reason: str = "invalid encoding"):
        self.element = element
        super().__init__(f"{reason}: {element!r}")


class KindMismatch(EntropyLabError, TypeError):
    pass


class BudgetExceeded(EntropyLabError):
    """A set under construction grew past the element budget."""

    def __init__(self, cardinality: int, budget: int):
        self.cardinality = cardinality
        self.budget = budget
        super().__init__(f"cardinality {cardinality} exceeds budget {budget}")


class NotHomomorphism(EntropyLabError):
    def __init__(self, pair):
        self.witness = pair
        super().__init__(f"homomorphism law fails on {pair!r}")


class NotInvariant(EntropyLabError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"image of {witness!r} leaves the subgroup")


class NotNormal(EntropyLabError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"normal subgroup check failed at {witness!r}")


class NotCentral(EntropyLabError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"subgroup is not central, witness {witness!r}")


class NotAutomorphism(EntropyLabError):
    pass


class OracleMissing(EntropyLabError):
    pass


class NoCertificate(EntropyLabError):
    pass


class MonotonicityViolation(EntropyLabError, AssertionError):
    """A dyadic sequence increased; this means the group law is broken."""


class ConfigError(EntropyLabError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field {field}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
