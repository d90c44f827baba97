class DexrError(Exception):
    """Base class for every error raised by the toolkit."""


class SchemaError(DexrError):
    pass


class SchemaMismatch(DexrError):
    pass


class DomainNotSubset(DexrError):
    pass


class RuleError(DexrError):
    """A rule or dependency violates a syntactic well-formedness condition."""


class NotAProduct(DexrError):
    pass


class InputNotModel(DexrError):
    pass


class ChaseExhausted(DexrError):
    pass


class NotATrigger(DexrError):
    pass


class NotSubset(DexrError):
    pass


class GNotNegative(DexrError):
    pass


class NotGuarded(DexrError):
    pass


class InvalidProfile(DexrError):
    pass


class ParseError(DexrError):
    def __init__(self, message, line=0, column=0, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"{line}:{column}: " if line else ""
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{hint}")


class ArityError(ParseError):
    pass


class UnknownRelation(ParseError):
    pass


class ConstantInRule(ParseError):
    pass
