"""Exception hierarchy shared by the parsers and builders."""
from __future__ import annotations


class ModelError(Exception):
    """Base class; carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 source: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.source:
            where.append(self.source)
        if self.line is not None:
            where.append(str(self.line))
            if self.col is not None:
                where.append(str(self.col))
        if where:
            return f"{':'.join(where)}: {self.message}"
        return self.message

    def located(self, line: int | None, col: int | None = None,
                source: str | None = None) -> "ModelError":
        """Return a copy of this error with position info filled in."""
        err = type(self)(self.message,
                         line if self.line is None else self.line,
                         col if self.col is None else self.col,
                         source if self.source is None else self.source)
        return err


class ParseError(ModelError):
    """Malformed input text."""


class CallArity(ModelError):
    """A call rule that does not push exactly two symbols."""


class RetArity(ModelError):
    """A return rule with a nonempty right-hand word."""


class BottomRewrite(ModelError):
    """A rule that reads or writes the bottom symbol."""


class UnknownOperator(ParseError):
    """A modal keyword the formula grammar does not know."""


class UnknownAtom(ModelError):
    """A formula atom without a valuation."""


class UndefinedLabel(ModelError):
    pass


class UndefinedProc(ModelError):
    pass


class DomainOverflow(ModelError):
    """A register constant outside the declared domain."""
