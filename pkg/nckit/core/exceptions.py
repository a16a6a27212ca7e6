"""Exception hierarchy for nckit.

Library code raises these; only the CLI turns them into exit codes.
"""

from __future__ import annotations

from collections.abc import Iterable


class NckitError(Exception):
    """Base class for every error raised by nckit."""


class FormulaSyntaxError(NckitError):
    """Formula text does not conform to the grammar.

    Attributes:
        text: The offending input.
        position: Zero-based character offset of the error.
        expected: Human-readable tokens that would have been accepted.
    """

    def __init__(
        self,
        message: str,
        *,
        text: str = "",
        position: int = 0,
        expected: Iterable[str] = (),
    ) -> None:
        self.text = text
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f"; expected one of: {', '.join(self.expected)}"
        super().__init__(detail)


class UnknownOperatorError(FormulaSyntaxError):
    """A character sequence that is not an operator of the surface syntax."""


class LanguageError(NckitError):
    """A formula uses a modality outside the requested sublanguage."""


class KripkeError(NckitError):
    """Malformed frame or model."""


class UnknownWorldError(KripkeError, KeyError):
    """A world identifier that the structure does not contain."""

    def __init__(self, world: str) -> None:
        self.world = world
        super().__init__(f"unknown world: {world!r}")

    def __str__(self) -> str:
        return str(self.args[0])


class QuotientError(KripkeError):
    """A partition that is not admissible for a quotient."""


class ModelFileError(NckitError):
    """A model or frame document that cannot be read or fails its schema."""


class TranslationError(NckitError):
    """Input outside the domain of a translation."""


class ProofScriptError(NckitError):
    """Proof script text that cannot be split into well-formed lines."""

    def __init__(self, message: str, *, line_number: int | None = None) -> None:
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


class ConfigurationError(NckitError):
    """Settings file or environment values that cannot be used."""


class BudgetExceededError(NckitError):
    """An enumeration or search would exceed its configured cap."""

    def __init__(self, what: str, required: int, budget: int) -> None:
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} steps, budget is {budget}")
