"""Exception types shared across the package.

Every error carries a stable machine-readable ``code`` and an optional
``details`` mapping (field paths, offending values) so the HTTP layer can
emit a uniform error envelope without string parsing.
"""

from __future__ import annotations


class MwcError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})


class InvalidArgument(MwcError):
    """An operation received an argument outside its contract."""

    code = "invalid-argument"


class InvalidScenario(MwcError):
    """A signal scenario violates the multiband model constraints."""

    code = "invalid-scenario"


class InvalidConfig(MwcError):
    """A converter configuration violates a structural invariant."""

    code = "invalid-config"


class ReconstructionIllPosed(MwcError):
    """The support-restricted sensing matrix cannot be stably inverted."""

    code = "reconstruction-ill-posed"
