"""Exception hierarchy shared by every rsmkit module.

Every error carries a stable machine-readable ``code`` (the class name) so the
CLI and HTTP layers can map failures without string matching.
"""


class RsmError(Exception):
    """Base class for all rsmkit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- design -----------------------------------------------------------------

class InvalidFactor(RsmError):
    """Factor definition violates its contract (bounds, name, uniqueness)."""


class DimensionOutOfRange(RsmError):
    """Factor count outside the supported range for the requested design."""


class InvalidAlpha(RsmError):
    """Explicit axial distance must be strictly positive."""


class EmptyDesign(RsmError):
    """Generated design would have too few runs to be usable."""


class UnsupportedDesign(RsmError):
    """Requested design family is deliberately not supported."""


class InvalidParameter(RsmError):
    """Scalar design parameter outside its documented domain."""


class NonFiniteInput(RsmError):
    """Natural or coded values must be finite."""


# --- fit --------------------------------------------------------------------

class RankDeficient(RsmError):
    """Model matrix does not have full column rank.

    ``term_names`` lists the inestimable terms identified by pivoting.
    """

    def __init__(self, term_names: list[str]):
        self.term_names = list(term_names)
        super().__init__(
            "model matrix is rank deficient; inestimable terms: "
            + ", ".join(self.term_names)
        )


class LengthMismatch(RsmError):
    """Response vector length does not match the design run count."""


class NonFiniteResponse(RsmError):
    """Responses must be finite numbers."""


class DimensionMismatch(RsmError):
    """Point dimension or factor index does not match the model."""


# --- inference --------------------------------------------------------------

class InvalidDf(RsmError):
    """Degrees of freedom must be >= 1."""


class ZeroDfResidual(RsmError):
    """Coefficient tests need at least one residual degree of freedom."""


# --- optimize ---------------------------------------------------------------

class NoFirstOrderTerms(RsmError):
    """Path analysis requires first-order terms in the model."""


class ZeroGradient(RsmError):
    """Fitted surface is flat; no direction of improvement exists."""


class NoQuadraticTerms(RsmError):
    """Stationary-point analysis requires pure quadratic terms."""


# --- surface ----------------------------------------------------------------

class InvalidRange(RsmError):
    """Grid range must be finite with min < max."""


# --- campaign ---------------------------------------------------------------

class UnknownPhase(RsmError):
    """Phase index does not exist in the campaign."""


class UnknownRun(RsmError):
    """Ingested row does not match any run in the issued worksheet."""


class DuplicateRun(RsmError):
    """The same run appears more than once in an ingested worksheet."""


class MalformedNumber(RsmError):
    """A worksheet cell could not be parsed as a number.

    Carries the 1-based data row and the column header.
    """

    def __init__(self, row: int, column: str, text: str = ""):
        self.row = row
        self.column = column
        detail = f" ({text!r})" if text else ""
        super().__init__(f"malformed number in row {row}, column {column!r}{detail}")


class ResponseOutOfRange(RsmError):
    """Ingested response is not a finite number."""


class PhaseIncomplete(RsmError):
    """Operation requires every run of the phase to have a response."""


class PhaseComplete(RsmError):
    """Complete phases are append-only; responses cannot be changed."""


class MissingColumn(RsmError):
    """Ingested worksheet lacks a required column."""


class SchemaVersionUnsupported(RsmError):
    """Project document schema version is not supported by this build."""


class CorruptDocument(RsmError):
    """Project document is structurally invalid.

    ``path`` locates the offending element inside the document.
    """

    def __init__(self, path: str, message: str = ""):
        self.path = path
        detail = f": {message}" if message else ""
        super().__init__(f"corrupt project document at {path}{detail}")
