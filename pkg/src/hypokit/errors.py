"""Exception hierarchy shared by the library, the service, and the CLI.

Every error carries a stable machine-readable ``code`` (used in service
error bodies) and a ``category`` that the CLI maps to its exit codes:
``parse`` -> 1, ``precondition`` -> 2, ``consistency`` -> 3.
"""


class HypokitError(Exception):
    code = "error"
    category = "precondition"


class MatrixFormatError(HypokitError):
    """Matrix file or payload does not follow the JSON matrix schema."""

    code = "matrix_format"
    category = "parse"


class DimensionError(HypokitError):
    code = "dimension"


class NotPSDError(HypokitError):
    """Hermitian input has an eigenvalue below the PSD clamp threshold."""

    code = "not_psd"


class NotPDError(HypokitError):
    code = "not_pd"


class SpectrumError(HypokitError):
    """A spectral precondition (e.g. stability of a Lyapunov coefficient) fails."""

    code = "spectrum"


class NotSemiDissipative(HypokitError):
    """Hermitian part has a genuinely negative eigenvalue."""

    code = "not_semi_dissipative"


class ZeroEigenvalue(HypokitError):
    """0 is in the spectrum; the continuous analysis assumes a trivial kernel."""

    code = "zero_eigenvalue"


class NotSemiContractive(HypokitError):
    code = "not_semi_contractive"


class UnitEigenvalue(HypokitError):
    """1 is in the spectrum; the discrete analysis assumes it is not."""

    code = "unit_eigenvalue"


class CriterionMismatch(HypokitError):
    """The two independent index criteria disagree (tolerance pathology)."""

    code = "criterion_mismatch"
    category = "consistency"


class IndexMissing(HypokitError):
    code = "index_missing"


class IndexMismatch(HypokitError):
    code = "index_mismatch"


class PoleOnSpectrum(HypokitError):
    """The Cayley pole coincides with an eigenvalue of the input."""

    code = "pole_on_spectrum"


class NotStable(HypokitError):
    code = "not_stable"


class DefectiveNeedsEpsilon(HypokitError):
    """A dominant eigenvalue is defective; the transform needs epsilon > 0."""

    code = "defective_needs_epsilon"


class DegenerateFit(HypokitError):
    """Too few usable grid points survive the cancellation guard."""

    code = "degenerate_fit"


class StencilError(HypokitError):
    code = "stencil"
