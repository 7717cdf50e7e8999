"""Exception types shared across the package."""


class MirrorError(Exception):
    """Base class; ``code`` is the machine-readable reason string."""

    code = "error"


class DegenerateInput(MirrorError, ValueError):
    code = "degenerate_input"


class FitFailed(MirrorError):
    code = "fit_failed"


class GenerationDegenerate(MirrorError):
    code = "generation_degenerate"


class UndefinedPortrait(MirrorError, ValueError):
    code = "undefined_portrait"


class SpectrumTooLarge(MirrorError, ValueError):
    code = "spectrum_too_large"
