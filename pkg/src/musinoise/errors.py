"""Exception types raised across the package."""


class MusinoiseError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedFormat(MusinoiseError):
    """WAV file uses a codec or sample format we do not decode."""


class CorruptFile(MusinoiseError):
    """File is not a structurally valid RIFF/WAVE stream."""


class InvalidChannel(MusinoiseError):
    """Requested channel index does not exist."""


class TooShort(MusinoiseError):
    """Signal shorter than one analysis window."""


class EmptyAfterPreprocessing(MusinoiseError):
    """Every frame was discarded by the silence rule."""


class DegenerateBand(MusinoiseError):
    """A sub-band holds fewer than two frequency bins."""


class NotComputable(MusinoiseError):
    """Measure or statistic undefined for the given input."""


class TargetAlwaysActive(MusinoiseError):
    """Activity mask leaves no noise-only frames to analyze."""
