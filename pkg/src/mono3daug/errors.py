"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration/usage problems exit 2,
runtime and data problems exit 1.
"""


class Mono3dAugError(Exception):
    """Base class for all package errors."""


# --- configuration / usage (CLI exit 2) ---------------------------------

class ConfigInvalid(Mono3dAugError):
    """A config file or option value is malformed or out of range."""


class UnknownOp(ConfigInvalid):
    """An augmentation op name is not in the fixed vocabulary."""


# --- data / runtime (CLI exit 1) -----------------------------------------

class MalformedLine(Mono3dAugError):
    """A label-file line could not be parsed.

    Carries the 1-based line number (and optionally the file path) so batch
    tooling can point at the offending record.
    """

    def __init__(self, reason, line_no=None, path=None):
        self.reason = reason
        self.line_no = line_no
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line_no is not None:
            where += f"{line_no}: "
        super().__init__(f"{where}{reason}")


class MissingFile(Mono3dAugError):
    """A referenced sample, image, or label file does not exist."""


class MissingSample(MissingFile):
    """A requested sample id is not present in the dataset index."""


class CorruptImage(Mono3dAugError):
    """An image file exists but cannot be decoded."""


class IoFailure(Mono3dAugError):
    """Reading or writing dataset files failed."""


class DimensionMismatch(Mono3dAugError):
    """Input samples could not be conformed to a common image size."""


class MissingScore(Mono3dAugError):
    """A prediction label lacks the confidence score required for ranking."""


class IdMismatch(Mono3dAugError):
    """Ground-truth and prediction sample ids do not line up."""


class MissingClass(Mono3dAugError):
    """A per-class table lacks one of the classes being aggregated."""


class ZeroFrequency(Mono3dAugError):
    """A class frequency of zero makes inverse-frequency weights undefined."""


class EmptySplit(Mono3dAugError):
    """A split contains no usable ground-truth instances."""
