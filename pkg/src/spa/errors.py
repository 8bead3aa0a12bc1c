"""Exception hierarchy shared across the package."""


class SpaError(Exception):
    """Base class for all errors raised by this package."""


class InventoryError(SpaError):
    """Malformed phoneme inventory (file or constructed)."""


class LexiconError(SpaError):
    """Malformed lexicon file: bad columns, unknown symbols, unpaired rows."""


class DataConsistencyError(SpaError):
    """A verb pair violates the phonological rule it is flagged to obey."""


class EncodingError(SpaError):
    """Bit-vector encoding or decoding failure (bad symbol, bad length)."""


class CodebookSearchError(SpaError):
    """Codebook construction exhausted its search budget."""

    def __init__(self, message, best_distance=None):
        super().__init__(message)
        self.best_distance = best_distance


class ConfigError(SpaError):
    """Invalid experiment configuration or split specification."""
