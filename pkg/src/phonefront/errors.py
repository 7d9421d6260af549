"""Exception hierarchy. Everything raised on bad data derives from PhonefrontError."""


class PhonefrontError(Exception):
    """Base class for all data and usage errors raised by this package."""


class SymbolTableError(PhonefrontError):
    """Malformed or inconsistent symbol-table file."""


class PhoneParseError(PhonefrontError):
    """A phone string could not be segmented against the symbol table."""

    def __init__(self, message: str, *, char_index: int | None = None,
                 byte_offset: int | None = None, segment_index: int | None = None):
        super().__init__(message)
        self.char_index = char_index
        self.byte_offset = byte_offset
        self.segment_index = segment_index


class SchemaError(PhonefrontError):
    """Malformed feature table or diacritic rules file."""


class EncodeError(PhonefrontError):
    """A segment could not be encoded under the active feature schema."""


class InventoryError(PhonefrontError):
    """Problem loading or using a phone inventory."""


class PhoneMapError(PhonefrontError):
    """Problem building, loading, or applying a phone map."""


class LexiconError(PhonefrontError):
    """Malformed pronunciation-dictionary file or invalid lexicon operation."""


class CorpusError(PhonefrontError):
    """Malformed transcribed-utterance corpus file."""


class SegmentationError(PhonefrontError):
    """An utterance could not be split into per-word phone spans."""


class AlignmentError(PhonefrontError):
    """Grapheme-phone alignment failed for an entire lexicon."""


class PredictionError(PhonefrontError):
    """A word could not be converted by a trained G2P model."""


class ModelFormatError(PhonefrontError):
    """A serialized G2P model file is unreadable or has the wrong version."""


class EvalError(PhonefrontError):
    """Malformed evaluation input or mismatched system outputs."""


class UsageError(PhonefrontError):
    """Bad command-line arguments."""
