"""phonefront: symbolic linguistic frontend toolkit for low-resource TTS.

Parses IPA phone strings, encodes segments as binary articulatory features,
maps phones across language inventories, builds pronunciation lexicons
(including makeshift dictionaries induced from phone-recognizer output),
trains small-data grapheme-to-phone models, and evaluates phone/character
error rates with bootstrap uncertainty.
"""

from .errors import (AlignmentError, CorpusError, EncodeError, EvalError,
                     InventoryError, LexiconError, ModelFormatError,
                     PhoneMapError, PhoneParseError, PhonefrontError,
                     PredictionError, SchemaError, SegmentationError,
                     SymbolTableError, UsageError)
from .features import (FeatureSchema, FeatureVector, encode, feature_distance,
                       load_schema, nearest_segment)
from .g2p import (AlignmentResult, G2PModel, Graphone, Prediction,
                  align_lexicon_em, ensemble_predictions, g2p_corpus,
                  load_model, predict, save_model, train_g2p)
from .inventory import (PhoneInventory, inventory_distance, load_all_inventories,
                        load_inventory, make_inventory, nearest_languages,
                        restrict_sequence)
from .ipa import (PhoneSequence, Segment, SymbolTable, canonicalize,
                  load_symbol_table, make_segment, parse_phone_string)
from .lexicon import (Lexicon, PronEntry, export_json, load_lexicon, lookup,
                      oov_words, save_lexicon)
from .makeshift import (SegmentationConfig, TranscribedUtterance,
                        build_makeshift_lexicon, estimate_alpha, load_corpus,
                        majority_vote, segment_phones)
from .metrics import (CorpusRates, EditAlignment, PairedDelta, cer,
                      corpus_rates, levenshtein, load_pairs,
                      paired_bootstrap_delta, per, per_utterance_rates, wer)
from .phone_map import (PhoneMap, apply_phone_map, build_phone_map,
                        load_phone_map, save_phone_map, unmapped_source_phones)
from .resources import data_path

__version__ = "0.1.0"
