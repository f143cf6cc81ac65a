"""Word-gesture (swipe) decoding with spatial spelling correction, a contextual
language model and score fusion, plus a synthetic benchmark harness."""
from .decoder import KeyPathDecoder, ScoredCandidate, ShapeDecoder, shape_decode
from .fusion import FusionConfig, naive_correction, score_fusion
from .layout import KeyboardLayout, default_layout, load_layout, mobile_layout
from .lm import ContextualScorer, NGramModel, PhraseRecord, perplexity, train_ngram
from .metrics import TranscriptionEvent, cer, levenshtein, wpm
from .spell import EditCostModel, correction_scores, spatial_edit_logprob
from .trajectory import Trajectory
from .vocab import Vocabulary, default_vocab, load_vocab

__version__ = "0.1.0"

__all__ = [
    "KeyPathDecoder", "ScoredCandidate", "ShapeDecoder", "shape_decode", "FusionConfig", "naive_correction",
    "score_fusion", "KeyboardLayout", "default_layout", "load_layout", "mobile_layout", "ContextualScorer",
    "NGramModel", "PhraseRecord", "perplexity", "train_ngram", "TranscriptionEvent", "cer", "levenshtein", "wpm",
    "EditCostModel", "correction_scores", "spatial_edit_logprob", "Trajectory", "Vocabulary", "default_vocab",
    "load_vocab",
]
