"""Hot inner loops, each with a numba-compiled and a pure-numpy implementation.

The public names resolve to the compiled version unless ``SWIPEFUSION_NUMBA=0``.
"""
from .._accel import USE_NUMBA
from .editdist import levenshtein_batch, spatial_logprob_batch
from .keypath import keypath_nbest, segment_costs

__all__ = ["USE_NUMBA", "levenshtein_batch", "spatial_logprob_batch", "keypath_nbest", "segment_costs"]
