"""Turbo decoding of generalized parallel concatenated block codes.

Cyclic component codes (BCH, quadratic residue) are decoded with a
shift-and-flip soft-input hard-output search, converted to soft output
through an empirically calibrated confidence value, and iterated with
unscaled extrinsic exchange.  The package also ships the AWGN simulation
harness, Shannon-limit computations, a config-driven CLI, and sklearn-style
estimator wrappers.
"""

from .channel import (
    BerRecord,
    ChannelConfig,
    awgn_add,
    bpsk_modulate,
    hard_decision,
    run_ber,
    shannon_limit,
    sigma_from_ebn0,
)
from .concatenation import GpcbCode, gpcb_encode, gpcb_rate, split_codeword
from .confidence import (
    ConfidenceTable,
    aposteriori,
    calibrate_confidence,
    destructive_distance,
    extrinsic_vector,
)
from .cyclic import (
    CyclicCode,
    build_bch,
    build_qr,
    cyclic_shift,
    encode_systematic,
    get_code,
    is_codeword,
    list_codes,
)
from .estimators import CyclicCodeDecoder, GpcbEncoder, GpcbTurboDecoder
from .gf2 import (
    BinaryPolynomial,
    CodeConstructionError,
    GaloisField,
    build_field,
    gf2_poly_divmod,
    minimal_polynomial,
)
from .interleavers import Interleaver, make_interleaver
from .siho import (
    DecodeResult,
    DecoderConfig,
    error_patterns,
    rank_shifts,
    reliability_sort,
    siho_decode,
    siho_decode_batch,
)
from .systems import ComponentSystem, TurboSystem, UncodedBpsk, turbo_system
from .turbo import TurboConfig, half_iteration, turbo_decode

__version__ = "0.1.0"
