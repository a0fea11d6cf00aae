"""Joint encryption and error correction with finite-geometry quasi-cyclic LDPC codes."""
from .analysis import code_params, complexity_report, param_search, security_report
from .channel import ChannelSpec, run_ber, transmit, uncoded_ber
from .cipher import (
    CiphertextFrame,
    decrypt_hard,
    decrypt_soft,
    encrypt,
    permutation_apply,
    permutation_invert,
)
from .circulant import BlockRowParityCheck, Circulant, circ_inverse, circ_mul
from .errors import *  # noqa: F401,F403
from .field import GaloisField, field_create
from .geometry import GeometryKind, GeometrySpec, enumerate_cyclic_classes
from .keys import SecretKey, deserialize, key_size_report, keygen, serialize
from .spa import DecoderConfig, TannerGraph, decode

__version__ = "0.1.0"
