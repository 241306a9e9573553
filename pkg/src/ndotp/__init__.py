"""Perfectly secret messages with built-in integrity checks.

A one-time pad over Lehmer codewords whose components entangle towards
the big end, two bijections (a pseudo-Hadamard transform over Chinese
remainders and a codeword derivative) that spread changes towards the
little end, and a redundancy injection that reads a one-line permutation
as a single cycle.
"""

from .calculus import differentiate, integrate
from .cipher import KeyMaterial, ndotp_decrypt, ndotp_encrypt
from .envelope import (
    CipherEnvelope,
    PipelineParams,
    decrypt_message,
    encrypt_message,
    key_from_bytes,
    key_to_bytes,
    keygen,
)
from .errors import IntegrityFailure, MalformedEnvelope, NdotpError, NotSingleCycle
from .foata import extract, extract_k, inject, inject_k
from .perm import LehmerCode, Permutation, SingleCycle, lehmer_to_oneline, oneline_to_lehmer
from .precondition import PreconditionConfig, deprecondition, precondition, search_config
from .radix import BitMessage, capacity_bits, factoradic_to_int, int_to_factoradic

__version__ = "0.1.0"
