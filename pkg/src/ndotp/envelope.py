"""Message pipeline and the key and ciphertext file formats.

Encryption, stage by stage::

    bits -> codeword(n_plain) -> one-line -> inject k times -> codeword(n)
         -> differentiate -> precondition -> NDOTP -> integer -> envelope

Decryption undoes each stage in reverse. Three stages double as integrity
checks: the remainder digits seen by ``deprecondition``, the single-cycle
test of every inverse injection, and the final bound on the message value.

The low ``RETRY_BITS`` bits of the encoded integer are a retry counter,
not message data. Some differentiated codewords put a digit equal to its
modulus at a remainder position and cannot be preconditioned; the encoder
then bumps the counter and starts again. The decoder discards the counter.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from math import factorial

from .calculus import differentiate, integrate
from .cipher import KeyMaterial, ndotp_decrypt, ndotp_encrypt
from .errors import (
    CapacityExceeded,
    IntegrityFailure,
    MalformedEnvelope,
    MalformedKey,
    NdotpError,
    RemainderOutOfRange,
)
from .foata import _extract, inject_k
from .perm import Permutation, lehmer_to_oneline, oneline_to_lehmer, random_lehmer
from .precondition import PreconditionConfig, deprecondition, precondition, search_config
from .radix import BitMessage, capacity_bits, factoradic_to_int, int_to_factoradic

ENVELOPE_MAGIC = b"NDC1"
KEY_MAGIC = b"NDK1"
FORMAT_VERSION = 1
RETRY_BITS = 8

_ENVELOPE_HEADER = struct.Struct("<4sBHHI")
_KEY_HEADER = struct.Struct("<4sBH")
_MAX_FIELD = 0xFFFF


class NoAdmissibleEncoding(NdotpError):
    """Every retry counter value produced an unpreconditionable codeword."""


@dataclass(frozen=True)
class PipelineParams:
    nu_plain: int
    k_redundancy: int
    cfg: PreconditionConfig | None = field(default=None)

    def __post_init__(self):
        if self.k_redundancy < 0:
            raise ValueError("redundancy must be nonnegative")
        if not 2 <= self.nu_plain or self.order > _MAX_FIELD:
            raise ValueError(f"orders must satisfy 2 <= nu_plain and nu_plain + k <= {_MAX_FIELD}")
        if capacity_bits(self.nu_plain) < RETRY_BITS:
            raise ValueError(f"nu_plain={self.nu_plain} leaves no room for the {RETRY_BITS}-bit retry counter")
        if self.cfg is None:
            object.__setattr__(self, "cfg", search_config(self.order))
        elif self.cfg.order != self.order:
            raise ValueError("precondition config order does not match nu_plain + k")

    @property
    def order(self):
        return self.nu_plain + self.k_redundancy

    @property
    def n_payload(self):
        """Bits held by the plain codeword, retry counter included."""
        return capacity_bits(self.nu_plain)

    @property
    def max_message_bits(self):
        return self.n_payload - RETRY_BITS

    @property
    def body_bytes(self):
        return ((factorial(self.order) - 1).bit_length() + 7) // 8


def encode_plaintext(value, params):
    """Integer (message and retry counter) to the codeword handed to the pad.

    Raises :class:`RemainderOutOfRange` when preconditioning is impossible.
    """
    w = int_to_factoradic(value, params.nu_plain)
    q = inject_k(lehmer_to_oneline(w), params.k_redundancy)
    d = differentiate(oneline_to_lehmer(q))
    return precondition(d, params.cfg) if params.cfg else d


def decode_plaintext(w, params):
    """Inverse of :func:`encode_plaintext`; every detectable inconsistency raises IntegrityFailure."""
    if params.cfg:
        try:
            w = deprecondition(w, params.cfg)
        except RemainderOutOfRange as exc:
            raise IntegrityFailure(str(exc), stage="precondition") from None
    q = list(lehmer_to_oneline(integrate(w)))
    for depth in range(params.k_redundancy):
        q = _extract(q)
        if q is None:
            raise IntegrityFailure(f"not a single cycle after {depth} extractions", stage="injection")
    return factoradic_to_int(oneline_to_lehmer(Permutation._trusted(q)))


@dataclass(frozen=True)
class CipherEnvelope:
    nu_plain: int
    k_redundancy: int
    payload_bits: int
    body: int
    version: int = FORMAT_VERSION

    @property
    def params(self):
        return PipelineParams(self.nu_plain, self.k_redundancy)

    def to_bytes(self):
        params = self.params
        header = _ENVELOPE_HEADER.pack(
            ENVELOPE_MAGIC, self.version, self.nu_plain, self.k_redundancy, self.payload_bits
        )
        return header + self.body.to_bytes(params.body_bytes, "big")

    @classmethod
    def from_bytes(cls, data):
        if len(data) < _ENVELOPE_HEADER.size:
            raise MalformedEnvelope("truncated header")
        magic, version, nu_plain, k, payload_bits = _ENVELOPE_HEADER.unpack_from(data)
        if magic != ENVELOPE_MAGIC:
            raise MalformedEnvelope(f"bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise MalformedEnvelope(f"unsupported version {version}")
        try:
            params = PipelineParams(nu_plain, k)
        except ValueError as exc:
            raise MalformedEnvelope(str(exc)) from None
        if payload_bits > params.max_message_bits:
            raise MalformedEnvelope(f"payload of {payload_bits} bits exceeds capacity {params.max_message_bits}")
        body = data[_ENVELOPE_HEADER.size :]
        if len(body) != params.body_bytes:
            raise MalformedEnvelope(f"body is {len(body)} bytes, expected {params.body_bytes}")
        return cls(nu_plain, k, payload_bits, int.from_bytes(body, "big"), version)


def encrypt_message(m, key, params):
    """Encrypt ``m`` under a single-use ``key`` of order ``params.order``."""
    if m.length > params.max_message_bits:
        raise CapacityExceeded(f"{m.length} bits exceed the {params.max_message_bits}-bit capacity")
    if key.order != params.order:
        raise ValueError(f"key order {key.order} != pipeline order {params.order}")
    for counter in range(1 << RETRY_BITS):
        try:
            w = encode_plaintext((m.value << RETRY_BITS) | counter, params)
        except RemainderOutOfRange:
            continue
        c = ndotp_encrypt(w, key)
        return CipherEnvelope(params.nu_plain, params.k_redundancy, m.length, factoradic_to_int(c))
    raise NoAdmissibleEncoding(f"all {1 << RETRY_BITS} retry counters failed; re-pad the message")


def decrypt_message(env, key):
    """Recover the message or raise :class:`IntegrityFailure`."""
    params = env.params
    if key.order != params.order:
        raise ValueError(f"key order {key.order} != envelope order {params.order}")
    if env.body >= factorial(params.order):
        raise IntegrityFailure("ciphertext value exceeds the codeword range", stage="range")
    w = ndotp_decrypt(int_to_factoradic(env.body, params.order), key)
    value = decode_plaintext(w, params) >> RETRY_BITS
    if value >> env.payload_bits:
        raise IntegrityFailure("decoded value exceeds the declared payload length", stage="length")
    return BitMessage(value, env.payload_bits)


def keygen(n, entropy=os.urandom):
    """Fresh pad of order ``n``; components are uniform on their ranges."""
    return KeyMaterial.from_lehmer(random_lehmer(n, entropy))


def key_to_bytes(key):
    n = key.order
    if n > _MAX_FIELD:
        raise ValueError(f"order {n} does not fit the key file format")
    return _KEY_HEADER.pack(KEY_MAGIC, FORMAT_VERSION, n) + struct.pack(f"<{n - 1}H", *key.components)


def key_from_bytes(data):
    if len(data) < _KEY_HEADER.size:
        raise MalformedKey("truncated header")
    magic, version, n = _KEY_HEADER.unpack_from(data)
    if magic != KEY_MAGIC:
        raise MalformedKey(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise MalformedKey(f"unsupported version {version}")
    if n < 1:
        raise MalformedKey("order must be positive")
    body = data[_KEY_HEADER.size :]
    if len(body) != 2 * (n - 1):
        raise MalformedKey(f"expected {n - 1} components, found {len(body) / 2:g}")
    comps = struct.unpack(f"<{n - 1}H", body)
    try:
        return KeyMaterial(comps)
    except ValueError as exc:
        raise MalformedKey(str(exc)) from None

