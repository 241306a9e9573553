"""Exception hierarchy shared by the cipher, the envelope format and the CLI."""


class NdotpError(Exception):
    """Base class for every error raised by this package."""


class InvalidPermutation(NdotpError, ValueError):
    pass


class InvalidCodeword(NdotpError, ValueError):
    pass


class OrderMismatch(NdotpError, ValueError):
    pass


class NotSingleCycle(NdotpError, ValueError):
    """The permutation has more than one cycle.

    ``depth`` is the number of successful inverse injections performed
    before the failure; it is 0 for a plain single-step check.
    """

    def __init__(self, message, depth=0):
        super().__init__(message)
        self.depth = depth


class CapacityExceeded(NdotpError, ValueError):
    pass


class DecodeOverflow(NdotpError, ValueError):
    pass


class EntropyExhausted(NdotpError):
    pass


class RemainderOutOfRange(NdotpError, ValueError):
    """A digit at a remainder position equals its modulus and cannot be a CRT residue."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class MalformedEnvelope(NdotpError, ValueError):
    pass


class MalformedKey(NdotpError, ValueError):
    pass


class IntegrityFailure(NdotpError):
    """The ciphertext did not decrypt to a well-formed plaintext."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage
