"""Exception types shared across the package."""


class PqcDnsError(Exception):
    """Base class for all errors raised by this package."""


# --- crypto suite ---

class UnknownAlgorithm(PqcDnsError):
    pass


class WrongKind(PqcDnsError):
    pass


class MalformedKey(PqcDnsError):
    pass


class MalformedCiphertext(PqcDnsError):
    pass


class EmptySecret(PqcDnsError):
    pass


# --- DNS wire ---

class InvalidName(PqcDnsError):
    pass


class OversizeRecord(PqcDnsError):
    pass


class Malformed(PqcDnsError):
    """Undecodable wire bytes; carries the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class CompressionLoop(Malformed):
    pass


# --- DNSSEC ---

class EmptyRrset(PqcDnsError):
    pass


class RrsetMismatch(PqcDnsError):
    pass


class InvalidValidity(PqcDnsError):
    pass


class MissingRecords(PqcDnsError):
    pass


# --- secure channel ---

class EmptyOffer(PqcDnsError):
    pass


class DowngradeRejected(PqcDnsError):
    pass


class NoCommonSuite(PqcDnsError):
    pass


class SignatureInvalid(PqcDnsError):
    pass


class KemFailure(PqcDnsError):
    pass


class HandshakeTimeout(PqcDnsError):
    pass


class AuthFailure(PqcDnsError):
    pass


class ReplayDetected(PqcDnsError):
    pass


# --- transport ---

class Oversize(PqcDnsError):
    pass


class TruncatedFrame(PqcDnsError):
    pass


class MalformedHttp(PqcDnsError):
    pass


class WrongContentType(PqcDnsError):
    pass


# --- resolver ---

class ParseError(PqcDnsError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class BindFailure(PqcDnsError):
    pass


# --- bench harness ---

class ZeroElapsed(PqcDnsError):
    pass


class ZeroSystemDelta(PqcDnsError):
    pass


class EmptyCsv(PqcDnsError):
    pass


class HandshakeFailure(PqcDnsError):
    pass


class ResolverUnreachable(PqcDnsError):
    pass


class PartialFailure(PqcDnsError):
    def __init__(self, message, failures=0):
        super().__init__(message)
        self.failures = failures


# --- perf model ---

class SuiteMismatch(PqcDnsError):
    pass


# --- config / cli ---

class ConfigError(PqcDnsError):
    pass


class ConflictingFlags(ConfigError):
    pass
