"""Run configuration: key=value files, environment overrides, validation.

Precedence, lowest to highest: built-in defaults, config file, environment
variables (``PQCDNS_`` prefix), explicit overrides (CLI flags).  Unknown
keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import ConfigError, ConflictingFlags, ParseError, WrongKind
from .policy import PolicyMode
from .suites import AlgorithmId, Kind, get_algorithm
from .transport import TransportKind

ENV_PREFIX = "PQCDNS_"

_VALID_KEYS = {
    "kem", "ds", "dnssec_alg", "transport", "dnssec", "policy",
    "queries", "workers", "sessions", "out", "seed", "provider",
    "zone", "host", "port",
}

_BOOL_TRUE = {"on", "1", "true", "yes"}
_BOOL_FALSE = {"off", "0", "false", "no"}


@dataclass
class RunConfig:
    kem: AlgorithmId
    ds: AlgorithmId
    dnssec_alg: AlgorithmId | None = None
    transport: TransportKind = TransportKind.DOT
    dnssec: bool = False
    policy: PolicyMode = PolicyMode.ALLOW_LEGACY
    queries: int = 10
    workers: int = 1
    sessions: int = 1
    out: str = "."
    seed: int | None = None
    provider: str = "simulated"
    zone: str | None = None
    host: str = "127.0.0.1"
    port: int = 0
    raw: dict[str, str] = field(default_factory=dict)


def read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        lines = fh.read().splitlines()
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParseError(f"expected key=value: {stripped!r}", line=lineno)
        key, value = stripped.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _VALID_KEYS:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        values[key] = value.strip()
    return values


def env_overrides(environ: dict | None = None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    out = {}
    for key, value in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):].lower()
        if name in _VALID_KEYS:
            out[name] = value
    return out


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in _BOOL_TRUE:
        return True
    if lowered in _BOOL_FALSE:
        return False
    raise ConfigError(f"{key} must be on/off, got {value!r}")


def _parse_int(key: str, value: str, minimum: int) -> int:
    try:
        n = int(value)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if n < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {n}")
    return n


def parse_config(path: str | None = None,
                 overrides: dict[str, str] | None = None,
                 environ: dict | None = None) -> RunConfig:
    values: dict[str, str] = {"kem": "mlkem512", "ds": "mldsa44"}
    if path is not None:
        values.update(read_config_file(path))
    values.update(env_overrides(environ))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = key.lower().replace("-", "_")
        if key not in _VALID_KEYS:
            raise ConfigError(f"unknown override {key!r}")
        values[key] = str(value)

    kem = get_algorithm(values["kem"])
    if kem.kind != Kind.KEM:
        raise WrongKind(f"{kem.name} is a signature scheme, not a KEM")
    ds = get_algorithm(values["ds"])
    if ds.kind != Kind.SIGNATURE:
        raise WrongKind(f"{ds.name} is a KEM, not a signature scheme")
    dnssec_alg = None
    if "dnssec_alg" in values:
        dnssec_alg = get_algorithm(values["dnssec_alg"])
        if dnssec_alg.kind != Kind.SIGNATURE:
            raise WrongKind(f"{dnssec_alg.name} is not a signature scheme")

    try:
        transport = TransportKind(values.get("transport", "dot"))
    except ValueError:
        raise ConfigError(f"transport must be dot/doh/udp, "
                          f"got {values['transport']!r}") from None
    try:
        policy = PolicyMode(values.get("policy", "allow-legacy"))
    except ValueError:
        raise ConfigError(f"unknown policy {values['policy']!r}") from None
    provider = values.get("provider", "simulated")
    if provider not in ("simulated", "real"):
        raise ConfigError(f"provider must be real/simulated, got {provider!r}")

    return RunConfig(
        kem=kem, ds=ds, dnssec_alg=dnssec_alg, transport=transport,
        dnssec=_parse_bool("dnssec", values.get("dnssec", "off")),
        policy=policy,
        queries=_parse_int("queries", values.get("queries", "10"), 1),
        workers=_parse_int("workers", values.get("workers", "1"), 1),
        sessions=_parse_int("sessions", values.get("sessions", "1"), 1),
        out=values.get("out", "."),
        seed=int(values["seed"]) if "seed" in values else None,
        provider=provider,
        zone=values.get("zone"),
        host=values.get("host", "127.0.0.1"),
        port=_parse_int("port", values.get("port", "0"), 0),
        raw=values)


def check_transport_flags(args) -> None:
    """Reject combinations like --dot together with --doh."""
    chosen = [name for name in ("dot", "doh", "udp")
              if getattr(args, name, False)]
    if len(chosen) > 1:
        raise ConflictingFlags(f"--{chosen[0]} conflicts with --{chosen[1]}")
    if chosen and getattr(args, "transport", None):
        raise ConflictingFlags(f"--{chosen[0]} conflicts with --transport")
