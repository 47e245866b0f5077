"""DNS secured by pluggable legacy, post-quantum, and hybrid cryptography,
with a benchmarking harness and a composition model for the results."""

from . import (
    bench,
    channel,
    cli,
    config,
    dnssec,
    errors,
    perfmodel,
    policy,
    resolver,
    suites,
    transport,
    wire,
)
from .suites import (
    AlgorithmId,
    AlgorithmSuite,
    CryptoBackend,
    DEFAULT_BACKEND,
    DeploymentClass,
    Kind,
    all_algorithms,
    get_algorithm,
    make_suite,
)

__version__ = "1.0.0"

__all__ = [
    "bench", "channel", "cli", "config", "dnssec", "errors", "perfmodel",
    "policy", "resolver", "suites", "transport", "wire",
    "AlgorithmId", "AlgorithmSuite", "CryptoBackend", "DEFAULT_BACKEND",
    "DeploymentClass", "Kind", "all_algorithms", "get_algorithm", "make_suite",
    "__version__",
]
