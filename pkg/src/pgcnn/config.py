"""Budgets, default primes and environment overrides.

Environment variables (explicit arguments always win):

- ``PGCNN_MAX_GROUP_ORDER``: largest power-group order allowed (default 2**20)
- ``PGCNN_MAX_MONOMIALS``: largest monomial basis allowed (default 2**20)
- ``PGCNN_PRIMES``: comma separated primes used for rank certification
"""

from __future__ import annotations

import os

DEFAULT_PRIMES = (1048583, 1048589, 1048601)  # the first three primes above 2**20
DEFAULT_MAX_GROUP_ORDER = 2**20
DEFAULT_MAX_MONOMIALS = 2**20
MATERIALIZE_LIMIT = 4096  # Cayley tables are only built up to this order
COEFF_BOUND = 1000
MIN_CERT_PRIME = 2**20


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_group_order(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("PGCNN_MAX_GROUP_ORDER", DEFAULT_MAX_GROUP_ORDER)


def max_monomials(override: int | None = None) -> int:
    if override is not None:
        return override
    return _env_int("PGCNN_MAX_MONOMIALS", DEFAULT_MAX_MONOMIALS)


def default_primes() -> tuple[int, ...]:
    raw = os.environ.get("PGCNN_PRIMES")
    if not raw:
        return DEFAULT_PRIMES
    return tuple(int(p) for p in raw.split(",") if p.strip())
