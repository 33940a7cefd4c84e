"""Key generation and key files for the three protocol roles.

All roles share the same structure (secret scalar x, public point
y = g2^x); the role tag exists so the CLI cannot accidentally use a
tracer key where a station key belongs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .groups import G2Element, Q

ROLES = ("station", "user", "tracer")

_g2 = G2Element.generator()


@dataclass(frozen=True)
class KeyPair:
    role: str
    x: int
    y: G2Element


@dataclass(frozen=True)
class PublicKey:
    role: str
    y: G2Element


def _check_role(role: str) -> None:
    if role not in ROLES:
        raise ValueError(f"unknown role {role!r}, expected one of {', '.join(ROLES)}")


def keygen(role: str, rng: random.Random | None = None) -> KeyPair:
    """Draw x uniformly from [1, Q) and publish y = g2^x.

    Zero is excluded from the draw so the public key can never be the
    identity.
    """
    _check_role(role)
    if rng is None:
        rng = random.SystemRandom()
    x = rng.randrange(1, Q)
    return KeyPair(role=role, x=x, y=_g2**x)


def keypair_from_secret(role: str, x: int) -> KeyPair:
    """Build the keypair for a known exponent (fixtures and tests)."""
    _check_role(role)
    if not 1 <= x < Q:
        raise ValueError("secret key out of range")
    return KeyPair(role=role, x=x, y=_g2**x)


def public_key_of(kp: KeyPair) -> PublicKey:
    """Strip the secret; the result carries no key material."""
    return PublicKey(role=kp.role, y=kp.y)


def write_keypair(path, kp: KeyPair) -> None:
    Path(path).write_text(f"role: {kp.role}\nx: {kp.x:064x}\ny: {kp.y.encode_hex()}\n")


def write_public(path, pk: PublicKey) -> None:
    Path(path).write_text(f"role: {pk.role}\ny: {pk.y.encode_hex()}\n")


def _parse_fields(path) -> dict:
    """Parse a small "name: value" text file into a dict."""
    fields = {}
    for number, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        name, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"{path}: line {number}: expected 'name: value'")
        fields[name.strip()] = value.strip()
    return fields


def _require(fields: dict, name: str, path) -> str:
    if name not in fields:
        raise ValueError(f"{path}: missing field {name!r}")
    return fields[name]


def read_keypair(path) -> KeyPair:
    fields = _parse_fields(path)
    role = _require(fields, "role", path)
    _check_role(role)
    raw_x = _require(fields, "x", path)
    try:
        x = int(raw_x, 16)
    except ValueError:
        raise ValueError(f"{path}: field 'x' is not hex") from None
    if not 1 <= x < Q:
        raise ValueError(f"{path}: secret key out of range")
    y = G2Element.decode_hex(_require(fields, "y", path))
    if _g2**x != y:
        raise ValueError(f"{path}: public key does not match secret")
    return KeyPair(role=role, x=x, y=y)


def read_public(path) -> PublicKey:
    """Read a public key file; an 'x' line, if present, is ignored."""
    fields = _parse_fields(path)
    role = _require(fields, "role", path)
    _check_role(role)
    y = G2Element.decode_hex(_require(fields, "y", path))
    if y.is_identity():
        raise ValueError(f"{path}: identity public key rejected")
    return PublicKey(role=role, y=y)
