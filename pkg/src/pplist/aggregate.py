"""Key aggregation and multi-signatures along a delivery route.

The route is the ordered list of station public keys, in signing
order. Each key gets a coefficient h_i = H2(Y_i || route) that binds
it to the whole key set, which is what blocks rogue-key attacks; the
aggregated key is YA = prod Y_i^{h_i}. Stations sign the same base
point H1(C1 || C2 || m) and the partial signatures multiply into one
compact aggregate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .groups import (
    G1Element,
    G2Element,
    Q,
    hash_h1,
    hash_h2_all,
    pairing_product_is_identity,
)
from .keys import KeyPair, PublicKey

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RouteAggregate:
    """A route with its coefficients and aggregated key, all recomputable."""

    route: tuple[PublicKey, ...]
    h: tuple[int, ...]
    ya: G2Element

    @property
    def d(self) -> int:
        return len(self.route)


@dataclass(frozen=True)
class PartialSignature:
    position: int  # 1-based slot on the route
    sig: G1Element


@dataclass(frozen=True)
class AggregateSignature:
    sigma: G1Element


def aggregate_keys(route, coefficients=None) -> RouteAggregate:
    """Compute h_i and YA for an ordered route of station keys.

    Duplicate keys are allowed (a route may revisit a hub); they get
    identical coefficients. ``coefficients`` overrides the hashed h_i
    values and exists for tests that need small known exponents.
    """
    keys = tuple(route)
    if not keys:
        raise ValueError("empty key set")
    for pk in keys:
        if pk.role != "station":
            raise ValueError(f"route keys must have station role, got {pk.role!r}")
    ys = [pk.y for pk in keys]
    if coefficients is None:
        h = tuple(hash_h2_all(ys))
    else:
        h = tuple(int(c) % Q for c in coefficients)
        if len(h) != len(keys):
            raise ValueError("coefficient count does not match route length")
    ya = G2Element.identity()
    for y, hi in zip(ys, h):
        ya = ya * y**hi
    return RouteAggregate(route=keys, h=h, ya=ya)


def station_sign(station: KeyPair, agg: RouteAggregate, position: int, pseudonym, m: bytes) -> PartialSignature:
    """Produce Sig_i = H1(C1 || C2 || m)^{h_i * x_i} for route slot i."""
    if not 1 <= position <= agg.d:
        raise ValueError(f"position {position} out of range 1..{agg.d}")
    if agg.route[position - 1].y != station.y:
        raise ValueError("station not at position")
    base = hash_h1(pseudonym.c1, pseudonym.c2, m)
    return PartialSignature(
        position=position,
        sig=base ** (agg.h[position - 1] * station.x % Q),
    )


def aggregate_signatures(parts, d: int) -> AggregateSignature:
    """Multiply partial signatures into sigma; order does not matter.

    Exactly one partial per position 1..d is required; anything else
    is rejected with the offending positions listed.
    """
    parts = list(parts)
    counts: dict[int, int] = {}
    for part in parts:
        counts[part.position] = counts.get(part.position, 0) + 1
    missing = sorted(set(range(1, d + 1)) - set(counts))
    duplicate = sorted(p for p, n in counts.items() if n > 1)
    stray = sorted(set(counts) - set(range(1, d + 1)))
    problems = []
    if missing:
        problems.append("missing positions " + ", ".join(map(str, missing)))
    if duplicate:
        problems.append("duplicate positions " + ", ".join(map(str, duplicate)))
    if stray:
        problems.append("positions out of range " + ", ".join(map(str, stray)))
    if problems:
        raise ValueError("; ".join(problems))
    sigma = G1Element.identity()
    for part in parts:
        sigma = sigma * part.sig
    return AggregateSignature(sigma=sigma)


def verify_aggregate(sig: AggregateSignature, pseudonym, ya: G2Element, m: bytes) -> bool:
    """Check e(sigma, g2^-1) * e(H1(C1 || C2 || m), YA) == 1.

    Runs as a single product of pairings. Malformed inputs yield False
    with a log line rather than an exception.
    """
    try:
        base = hash_h1(pseudonym.c1, pseudonym.c2, m)
        return pairing_product_is_identity(
            [(sig.sigma, G2Element.generator().inverse()), (base, ya)]
        )
    except (AttributeError, TypeError, ValueError) as exc:
        log.debug("verify_aggregate rejected malformed input: %s", exc)
        return False


def check_partial(part: PartialSignature, agg: RouteAggregate, pseudonym, m: bytes) -> bool:
    """Debug helper: does e(Sig_i, g2) == e(H1, Y_i^{h_i}) hold?

    Not part of the protocol; useful to localize the bad link when an
    aggregate chain fails.
    """
    if not 1 <= part.position <= agg.d:
        return False
    base = hash_h1(pseudonym.c1, pseudonym.c2, m)
    target = agg.route[part.position - 1].y ** agg.h[part.position - 1]
    return pairing_product_is_identity(
        [(part.sig, G2Element.generator().inverse()), (base, target)]
    )


def format_partial(part: PartialSignature) -> str:
    """One-line exchange format: "position sig_hex"."""
    return f"{part.position} {part.sig.encode_hex()}"


def parse_partial(line: str) -> PartialSignature:
    pieces = line.split()
    if len(pieces) != 2:
        raise ValueError(f"expected 'position sig_hex', got {line!r}")
    try:
        position = int(pieces[0])
    except ValueError:
        raise ValueError(f"bad position in partial line {line!r}") from None
    return PartialSignature(position=position, sig=G1Element.decode_hex(pieces[1]))
