"""Order-bound pseudonyms, the ownership sigma protocol, and tracing.

A pseudonym is an ElGamal-style pair hiding the user's public key
under the trace party's key:

    k  = H3(x_u || m)
    C1 = g2^k
    C2 = Y_t^k * g2^{x_u}

Because k is derived from the message, the pseudonym is deterministic
per (user, order); two orders with byte-identical message content
therefore share a pseudonym. Callers who need distinct pseudonyms for
repeat orders should fold an order id into m.

Ownership of a pseudonym is shown with a three-move proof of knowledge
of (k, x_u); the holder of the trace key can strip the blinding from
any valid delivery record and recover g2^{x_u}.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path

from .aggregate import verify_aggregate
from .groups import G2Element, Q, TAG_FS, _hash_to_scalar, hash_h3, random_scalar
from .keys import KeyPair, PublicKey, _parse_fields, _require

log = logging.getLogger(__name__)

_g2 = G2Element.generator()


class TraceError(Exception):
    """The record failed re-verification and cannot be traced."""


@dataclass(frozen=True)
class Pseudonym:
    c1: G2Element
    c2: G2Element


@dataclass(frozen=True)
class OwnershipResponse:
    r1: int
    r2: int


@dataclass(frozen=True)
class OwnershipTranscript:
    """One complete proof session: commitment, challenge, response."""

    pseudonym: Pseudonym
    v1_point: G2Element
    v2_point: G2Element
    c: int
    r1: int
    r2: int


def derive_k(x_u: int, m: bytes) -> int:
    """Pseudonym nonce; nonzero by construction.

    A vanishing hash would make C1 the identity, so that negligible
    case re-hashes with an appended counter byte.
    """
    k = hash_h3(x_u, m)
    counter = 0
    while k == 0:
        k = hash_h3(x_u, bytes(m) + counter.to_bytes(1, "big"))
        counter += 1
    return k


def pseudonym_from_parts(k: int, x_u: int, tracer_y: G2Element) -> Pseudonym:
    """Assemble (C1, C2) from explicit scalars; test seam and inner step."""
    return Pseudonym(c1=_g2**k, c2=tracer_y**k * _g2**x_u)


def derive_pseudonym(user: KeyPair, tracer_pub: PublicKey, m: bytes) -> Pseudonym:
    """Deterministic pseudonym binding the user's key to order m."""
    if user.role != "user":
        raise ValueError(f"user keypair required, got role {user.role!r}")
    if tracer_pub.role != "tracer":
        raise ValueError(f"tracer public key required, got role {tracer_pub.role!r}")
    return pseudonym_from_parts(derive_k(user.x, m), user.x, tracer_pub.y)


class OwnershipCommitment:
    """Prover state for one proof session.

    Single use: responding consumes the state, because answering two
    different challenges from one commitment hands the verifier the
    witness.
    """

    def __init__(self, v1: int, v2: int, tracer_y: G2Element):
        self.v1_point = _g2**v1
        self.v2_point = tracer_y**v1 * _g2**v2
        self._v1 = v1 % Q
        self._v2 = v2 % Q
        self._used = False


def prove_commit(
    user: KeyPair,
    tracer_pub: PublicKey,
    pseudonym: Pseudonym,
    rng: random.Random | None = None,
) -> OwnershipCommitment:
    """First move: commit to fresh (v1, v2)."""
    if rng is None:
        rng = random.SystemRandom()
    return OwnershipCommitment(random_scalar(rng), random_scalar(rng), tracer_pub.y)


def challenge(rng: random.Random | None = None) -> int:
    """Second move: the verifier's uniform challenge."""
    if rng is None:
        rng = random.SystemRandom()
    return random_scalar(rng)


def prove_respond(state: OwnershipCommitment, c: int, user: KeyPair, m: bytes) -> OwnershipResponse:
    """Third move: r1 = v1 - c*k, r2 = v2 - c*x_u (mod Q)."""
    if state._used:
        raise ValueError("commitment already consumed")
    state._used = True
    k = derive_k(user.x, m)
    return OwnershipResponse(
        r1=(state._v1 - c * k) % Q,
        r2=(state._v2 - c * user.x) % Q,
    )


def verify_proof(tracer_pub: PublicKey, t: OwnershipTranscript) -> bool:
    """Accept iff V1 == g2^{r1} * C1^c and V2 == Y_t^{r1} * g2^{r2} * C2^c.

    Malformed transcripts verify False with a log line, never raise.
    """
    try:
        first = t.v1_point == _g2**t.r1 * t.pseudonym.c1**t.c
        second = t.v2_point == tracer_pub.y**t.r1 * _g2**t.r2 * t.pseudonym.c2**t.c
    except (AttributeError, TypeError, ValueError) as exc:
        log.debug("verify_proof rejected malformed transcript: %s", exc)
        return False
    return first and second


def simulate_transcript(
    tracer_pub: PublicKey,
    pseudonym: Pseudonym,
    c: int,
    rng: random.Random | None = None,
) -> OwnershipTranscript:
    """Build an accepting transcript for a given challenge without the
    witness, by choosing the responses first.

    This is the honest-verifier zero-knowledge simulator; its existence
    is what makes transcripts non-revealing.
    """
    if rng is None:
        rng = random.SystemRandom()
    r1, r2 = random_scalar(rng), random_scalar(rng)
    return OwnershipTranscript(
        pseudonym=pseudonym,
        v1_point=_g2**r1 * pseudonym.c1**c,
        v2_point=tracer_pub.y**r1 * _g2**r2 * pseudonym.c2**c,
        c=c % Q,
        r1=r1,
        r2=r2,
    )


def fs_challenge(pseudonym: Pseudonym, v1_point: G2Element, v2_point: G2Element, context: bytes = b"") -> int:
    """Non-interactive challenge: hash of the commitment and statement."""
    payload = (
        pseudonym.c1.encode()
        + pseudonym.c2.encode()
        + v1_point.encode()
        + v2_point.encode()
        + bytes(context)
    )
    return _hash_to_scalar(TAG_FS, payload)


def prove_noninteractive(
    user: KeyPair,
    tracer_pub: PublicKey,
    pseudonym: Pseudonym,
    m: bytes,
    rng: random.Random | None = None,
    context: bytes = b"",
) -> OwnershipTranscript:
    state = prove_commit(user, tracer_pub, pseudonym, rng)
    c = fs_challenge(pseudonym, state.v1_point, state.v2_point, context)
    resp = prove_respond(state, c, user, m)
    return OwnershipTranscript(
        pseudonym=pseudonym,
        v1_point=state.v1_point,
        v2_point=state.v2_point,
        c=c,
        r1=resp.r1,
        r2=resp.r2,
    )


def verify_noninteractive(tracer_pub: PublicKey, t: OwnershipTranscript, context: bytes = b"") -> bool:
    """Check the challenge derivation, then the sigma equations."""
    if t.c != fs_challenge(t.pseudonym, t.v1_point, t.v2_point, context):
        return False
    return verify_proof(tracer_pub, t)


def trace(tracer: KeyPair, record) -> PublicKey:
    """De-anonymize a delivery record: Y_u = C2 / C1^{x_t}.

    The record's aggregate signature is re-verified first; anything
    invalid or undelivered is refused rather than traced.
    """
    if tracer.role != "tracer":
        raise ValueError(f"tracer keypair required, got role {tracer.role!r}")
    sigma = record.sigma
    if sigma is None or not verify_aggregate(sigma, record.pseudonym, record.ya, record.m):
        raise TraceError("untraceable: invalid record")
    y_u = record.pseudonym.c2 * (record.pseudonym.c1**tracer.x).inverse()
    return PublicKey(role="user", y=y_u)


def write_pseudonym(path, p: Pseudonym) -> None:
    Path(path).write_text(f"c1: {p.c1.encode_hex()}\nc2: {p.c2.encode_hex()}\n")


def read_pseudonym(path) -> Pseudonym:
    fields = _parse_fields(path)
    c1 = G2Element.decode_hex(_require(fields, "c1", path))
    c2 = G2Element.decode_hex(_require(fields, "c2", path))
    if c1.is_identity() or c2.is_identity():
        raise ValueError(f"{path}: identity pseudonym component rejected")
    return Pseudonym(c1=c1, c2=c2)


def render_transcript(t: OwnershipTranscript) -> str:
    return (
        f"c1: {t.pseudonym.c1.encode_hex()}\n"
        f"c2: {t.pseudonym.c2.encode_hex()}\n"
        f"V1: {t.v1_point.encode_hex()}\n"
        f"V2: {t.v2_point.encode_hex()}\n"
        f"c: {t.c:064x}\n"
        f"r1: {t.r1:064x}\n"
        f"r2: {t.r2:064x}\n"
    )


def write_transcript(path, t: OwnershipTranscript) -> None:
    Path(path).write_text(render_transcript(t))


def parse_transcript_fields(fields: dict, source) -> OwnershipTranscript:
    def scalar(name: str) -> int:
        try:
            value = int(_require(fields, name, source), 16)
        except ValueError:
            raise ValueError(f"{source}: field {name!r} is not hex") from None
        if not 0 <= value < Q:
            raise ValueError(f"{source}: field {name!r} out of range")
        return value

    return OwnershipTranscript(
        pseudonym=Pseudonym(
            c1=G2Element.decode_hex(_require(fields, "c1", source)),
            c2=G2Element.decode_hex(_require(fields, "c2", source)),
        ),
        v1_point=G2Element.decode_hex(_require(fields, "V1", source)),
        v2_point=G2Element.decode_hex(_require(fields, "V2", source)),
        c=scalar("c"),
        r1=scalar("r1"),
        r2=scalar("r2"),
    )


def read_transcript(path) -> OwnershipTranscript:
    return parse_transcript_fields(_parse_fields(path), path)
