"""Pairing-based delivery signing with pseudonymous senders, aggregated
station signatures, and designated tracing."""

from .aggregate import (
    AggregateSignature,
    PartialSignature,
    RouteAggregate,
    aggregate_keys,
    aggregate_signatures,
    check_partial,
    station_sign,
    verify_aggregate,
)
from .groups import (
    G1Element,
    G2Element,
    GroupParams,
    GtElement,
    Q,
    hash_h1,
    hash_h2,
    hash_h2_all,
    hash_h3,
    pairing,
    pairing_product_is_identity,
    setup,
)
from .keys import (
    ROLES,
    KeyPair,
    PublicKey,
    keygen,
    keypair_from_secret,
    public_key_of,
    read_keypair,
    read_public,
    write_keypair,
    write_public,
)
from .pseudonym import (
    OwnershipCommitment,
    OwnershipResponse,
    OwnershipTranscript,
    Pseudonym,
    TraceError,
    challenge,
    derive_pseudonym,
    prove_commit,
    prove_noninteractive,
    prove_respond,
    simulate_transcript,
    trace,
    verify_noninteractive,
    verify_proof,
)
from .registry import DeliveryRecord, Ledger, LedgerError, open_ledger

__version__ = "0.1.0"

__all__ = [
    "AggregateSignature",
    "DeliveryRecord",
    "G1Element",
    "G2Element",
    "GroupParams",
    "GtElement",
    "KeyPair",
    "Ledger",
    "LedgerError",
    "OwnershipCommitment",
    "OwnershipResponse",
    "OwnershipTranscript",
    "PartialSignature",
    "Pseudonym",
    "PublicKey",
    "Q",
    "ROLES",
    "RouteAggregate",
    "TraceError",
    "aggregate_keys",
    "aggregate_signatures",
    "challenge",
    "check_partial",
    "derive_pseudonym",
    "hash_h1",
    "hash_h2",
    "hash_h2_all",
    "hash_h3",
    "keygen",
    "keypair_from_secret",
    "open_ledger",
    "pairing",
    "pairing_product_is_identity",
    "prove_commit",
    "prove_noninteractive",
    "prove_respond",
    "public_key_of",
    "read_keypair",
    "read_public",
    "setup",
    "simulate_transcript",
    "station_sign",
    "trace",
    "verify_aggregate",
    "verify_noninteractive",
    "verify_proof",
    "write_keypair",
    "write_public",
]
