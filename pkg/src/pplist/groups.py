"""Bilinear group layer: BLS12-381 wrappers, protocol hashes, encodings.

Everything above this module treats the pairing groups abstractly, so
the rest of the code is curve-agnostic. Notation is multiplicative
(``*`` combines elements, ``**`` raises to a scalar power), matching
the usual multi-signature write-ups even though the backend library
thinks of the curve additively.

Scalars are plain Python ints reduced mod ``Q``; they only become
byte strings at the extension boundary.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

try:
    from . import _backend
except ImportError as exc:  # pragma: no cover
    raise ImportError(
        "the pplist._backend extension is not built; install with "
        "`pip install -e . --no-build-isolation` (needs a Rust toolchain)"
    ) from exc

# Prime order of the BLS12-381 G1/G2/Gt subgroups (~2^255).
Q = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001

# Domain separation tags. H1 maps into G1, H2 and H3 into scalars,
# FS is the non-interactive challenge derivation.
TAG_H1 = b"PPLIST-H1"
TAG_H2 = b"PPLIST-H2"
TAG_H3 = b"PPLIST-H3"
TAG_FS = b"PPLIST-FS"

G1_ENC_LEN = 48
G2_ENC_LEN = 96


def _scalar_bytes(e: int) -> bytes:
    # backend wants 32 little-endian bytes, canonical in [0, Q)
    return (e % Q).to_bytes(32, "little")


def _len4(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big")


class _PointElement:
    """Shared behaviour of the two source groups.

    Instances are immutable handles onto backend points; every operation
    returns a new element.
    """

    __slots__ = ("_raw",)
    _backend_cls: type = None
    _enc_len = 0

    def __init__(self, raw):
        self._raw = raw

    @classmethod
    def generator(cls):
        return cls(cls._backend_cls.generator())

    @classmethod
    def identity(cls):
        return cls(cls._backend_cls.identity())

    @classmethod
    def decode(cls, data: bytes):
        """Decode a compressed point; only canonical, subgroup-checked
        encodings are accepted."""
        data = bytes(data)
        if len(data) != cls._enc_len:
            raise ValueError(
                f"{cls.__name__} encoding must be {cls._enc_len} bytes, got {len(data)}"
            )
        return cls(cls._backend_cls.from_compressed(data))

    @classmethod
    def decode_hex(cls, text: str):
        try:
            raw = bytes.fromhex(text.strip())
        except ValueError:
            raise ValueError(f"invalid hex for {cls.__name__}") from None
        return cls.decode(raw)

    def encode(self) -> bytes:
        return self._raw.to_compressed()

    def encode_hex(self) -> str:
        return self.encode().hex()

    def is_identity(self) -> bool:
        return self._raw.is_identity()

    def inverse(self):
        return type(self)(self._raw.neg())

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(self._raw.add(other._raw))

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        return type(self)(self._raw.mul(_scalar_bytes(exponent)))

    def __eq__(self, other):
        return type(other) is type(self) and self._raw == other._raw

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash((type(self).__name__, self._raw.__hash__()))

    def __repr__(self):
        return f"<{type(self).__name__} {self.encode_hex()[:12]}..>"


class G1Element(_PointElement):
    """Point in G1 (48-byte compressed encoding); signatures live here."""

    __slots__ = ()
    _backend_cls = _backend.G1
    _enc_len = G1_ENC_LEN


class G2Element(_PointElement):
    """Point in G2 (96-byte compressed encoding); public keys and
    pseudonym components live here."""

    __slots__ = ()
    _backend_cls = _backend.G2
    _enc_len = G2_ENC_LEN


class GtElement:
    """Element of the pairing target group.

    The backend exposes no canonical byte encoding for Gt, and no
    persisted artifact contains a Gt value, so this wrapper supports
    only arithmetic and comparison.
    """

    __slots__ = ("_raw",)

    def __init__(self, raw):
        self._raw = raw

    @classmethod
    def identity(cls):
        return cls(_backend.Gt.identity())

    def is_identity(self) -> bool:
        return self._raw.is_identity()

    def inverse(self):
        return GtElement(self._raw.inv())

    def __mul__(self, other):
        if type(other) is not GtElement:
            return NotImplemented
        return GtElement(self._raw.combine(other._raw))

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        return GtElement(self._raw.pow(_scalar_bytes(exponent)))

    def __eq__(self, other):
        return type(other) is GtElement and self._raw == other._raw

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        return "<Gt identity>" if self.is_identity() else "<Gt element>"


def pairing(a: G1Element, b: G2Element) -> GtElement:
    """The bilinear map e: G1 x G2 -> Gt."""
    if not isinstance(a, G1Element) or not isinstance(b, G2Element):
        raise TypeError("pairing takes (G1Element, G2Element)")
    return GtElement(_backend.pairing(a._raw, b._raw))


def pairing_product_is_identity(pairs) -> bool:
    """True iff the product of e(a_i, b_i) over all pairs is 1 in Gt.

    Computed as one multi-pairing with a single final exponentiation,
    which is how the aggregate verification equation is meant to run.
    """
    items = list(pairs)
    if not items:
        raise ValueError("empty pairing list")
    raw = []
    for a, b in items:
        if not isinstance(a, G1Element) or not isinstance(b, G2Element):
            raise TypeError("pairs must be (G1Element, G2Element)")
        raw.append((a._raw, b._raw))
    return _backend.multi_pairing_is_identity(raw)


@dataclass(frozen=True)
class GroupParams:
    """Fixed public parameters of the scheme."""

    q: int
    g1: G1Element
    g2: G2Element
    tags: tuple[bytes, bytes, bytes]

    def pair(self, a: G1Element, b: G2Element) -> GtElement:
        return pairing(a, b)


def setup() -> GroupParams:
    """Return the deterministic group parameters.

    Repeated calls yield byte-identical generators; there is no
    trusted-setup state to keep.
    """
    return GroupParams(
        q=Q,
        g1=G1Element.generator(),
        g2=G2Element.generator(),
        tags=(TAG_H1, TAG_H2, TAG_H3),
    )


def _hash_to_scalar(tag: bytes, payload: bytes) -> int:
    # 512-bit digest keeps the mod-Q reduction bias below 2^-250
    digest = hashlib.sha512(tag + payload).digest()
    return int.from_bytes(digest, "big") % Q


def hash_h1(c1: G2Element, c2: G2Element, m: bytes) -> G1Element:
    """Hash a pseudonym and message onto G1 (the signature base point).

    Input framing: TAG || len(enc(C1)) || enc(C1) || len(enc(C2)) ||
    enc(C2) || len(m) || m with 4-byte big-endian lengths, fed through
    the standard hash-to-curve construction for the chosen curve.
    """
    enc1, enc2 = c1.encode(), c2.encode()
    message = TAG_H1 + _len4(enc1) + enc1 + _len4(enc2) + enc2 + _len4(bytes(m)) + bytes(m)
    out = G1Element(_backend.G1.hash_to_curve(message, TAG_H1))
    if out.is_identity():  # cryptographically unreachable
        raise RuntimeError("hash-to-curve produced the identity")
    return out


def _h2_set_encoding(agy) -> list[bytes]:
    encs = [k.encode() for k in agy]
    if not encs:
        raise ValueError("empty key set")
    return encs


def hash_h2(y: G2Element, agy) -> int:
    """Per-key aggregation coefficient h = H2(Y || AgY).

    ``agy`` is the full ordered key list of the route; the order is
    significant and part of what the coefficient binds.
    """
    encs = _h2_set_encoding(agy)
    payload = y.encode() + len(encs).to_bytes(4, "big") + b"".join(encs)
    return _hash_to_scalar(TAG_H2, payload)


def hash_h2_all(agy) -> list[int]:
    """Coefficients for every key of the set, encoding the set once.

    Equals ``[hash_h2(y, agy) for y in agy]``; the single-pass form keeps
    aggregation linear in the route length.
    """
    encs = _h2_set_encoding(agy)
    suffix = len(encs).to_bytes(4, "big") + b"".join(encs)
    return [_hash_to_scalar(TAG_H2, enc + suffix) for enc in encs]


def hash_h3(x: int, m: bytes) -> int:
    """Pseudonym nonce k = H3(x || m), a scalar in [0, Q)."""
    payload = (x % Q).to_bytes(32, "big") + _len4(bytes(m)) + bytes(m)
    return _hash_to_scalar(TAG_H3, payload)


def random_scalar(rng) -> int:
    """Uniform scalar in [0, Q) from the given randomness source."""
    return rng.randrange(Q)


def random_nonzero_scalar(rng) -> int:
    """Uniform scalar in [1, Q); secret keys are drawn here."""
    return rng.randrange(1, Q)
