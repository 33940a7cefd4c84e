"""Append-only store of delivery records.

File layout: one record per line, nine tab-separated fields:

    id  status  c1  c2  m_hex  d  route_keys  ya  sigma

Route keys are space-separated hex inside their single field; sigma is
"-" until the record is delivered. Records are created when a route is
selected and completed exactly once when the aggregate signature
arrives; completed records never change again.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

from .aggregate import AggregateSignature, RouteAggregate, aggregate_keys, verify_aggregate
from .groups import G1Element, G2Element
from .keys import PublicKey
from .pseudonym import Pseudonym

_STATUSES = ("routed", "delivered")


class LedgerError(Exception):
    """Ledger file corruption or record state violation."""


@dataclass(frozen=True)
class DeliveryRecord:
    record_id: int
    status: str
    pseudonym: Pseudonym
    m: bytes
    route: tuple[PublicKey, ...]
    ya: G2Element
    sigma: AggregateSignature | None

    def route_aggregate(self) -> RouteAggregate:
        """Recompute coefficients and YA from the stored route."""
        return aggregate_keys(self.route)


def _render(rec: DeliveryRecord) -> str:
    return "\t".join(
        [
            str(rec.record_id),
            rec.status,
            rec.pseudonym.c1.encode_hex(),
            rec.pseudonym.c2.encode_hex(),
            rec.m.hex(),
            str(len(rec.route)),
            " ".join(pk.y.encode_hex() for pk in rec.route),
            rec.ya.encode_hex(),
            rec.sigma.sigma.encode_hex() if rec.sigma is not None else "-",
        ]
    )


def _parse(line: str, number: int) -> DeliveryRecord:
    fields = line.split("\t")
    if len(fields) != 9:
        raise LedgerError(f"line {number}: expected 9 tab-separated fields, got {len(fields)}")
    try:
        record_id = int(fields[0])
        status = fields[1]
        pseudonym = Pseudonym(
            c1=G2Element.decode_hex(fields[2]),
            c2=G2Element.decode_hex(fields[3]),
        )
        m = bytes.fromhex(fields[4])
        d = int(fields[5])
        key_hexes = fields[6].split(" ") if fields[6] else []
        route = tuple(PublicKey(role="station", y=G2Element.decode_hex(h)) for h in key_hexes)
        ya = G2Element.decode_hex(fields[7])
        sigma = None if fields[8] == "-" else AggregateSignature(G1Element.decode_hex(fields[8]))
    except (ValueError, TypeError) as exc:
        raise LedgerError(f"line {number}: {exc}") from exc
    if status not in _STATUSES:
        raise LedgerError(f"line {number}: unknown status {status!r}")
    if record_id < 0:
        raise LedgerError(f"line {number}: negative record id")
    if d != len(route):
        raise LedgerError(f"line {number}: d={d} but route has {len(route)} keys")
    return DeliveryRecord(
        record_id=record_id,
        status=status,
        pseudonym=pseudonym,
        m=m,
        route=route,
        ya=ya,
        sigma=sigma,
    )


class Ledger:
    """Single-writer record store over one append-only file.

    Opening parses and validates every line; appends go to the file
    before they touch memory, so a failed write leaves the loaded state
    unchanged.
    """

    def __init__(self, path, strict: bool = False):
        self.path = Path(path)
        self.strict = bool(strict)
        self._records: list[DeliveryRecord] = []
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        previous_id = -1
        for number, line in enumerate(self.path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            rec = _parse(line, number)
            if rec.record_id <= previous_id:
                raise LedgerError(
                    f"line {number}: record id {rec.record_id} not above {previous_id}"
                )
            previous_id = rec.record_id
            self._validate(rec)
            self._records.append(rec)

    def _validate(self, rec: DeliveryRecord) -> None:
        if (rec.status == "delivered") != (rec.sigma is not None):
            raise LedgerError(f"record {rec.record_id}: status and sigma disagree")
        if rec.route_aggregate().ya != rec.ya:
            raise LedgerError(f"record {rec.record_id}: stored ya does not match route")
        if self.strict and rec.sigma is not None:
            if not verify_aggregate(rec.sigma, rec.pseudonym, rec.ya, rec.m):
                raise LedgerError(f"record {rec.record_id}: invalid aggregate signature")

    @property
    def records(self) -> tuple[DeliveryRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def create_record(self, pseudonym: Pseudonym, m: bytes, route) -> int:
        """Append a routed record; returns its id (ids start at zero)."""
        agg = aggregate_keys(route)
        record_id = self._records[-1].record_id + 1 if self._records else 0
        rec = DeliveryRecord(
            record_id=record_id,
            status="routed",
            pseudonym=pseudonym,
            m=bytes(m),
            route=agg.route,
            ya=agg.ya,
            sigma=None,
        )
        with open(self.path, "a", encoding="ascii") as fh:
            fh.write(_render(rec) + "\n")
        self._records.append(rec)
        return record_id

    def complete_record(self, record_id: int, sigma: AggregateSignature) -> None:
        """Attach the aggregate signature; verification gates acceptance."""
        index, rec = self._locate(record_id)
        if rec.status == "delivered":
            raise LedgerError("already delivered")
        if not verify_aggregate(sigma, rec.pseudonym, rec.ya, rec.m):
            raise LedgerError("invalid aggregate signature")
        updated = replace(rec, status="delivered", sigma=sigma)
        self._rewrite(index, updated)
        self._records[index] = updated

    def _rewrite(self, index: int, updated: DeliveryRecord) -> None:
        # whole-file rewrite through a temp file in the same directory,
        # swapped in atomically
        lines = [_render(r) for r in self._records]
        lines[index] = _render(updated)
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text("\n".join(lines) + "\n", encoding="ascii")
        os.replace(tmp, self.path)

    def _locate(self, record_id: int) -> tuple[int, DeliveryRecord]:
        for index, rec in enumerate(self._records):
            if rec.record_id == record_id:
                return index, rec
        raise LedgerError("record not found")

    def find_record(self, record_id: int) -> DeliveryRecord:
        return self._locate(record_id)[1]

    def find_by_pseudonym(self, pseudonym: Pseudonym, m: bytes) -> list[DeliveryRecord]:
        """All records for (pseudonym, m) in id order; duplicates are
        legal, so this can return more than one."""
        matches = [
            rec
            for rec in self._records
            if rec.pseudonym == pseudonym and rec.m == bytes(m)
        ]
        if not matches:
            raise LedgerError("record not found")
        return matches


def open_ledger(path, strict: bool = False) -> Ledger:
    """Open (or start) the ledger at path, validating every record."""
    return Ledger(path, strict=strict)
