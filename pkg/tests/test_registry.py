"""Ledger persistence, immutability, lookups."""

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import build_pipeline
from pplist import keys
from pplist.aggregate import AggregateSignature, aggregate_keys
from pplist.groups import G1Element
from pplist.keys import public_key_of
from pplist.registry import DeliveryRecord, LedgerError, open_ledger


def make_route(rng, d=2):
    return [public_key_of(keys.keygen("station", rng)) for _ in range(d)]


class TestOpen:
    def test_missing_file_is_empty(self, tmp_path):
        led = open_ledger(tmp_path / "ledger.tsv")
        assert len(led) == 0

    def test_empty_file_is_empty(self, tmp_path):
        path = tmp_path / "ledger.tsv"
        path.write_text("")
        assert len(open_ledger(path)) == 0

    def test_three_records_round_trip(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        for i in range(3):
            built = build_pipeline(rng, 2)
            led.create_record(built["nym"], built["m"], built["route"])
        before = path.read_bytes()
        again = open_ledger(path)
        assert again.records == led.records
        assert path.read_bytes() == before

    def test_corrupt_hex_cites_line(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        for _ in range(3):
            built = build_pipeline(rng, 1)
            led.create_record(built["nym"], built["m"], built["route"])
        lines = path.read_text().splitlines()
        fields = lines[1].split("\t")
        fields[2] = "zz" + fields[2][2:]
        lines[1] = "\t".join(fields)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(LedgerError, match="line 2"):
            open_ledger(path)

    def test_field_count_checked(self, tmp_path):
        path = tmp_path / "ledger.tsv"
        path.write_text("0\trouted\tabc\n")
        with pytest.raises(LedgerError, match="expected 9"):
            open_ledger(path)

    def test_ids_must_increase(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 1)
        led.create_record(built["nym"], built["m"], built["route"])
        line = path.read_text()
        path.write_text(line + line)  # same id twice
        with pytest.raises(LedgerError, match="not above"):
            open_ledger(path)

    def test_ya_recomputation_checked(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 2)
        led.create_record(built["nym"], built["m"], built["route"])
        fields = path.read_text().strip().split("\t")
        other = keys.keygen("station", rng).y.encode_hex()
        fields[7] = other
        path.write_text("\t".join(fields) + "\n")
        with pytest.raises(LedgerError, match="record 0.*ya"):
            open_ledger(path)

    def test_status_sigma_coherence_checked(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 1)
        led.create_record(built["nym"], built["m"], built["route"])
        text = path.read_text().replace("routed", "delivered")
        path.write_text(text)
        with pytest.raises(LedgerError, match="status and sigma disagree"):
            open_ledger(path)


class TestCreate:
    def test_ids_start_at_zero(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        assert led.create_record(built["nym"], built["m"], built["route"]) == 0
        assert led.create_record(built["nym"], built["m"], built["route"]) == 1

    def test_no_dedup(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        a = led.create_record(built["nym"], built["m"], built["route"])
        b = led.create_record(built["nym"], built["m"], built["route"])
        assert a != b
        assert len(led.find_by_pseudonym(built["nym"], built["m"])) == 2

    def test_created_record_validates_on_reload(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 3)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        rec = open_ledger(path).find_record(rid)
        assert rec.route_aggregate().ya == rec.ya == built["agg"].ya

    def test_empty_route_rejected(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        with pytest.raises(ValueError, match="empty key set"):
            led.create_record(built["nym"], built["m"], [])

    @given(m=st.binary(max_size=64))
    @settings(max_examples=25, deadline=None)
    def test_any_message_bytes_round_trip(self, tmp_path_factory, m):
        # tabs and newlines in m must survive, hence the hex field
        import random as _random

        rng = _random.Random(1)
        path = tmp_path_factory.mktemp("led") / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 1, m=m)
        rid = led.create_record(built["nym"], m, built["route"])
        assert open_ledger(path).find_record(rid).m == m


class TestComplete:
    def test_honest_completion(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 2)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        led.complete_record(rid, built["sig"])
        rec = open_ledger(path, strict=True).find_record(rid)
        assert rec.status == "delivered"
        assert rec.sigma == built["sig"]

    def test_cross_record_sigma_rejected(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        a, b = build_pipeline(rng, 2), build_pipeline(rng, 2)
        rid = led.create_record(a["nym"], a["m"], a["route"])
        with pytest.raises(LedgerError, match="invalid aggregate signature"):
            led.complete_record(rid, b["sig"])

    def test_double_completion_rejected(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        led.complete_record(rid, built["sig"])
        with pytest.raises(LedgerError, match="already delivered"):
            led.complete_record(rid, built["sig"])

    def test_unknown_id(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        with pytest.raises(LedgerError, match="record not found"):
            led.complete_record(7, built["sig"])

    def test_strict_reload_catches_bad_sigma(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 1)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        led.complete_record(rid, built["sig"])
        # swap sigma for a decodable but wrong point
        fields = path.read_text().strip().split("\t")
        fields[8] = (built["sig"].sigma * G1Element.generator()).encode_hex()
        path.write_text("\t".join(fields) + "\n")
        open_ledger(path)  # lenient load accepts
        with pytest.raises(LedgerError, match="invalid aggregate signature"):
            open_ledger(path, strict=True)


class TestFind:
    def test_by_id(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        assert led.find_record(rid).record_id == rid

    def test_by_pseudonym_singleton(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        led.create_record(built["nym"], built["m"], built["route"])
        matches = led.find_by_pseudonym(built["nym"], built["m"])
        assert [r.record_id for r in matches] == [0]

    def test_unknown_id(self, tmp_path):
        led = open_ledger(tmp_path / "ledger.tsv")
        with pytest.raises(LedgerError, match="record not found"):
            led.find_record(3)

    def test_no_pseudonym_match(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        led.create_record(built["nym"], built["m"], built["route"])
        with pytest.raises(LedgerError, match="record not found"):
            led.find_by_pseudonym(built["nym"], built["m"] + b"x")


class TestRecordShape:
    def test_records_are_frozen(self, tmp_path, rng):
        led = open_ledger(tmp_path / "ledger.tsv")
        built = build_pipeline(rng, 1)
        rid = led.create_record(built["nym"], built["m"], built["route"])
        rec = led.find_record(rid)
        with pytest.raises(dataclasses.FrozenInstanceError):
            rec.status = "delivered"  # type: ignore[misc]

    def test_blank_lines_tolerated(self, tmp_path, rng):
        path = tmp_path / "ledger.tsv"
        led = open_ledger(path)
        built = build_pipeline(rng, 1)
        led.create_record(built["nym"], built["m"], built["route"])
        path.write_text(path.read_text() + "\n\n")
        assert len(open_ledger(path)) == 1
