"""Command line front end for the delivery signing lifecycle.

Exit codes: 0 on success, 1 when a cryptographic check fails (invalid
signature, rejected proof, untraceable record) or a domain error
occurs, 2 for bad arguments.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import aggregate, bench, groups, keys, pseudonym, registry
from .pseudonym import TraceError
from .registry import LedgerError


def cmd_setup(args) -> int:
    params = groups.setup()
    print(f"q: {params.q:x}")
    print(f"g1: {params.g1.encode_hex()}")
    print(f"g2: {params.g2.encode_hex()}")
    return 0


def cmd_keygen(args) -> int:
    kp = keys.keygen(args.role)
    keys.write_keypair(args.out, kp)
    pub_path = args.out + ".pub"
    keys.write_public(pub_path, keys.public_key_of(kp))
    print(f"wrote {args.out} and {pub_path}")
    return 0


def _read_message(path) -> bytes:
    return Path(path).read_bytes()


def cmd_pseudonym(args) -> int:
    user = keys.read_keypair(args.user)
    tracer_pub = keys.read_public(args.tracer_pub)
    nym = pseudonym.derive_pseudonym(user, tracer_pub, _read_message(args.message_file))
    pseudonym.write_pseudonym(args.out, nym)
    print(f"wrote {args.out}")
    return 0


def cmd_route(args) -> int:
    ledger = registry.open_ledger(args.ledger)
    nym = pseudonym.read_pseudonym(args.pseudonym)
    route = [keys.read_public(path) for path in args.stations]
    record_id = ledger.create_record(nym, _read_message(args.message_file), route)
    print(f"record {record_id} routed ({len(route)} stations)")
    return 0


def cmd_sign(args) -> int:
    ledger = registry.open_ledger(args.ledger)
    rec = ledger.find_record(args.record)
    station = keys.read_keypair(args.station)
    agg = rec.route_aggregate()
    part = aggregate.station_sign(station, agg, args.position, rec.pseudonym, rec.m)
    line = aggregate.format_partial(part)
    if args.accumulate is None:
        print(line)
        return 0
    acc = Path(args.accumulate)
    with open(acc, "a", encoding="ascii") as fh:
        fh.write(line + "\n")
    parts = [aggregate.parse_partial(l) for l in acc.read_text().splitlines() if l.strip()]
    have = {p.position for p in parts}
    if have == set(range(1, agg.d + 1)):
        sig = aggregate.aggregate_signatures(parts, agg.d)
        ledger.complete_record(rec.record_id, sig)
        print(f"record {rec.record_id} delivered")
    else:
        print(f"partial {args.position} recorded ({len(have)}/{agg.d})")
    return 0


def cmd_aggregate(args) -> int:
    ledger = registry.open_ledger(args.ledger)
    rec = ledger.find_record(args.record)
    parts = []
    for path in args.parts:
        for line in Path(path).read_text().splitlines():
            if line.strip():
                parts.append(aggregate.parse_partial(line))
    sig = aggregate.aggregate_signatures(parts, len(rec.route))
    ledger.complete_record(rec.record_id, sig)
    print(f"record {rec.record_id} delivered")
    return 0


def cmd_verify(args) -> int:
    ledger = registry.open_ledger(args.ledger)
    rec = ledger.find_record(args.record)
    if rec.sigma is None:
        print(f"record {rec.record_id} not delivered", file=sys.stderr)
        return 1
    if aggregate.verify_aggregate(rec.sigma, rec.pseudonym, rec.ya, rec.m):
        print("valid")
        return 0
    print("invalid aggregate signature", file=sys.stderr)
    return 1


def cmd_prove(args) -> int:
    user = keys.read_keypair(args.user)
    tracer_pub = keys.read_public(args.tracer_pub)
    nym = pseudonym.read_pseudonym(args.pseudonym)
    m = _read_message(args.message_file)

    if args.fiat_shamir:
        transcript = pseudonym.prove_noninteractive(user, tracer_pub, nym, m)
        sys.stdout.write(pseudonym.render_transcript(transcript))
        return 0

    # interactive three-move run over stdin/stdout:
    # send "V1 V2", read "c", send "r1 r2"
    state = pseudonym.prove_commit(user, tracer_pub, nym)
    print(f"{state.v1_point.encode_hex()} {state.v2_point.encode_hex()}", flush=True)
    line = sys.stdin.readline()
    if not line.strip():
        print("error: no challenge received", file=sys.stderr)
        return 1
    c = int(line.strip(), 16)
    resp = pseudonym.prove_respond(state, c, user, m)
    print(f"{resp.r1:064x} {resp.r2:064x}", flush=True)
    return 0


def cmd_prove_verify(args) -> int:
    tracer_pub = keys.read_public(args.tracer_pub)

    if args.fiat_shamir:
        if args.transcript is not None:
            transcript = pseudonym.read_transcript(args.transcript)
        else:
            fields = {}
            for number, line in enumerate(sys.stdin.read().splitlines(), start=1):
                line = line.strip()
                if not line:
                    continue
                name, sep, value = line.partition(":")
                if not sep:
                    print(f"error: stdin line {number} is not 'name: value'", file=sys.stderr)
                    return 1
                fields[name.strip()] = value.strip()
            transcript = pseudonym.parse_transcript_fields(fields, "stdin")
        if pseudonym.verify_noninteractive(tracer_pub, transcript):
            print("accepted")
            return 0
        print("rejected", file=sys.stderr)
        return 1

    if args.pseudonym is None:
        print("error: interactive mode needs --pseudonym", file=sys.stderr)
        return 2
    nym = pseudonym.read_pseudonym(args.pseudonym)
    commit_line = sys.stdin.readline().split()
    if len(commit_line) != 2:
        print("error: expected commitment line 'V1 V2'", file=sys.stderr)
        return 1
    v1_point = groups.G2Element.decode_hex(commit_line[0])
    v2_point = groups.G2Element.decode_hex(commit_line[1])
    c = pseudonym.challenge()
    print(f"{c:064x}", flush=True)
    response_line = sys.stdin.readline().split()
    if len(response_line) != 2:
        print("error: expected response line 'r1 r2'", file=sys.stderr)
        return 1
    transcript = pseudonym.OwnershipTranscript(
        pseudonym=nym,
        v1_point=v1_point,
        v2_point=v2_point,
        c=c,
        r1=int(response_line[0], 16) % groups.Q,
        r2=int(response_line[1], 16) % groups.Q,
    )
    if pseudonym.verify_proof(tracer_pub, transcript):
        print("accepted", flush=True)
        return 0
    print("rejected", file=sys.stderr)
    return 1


def cmd_trace(args) -> int:
    tracer = keys.read_keypair(args.tracer)
    ledger = registry.open_ledger(args.ledger)
    rec = ledger.find_record(args.record)
    traced = pseudonym.trace(tracer, rec)
    print(traced.y.encode_hex())
    return 0


def cmd_bench(args) -> int:
    cases = bench.parse_cases(args.cases, reps=args.reps)
    def progress(case):
        print(f"running {case.label} x{case.reps}...", file=sys.stderr, flush=True)
    report = bench.run_bench(cases, rng=random.Random(), progress=progress)
    text = bench.render_report(report)
    Path(args.out).write_text(text)
    sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pplist",
        description="pseudonymous delivery signing with aggregated station signatures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="print the fixed group parameters")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="generate a keypair and its public half")
    p.add_argument("--role", required=True, choices=keys.ROLES)
    p.add_argument("--out", required=True, help="secret key file; '<out>.pub' is written too")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("pseudonym", help="derive the pseudonym for an order")
    p.add_argument("--user", required=True, help="user secret key file")
    p.add_argument("--tracer-pub", required=True, help="tracer public key file")
    p.add_argument("--message-file", required=True, help="order message bytes")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pseudonym)

    p = sub.add_parser("route", help="create a ledger record for a station route")
    p.add_argument("--ledger", required=True)
    p.add_argument("--pseudonym", required=True)
    p.add_argument("--message-file", required=True)
    p.add_argument("--stations", required=True, nargs="+", help="station public key files, in route order")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("sign", help="produce one station's partial signature")
    p.add_argument("--ledger", required=True)
    p.add_argument("--record", required=True, type=int)
    p.add_argument("--station", required=True, help="station secret key file")
    p.add_argument("--position", required=True, type=int, help="1-based slot on the route")
    p.add_argument("--accumulate", help="hand-off file; completes the record once all slots signed")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("aggregate", help="combine collected partials and complete the record")
    p.add_argument("--ledger", required=True)
    p.add_argument("--record", required=True, type=int)
    p.add_argument("--parts", required=True, nargs="+", help="files of 'position sig_hex' lines")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("verify", help="check a record's aggregate signature")
    p.add_argument("--ledger", required=True)
    p.add_argument("--record", required=True, type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("prove", help="prove pseudonym ownership (interactive or one-shot)")
    p.add_argument("--user", required=True)
    p.add_argument("--tracer-pub", required=True)
    p.add_argument("--pseudonym", required=True)
    p.add_argument("--message-file", required=True)
    p.add_argument("--fiat-shamir", action="store_true", help="print a one-shot transcript instead of talking")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("prove-verify", help="verify an ownership proof")
    p.add_argument("--tracer-pub", required=True)
    p.add_argument("--pseudonym", help="pseudonym file (interactive mode)")
    p.add_argument("--fiat-shamir", action="store_true")
    p.add_argument("--transcript", help="one-shot transcript file; stdin if omitted")
    p.set_defaults(func=cmd_prove_verify)

    p = sub.add_parser("trace", help="de-anonymize a delivered record")
    p.add_argument("--tracer", required=True, help="tracer secret key file")
    p.add_argument("--ledger", required=True)
    p.add_argument("--record", required=True, type=int)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("bench", help="time every protocol phase across scenarios")
    p.add_argument("--cases", default="20:10,100:50,200:100", help="comma-separated n:d pairs")
    p.add_argument("--reps", default=bench.DEFAULT_REPS, type=int)
    p.add_argument("--out", required=True, help="report file")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, LedgerError, TraceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
