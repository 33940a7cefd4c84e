"""Wall-clock benchmark of every protocol phase across route scenarios.

Each repetition runs the whole lifecycle once with fresh randomness:
generate n station keys, pick a route of d, derive a pseudonym, sign
along the route, then run the ownership proof, verification, and a
trace. Phase timings are recorded per repetition; the report shows
means after discarding warm-up runs.

Absolute numbers are hardware-bound and not comparable across
machines; the interesting output is how phases scale with n and d.
"""

from __future__ import annotations

import platform
import random
import sys
import time
from dataclasses import dataclass, field

from . import aggregate, groups, keys, pseudonym, registry

PHASES = (
    "setup",
    "station-keygen",
    "user-keygen",
    "trace-keygen",
    "pseudonym",
    "key-aggregation",
    "sign",
    "ownership-verify",
    "verify",
    "trace",
)

DEFAULT_REPS = 10
DEFAULT_WARMUP = 2


@dataclass(frozen=True)
class BenchCase:
    n: int  # stations in the system
    d: int  # stations on the route
    reps: int = DEFAULT_REPS

    def __post_init__(self):
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got n={self.n} d={self.d}")
        if self.reps < 1:
            raise ValueError("reps must be at least 1")

    @property
    def label(self) -> str:
        return f"(n={self.n},d={self.d})"


@dataclass
class BenchReport:
    """Raw per-repetition samples plus enough context to re-render."""

    cases: tuple[BenchCase, ...]
    warmup: int
    environment: str
    samples: dict = field(default_factory=dict)  # case label -> phase -> [seconds]

    def mean_ms(self, case: BenchCase, phase: str) -> float:
        taken = self.samples[case.label][phase]
        return sum(taken) / len(taken) * 1000.0


def _environment_note() -> str:
    return f"{platform.platform()} / Python {sys.version.split()[0]}"


def _run_case(case: BenchCase, warmup: int, rng: random.Random) -> dict:
    recorded = {phase: [] for phase in PHASES}
    for rep in range(case.reps + warmup):
        timings = {}

        def timed(phase, fn):
            start = time.perf_counter()
            result = fn()
            timings[phase] = time.perf_counter() - start
            return result

        m = rng.randbytes(48)
        timed("setup", groups.setup)
        stations = timed(
            "station-keygen", lambda: [keys.keygen("station", rng) for _ in range(case.n)]
        )
        user = timed("user-keygen", lambda: keys.keygen("user", rng))
        tracer = timed("trace-keygen", lambda: keys.keygen("tracer", rng))
        tracer_pub = keys.public_key_of(tracer)

        nym = timed("pseudonym", lambda: pseudonym.derive_pseudonym(user, tracer_pub, m))

        route_keys = rng.sample(stations, case.d)
        route = [keys.public_key_of(kp) for kp in route_keys]
        agg = timed("key-aggregation", lambda: aggregate.aggregate_keys(route))

        def sign_route():
            parts = [
                aggregate.station_sign(kp, agg, i + 1, nym, m)
                for i, kp in enumerate(route_keys)
            ]
            return aggregate.aggregate_signatures(parts, case.d)
        sig = timed("sign", sign_route)

        def ownership_round():
            state = pseudonym.prove_commit(user, tracer_pub, nym, rng)
            c = pseudonym.challenge(rng)
            resp = pseudonym.prove_respond(state, c, user, m)
            transcript = pseudonym.OwnershipTranscript(
                pseudonym=nym,
                v1_point=state.v1_point,
                v2_point=state.v2_point,
                c=c,
                r1=resp.r1,
                r2=resp.r2,
            )
            if not pseudonym.verify_proof(tracer_pub, transcript):
                raise RuntimeError("honest ownership proof rejected")
        timed("ownership-verify", ownership_round)

        ok = timed("verify", lambda: aggregate.verify_aggregate(sig, nym, agg.ya, m))
        if not ok:
            raise RuntimeError("honest aggregate failed verification")

        record = registry.DeliveryRecord(
            record_id=0,
            status="delivered",
            pseudonym=nym,
            m=m,
            route=agg.route,
            ya=agg.ya,
            sigma=sig,
        )
        traced = timed("trace", lambda: pseudonym.trace(tracer, record))
        if traced.y != user.y:
            raise RuntimeError("trace returned the wrong key")

        if rep >= warmup:
            for phase in PHASES:
                recorded[phase].append(timings[phase])
    return recorded


def run_bench(
    cases,
    warmup: int = DEFAULT_WARMUP,
    rng: random.Random | None = None,
    progress=None,
) -> BenchReport:
    if rng is None:
        rng = random.Random()
    cases = tuple(cases)
    report = BenchReport(cases=cases, warmup=warmup, environment=_environment_note())
    for case in cases:
        if progress is not None:
            progress(case)
        report.samples[case.label] = _run_case(case, warmup, rng)
    return report


def render_report(report: BenchReport) -> str:
    """Plain-text table, deterministic for a given set of samples."""
    labels = [case.label for case in report.cases]
    width = max(len(p) for p in PHASES) + 2
    col = max(max((len(s) for s in labels), default=8), 12) + 2
    lines = [
        "pplist benchmark (mean ms per phase)",
        f"environment: {report.environment}",
        f"reps: {', '.join(str(c.reps) for c in report.cases)} after {report.warmup} warm-up",
        "",
        "phase".ljust(width) + "".join(label.rjust(col) for label in labels),
    ]
    for phase in PHASES:
        cells = "".join(
            f"{report.mean_ms(case, phase):.2f}".rjust(col) for case in report.cases
        )
        lines.append(phase.ljust(width) + cells)
    return "\n".join(lines) + "\n"


def parse_cases(text: str, reps: int = DEFAULT_REPS) -> list[BenchCase]:
    """Parse the CLI case list, e.g. "20:10,100:50,200:100"."""
    cases = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        n_text, sep, d_text = chunk.partition(":")
        if not sep:
            raise ValueError(f"case {chunk!r} is not n:d")
        try:
            case = BenchCase(n=int(n_text), d=int(d_text), reps=reps)
        except ValueError as exc:
            raise ValueError(f"case {chunk!r}: {exc}") from None
        cases.append(case)
    if not cases:
        raise ValueError("no benchmark cases given")
    return cases
