"""Shared fixtures and the acceptance-criteria reporter."""

import random
import time
from contextlib import contextmanager

import pytest

from pplist import aggregate, keys, pseudonym

ACCEPTANCE_RESULTS = []


@contextmanager
def criterion(name):
    """Wrap one acceptance criterion; records and prints PASS or FAIL."""
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((name, "FAIL", time.perf_counter() - start))
        print(f"[acceptance] {name}: FAIL", flush=True)
        raise
    else:
        ACCEPTANCE_RESULTS.append((name, "PASS", time.perf_counter() - start))
        print(f"[acceptance] {name}: PASS", flush=True)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, elapsed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{status:4s}  {name}  ({elapsed:.1f}s)")


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def slow_power(element, exponent: int):
    """Exponentiation by repeated group multiplication.

    Deliberately avoids the backend's scalar multiplication so it can
    serve as an independent oracle for small exponents.
    """
    acc = type(element).identity()
    for _ in range(exponent):
        acc = acc * element
    return acc


def build_pipeline(rng, d, m=None):
    """One honest run: keys, pseudonym, route, partials, aggregate.

    Returns a dict with every intermediate, for tests that tamper with
    single fields.
    """
    if m is None:
        m = rng.randbytes(rng.randrange(1, 64))
    stations = [keys.keygen("station", rng) for _ in range(d)]
    user = keys.keygen("user", rng)
    tracer = keys.keygen("tracer", rng)
    tracer_pub = keys.public_key_of(tracer)
    nym = pseudonym.derive_pseudonym(user, tracer_pub, m)
    route = [keys.public_key_of(kp) for kp in stations]
    agg = aggregate.aggregate_keys(route)
    parts = [
        aggregate.station_sign(kp, agg, i + 1, nym, m)
        for i, kp in enumerate(stations)
    ]
    sig = aggregate.aggregate_signatures(parts, d)
    return {
        "m": m,
        "stations": stations,
        "user": user,
        "tracer": tracer,
        "tracer_pub": tracer_pub,
        "nym": nym,
        "route": route,
        "agg": agg,
        "parts": parts,
        "sig": sig,
    }
