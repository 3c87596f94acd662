import random

import pytest

from pianofft.fft import DATA_WIDTH, Frame

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def runs(flags):
    """Lengths and start positions of consecutive True runs."""
    out, start = [], None
    for i, f in enumerate(list(flags) + [False]):
        if f and start is None:
            start = i
        elif not f and start is not None:
            out.append((start, i - start))
            start = None
    return out


def check_protocol(trace, n, frames=1):
    """Assert every handshake invariant on a trace; independent of the core's internals."""
    cycles = [r.cycle for r in trace]
    assert all(b - a == 1 for a, b in zip(cycles, cycles[1:]))
    pins = [r.pins for r in trace]
    for p in pins:
        assert not (p.rfd and p.busy)
        assert not (p.rfd and p.dv)
        assert not (p.busy and p.dv)

    rfd_runs = runs(p.rfd for p in pins)
    dv_runs = runs(p.dv for p in pins)
    assert [length for _, length in rfd_runs] == [n] * frames
    assert [length for _, length in dv_runs] == [n] * frames
    for start, length in rfd_runs:
        assert [p.xn_index for p in pins[start:start + length]] == list(range(n))
    for start, length in dv_runs:
        assert [p.xk_index for p in pins[start:start + length]] == list(range(n))

    edone = [i for i, p in enumerate(pins) if p.edone]
    done = [i for i, p in enumerate(pins) if p.done]
    assert len(edone) == frames
    assert done == [i + 1 for i in edone]

    # load, then compute, then edone/done, then unload: per frame, in that order
    for (ls, ll), e, (ds, _) in zip(rfd_runs, edone, dv_runs):
        busy_run = [i for i in range(ls + ll, e) if pins[i].busy]
        assert busy_run and busy_run[0] == ls + ll and busy_run[-1] == e - 1
        assert ds > e + 1


@pytest.fixture
def protocol():
    return check_protocol


def random_frame(rng: random.Random, n: int, bound: int, complex_input: bool = True) -> Frame:
    vals = []
    for _ in range(n):
        re = rng.randint(-bound, bound - 1)
        im = rng.randint(-bound, bound - 1) if complex_input else 0
        vals.append((re, im))
    return Frame.from_ints(vals)


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def half_scale():
    return 1 << (DATA_WIDTH - 2)
