"""Cycle-stepped model of a burst I/O FFT core handshake.

One frame goes through load (``rfd``), compute (``busy``), the ``edone``/``done``
pulses, and a natural-order unload (``dv``). Outputs are registered: what
:meth:`BurstCore.peek` reports is what the pins show during the next
:meth:`BurstCore.step`, and inputs are sampled at the end of that step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .fft import DATA_WIDTH, Frame, ScalingSchedule, Spectrum, fft_fixed, stage_radices
from .numerics import FORWARD, CFix


class CoreState(enum.Enum):
    IDLE = "Idle"
    LOADING = "Loading"
    COMPUTING = "Computing"
    READY = "Ready"
    UNLOADING = "Unloading"
    DONE = "Done"


# Computing is split into the busy run followed by one edone and one done cycle.
_BUSY, _EDONE, _DONE = range(3)


@dataclass(frozen=True)
class PinsIn:
    start: bool = False
    unload: bool = False
    xn_re: int = 0
    xn_im: int = 0


@dataclass(frozen=True)
class CorePins:
    start: bool
    unload: bool
    xn_re: int
    xn_im: int
    rfd: bool
    busy: bool
    dv: bool
    edone: bool
    done: bool
    xn_index: int
    xk_index: int
    xk_re: int
    xk_im: int


@dataclass(frozen=True)
class TraceRow:
    cycle: int
    pins: CorePins


TRACE_COLUMNS = ("cycle", "start", "unload", "rfd", "busy", "dv", "edone", "done",
                 "xn_index", "xn_re", "xn_im", "xk_index", "xk_re", "xk_im")
FLAG_COLUMNS = ("start", "unload", "rfd", "busy", "dv", "edone", "done")


def row_values(row: TraceRow) -> tuple[int, ...]:
    """Flatten a trace row into ``TRACE_COLUMNS`` order (flags as 0/1)."""
    p = row.pins
    return (row.cycle,) + tuple(int(getattr(p, c)) for c in TRACE_COLUMNS[1:])


def compute_latency(n: int) -> int:
    """Busy cycles per frame: one pass of N/4 cycles per stage plus N."""
    return len(stage_radices(n)) * (n // 4) + n


class BurstCore:
    """Mutable single-frame FFT core; one instance per thread."""

    def __init__(self, n: int = 512, schedule: ScalingSchedule | None = None,
                 auto_unload: bool = False, direction: str = FORWARD):
        self.n = n
        self.schedule = schedule or ScalingSchedule.default(n)
        if self.schedule.n != n:
            raise ValueError(f"schedule built for N={self.schedule.n}, core has N={n}")
        self.auto_unload = auto_unload
        self.direction = direction
        self.latency = compute_latency(n)
        self.cycle = 0
        self.reset()

    def reset(self) -> None:
        """Synchronous clear: back to Idle, configuration kept."""
        self.state = CoreState.IDLE
        self._count = 0
        self._phase = _BUSY
        self._xn_index = 0
        self._xk_index = 0
        self._loaded: list[CFix] = []
        self._result: Spectrum | None = None

    @property
    def overflow(self) -> bool:
        return bool(self._result and self._result.overflow)

    @property
    def result(self) -> Spectrum | None:
        return self._result

    def peek(self) -> dict:
        """Output pin values for the upcoming cycle."""
        st = self.state
        out = dict(rfd=False, busy=False, dv=False, edone=False, done=False,
                   xn_index=self._xn_index, xk_index=self._xk_index, xk_re=0, xk_im=0)
        if st is CoreState.LOADING:
            out.update(rfd=True, xn_index=self._count)
        elif st is CoreState.COMPUTING:
            key = ("busy", "edone", "done")[self._phase]
            out[key] = True
        elif st is CoreState.UNLOADING:
            b = self._result.bins[self._count]
            out.update(dv=True, xk_index=self._count, xk_re=b.re.value, xk_im=b.im.value)
        return out

    def step(self, pins: PinsIn = PinsIn()) -> CorePins:
        """Advance one clock cycle and return the pins seen during it."""
        out = self.peek()
        st = self.state

        if st is CoreState.IDLE:
            if pins.start:
                self.state, self._count = CoreState.LOADING, 0
        elif st is CoreState.LOADING:
            self._loaded.append(CFix.of(pins.xn_re, pins.xn_im, DATA_WIDTH))
            self._xn_index = self._count
            self._count += 1
            if self._count == self.n:
                self._result = fft_fixed(Frame(tuple(self._loaded), self.n, self.direction),
                                         self.schedule)
                self.state, self._phase, self._count = CoreState.COMPUTING, _BUSY, 0
        elif st is CoreState.COMPUTING:
            if self._phase == _BUSY:
                self._count += 1
                if self._count == self.latency:
                    self._phase = _EDONE
            elif self._phase == _EDONE:
                self._phase = _DONE
            else:
                self._count = 0
                self.state = CoreState.UNLOADING if self.auto_unload else CoreState.READY
        elif st is CoreState.READY:
            if pins.unload:
                self.state, self._count = CoreState.UNLOADING, 0
        elif st is CoreState.UNLOADING:
            self._xk_index = self._count
            self._count += 1
            if self._count == self.n:
                self.state = CoreState.DONE
        elif st is CoreState.DONE:
            self._loaded = []
            self.state = CoreState.IDLE

        row = CorePins(start=pins.start, unload=pins.unload, xn_re=pins.xn_re,
                       xn_im=pins.xn_im, **out)
        self.cycle += 1
        return row

    def run_frame(self, samples: Sequence[CFix]) -> tuple[Spectrum, list[TraceRow]]:
        """Drive one frame through reset, start, load, unload; collect every cycle."""
        if len(samples) != self.n:
            raise ValueError(f"expected {self.n} samples, got {len(samples)}")
        self.reset()
        trace: list[TraceRow] = []
        bins: list[CFix] = []

        def clock(pins: PinsIn) -> CorePins:
            row = TraceRow(self.cycle, self.step(pins))
            trace.append(row)
            return row.pins

        clock(PinsIn(start=True))
        while True:
            st = self.state
            if st is CoreState.LOADING:
                s = samples[self.peek()["xn_index"]]
                clock(PinsIn(xn_re=s.re.value, xn_im=s.im.value))
            elif st is CoreState.READY:
                clock(PinsIn(unload=True))
            else:
                p = clock(PinsIn())
                if p.dv:
                    bins.append(CFix.of(p.xk_re, p.xk_im, DATA_WIDTH))
                if st is CoreState.DONE:
                    break

        return Spectrum(tuple(bins), self.overflow, self.schedule.total_shift), trace
