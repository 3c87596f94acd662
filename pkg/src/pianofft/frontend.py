"""Analog front end and ADC sampling model.

The board samples once every ``adc_interval`` clocks and keeps every
``decimation``-th conversion, so a 5 MHz clock with 73 and 16 gives
5e6 / 1168 ~= 4280.82 Hz. Codes are bipolar around the DC reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fft import DATA_WIDTH
from .numerics import CFix, Fix, fix_max, fix_min

CODE_SCALE = 1 << (DATA_WIDTH - 1)  # fullscale volts -> 8192


class SignalTooShort(ValueError):
    pass


@dataclass(frozen=True)
class AdcConfig:
    vref: float = 1.65
    fullscale: float = 1.25
    gain: float = 1.0
    rails: tuple[float, float] = (0.0, 3.3)

    def __post_init__(self):
        if self.fullscale <= 0:
            raise ValueError("fullscale must be positive")
        lo, hi = self.rails
        if not lo < self.vref < hi:
            raise ValueError("vref must lie strictly between the rails")


@dataclass(frozen=True)
class SamplerConfig:
    clock_hz: float = 5_000_000
    adc_interval: int = 73
    decimation: int = 16
    depth: int = 512

    def __post_init__(self):
        for name in ("clock_hz", "adc_interval", "decimation", "depth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def cycles_per_sample(self) -> int:
        return self.adc_interval * self.decimation

    @property
    def capture_seconds(self) -> float:
        """Time span from the first to the last stored sample."""
        return (self.depth - 1) * self.cycles_per_sample / self.clock_hz


@dataclass(frozen=True)
class Tone:
    freq: float
    amp: float
    dc: float = 1.65
    phase: float = 0.0

    def voltage(self, t: np.ndarray) -> np.ndarray:
        return self.dc + self.amp * np.sin(2 * np.pi * self.freq * t + self.phase)


@dataclass(frozen=True)
class Waveform:
    volts: np.ndarray
    rate: float

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("sample rate must be positive")

    @property
    def duration(self) -> float:
        return (len(self.volts) - 1) / self.rate

    def voltage(self, t: np.ndarray) -> np.ndarray:
        src_t = np.arange(len(self.volts)) / self.rate
        return np.interp(t, src_t, self.volts)


AnalogSignal = Tone | Waveform


def sample_rate_exact(cfg: SamplerConfig) -> Fraction:
    return Fraction(cfg.clock_hz) / (cfg.adc_interval * cfg.decimation)


def effective_sample_rate(cfg: SamplerConfig) -> float:
    return float(sample_rate_exact(cfg))


def bin_resolution(cfg: SamplerConfig, n: int) -> float:
    if n <= 0:
        raise ValueError("FFT size must be positive")
    return float(sample_rate_exact(cfg) / n)


def preamp(v, cfg: AdcConfig):
    """Gain about the reference, clipped to the rails. Works on scalars and arrays."""
    lo, hi = cfg.rails
    return np.clip(cfg.vref + cfg.gain * (np.asarray(v, dtype=float) - cfg.vref), lo, hi)


def to_codes_float(v, cfg: AdcConfig):
    """Unrounded ADC code for voltage ``v``."""
    return (np.asarray(v, dtype=float) - cfg.vref) / cfg.fullscale * CODE_SCALE


def quantize(v: float, cfg: AdcConfig) -> Fix:
    code = round(float(to_codes_float(v, cfg)))
    code = min(max(code, fix_min(DATA_WIDTH)), fix_max(DATA_WIDTH))
    return Fix(code, DATA_WIDTH)


def sample_times(smp: SamplerConfig) -> np.ndarray:
    # decimation phase 0: the first conversion of each group is the one kept
    return np.arange(smp.depth) * smp.cycles_per_sample / smp.clock_hz


def acquire_volts(sig: AnalogSignal, adc: AdcConfig, smp: SamplerConfig) -> np.ndarray:
    """Post-preamp voltages at the stored sampling instants."""
    t = sample_times(smp)
    if isinstance(sig, Waveform):
        if sig.rate <= 2 * effective_sample_rate(smp):
            raise ValueError(
                f"source rate {sig.rate} Hz must exceed twice the effective rate")
        if sig.duration < t[-1]:
            raise SignalTooShort(
                f"signal lasts {sig.duration:.4f} s, capture needs {t[-1]:.4f} s")
    return preamp(sig.voltage(t), adc)


def acquire(sig: AnalogSignal, adc: AdcConfig = AdcConfig(),
            smp: SamplerConfig = SamplerConfig()) -> list[Fix]:
    """Fill the sample memory: ``depth`` quantized codes."""
    return [quantize(v, adc) for v in acquire_volts(sig, adc, smp)]


def as_frame_data(codes: list[Fix]) -> tuple[CFix, ...]:
    """Real ADC codes on xn_re, zero on xn_im."""
    zero = Fix(0, DATA_WIDTH)
    return tuple(CFix(c, zero) for c in codes)


def synth_sine(freq: float, amp: float, dc: float, phase: float,
               duration: float, rate: float) -> Waveform:
    if duration <= 0:
        raise ValueError("duration must be positive")
    if rate <= 2 * freq:
        raise ValueError(f"rate {rate} Hz does not exceed twice {freq} Hz")
    count = int(math.floor(duration * rate + 1e-9))
    t = np.arange(count) / rate
    return Waveform(Tone(freq, amp, dc, phase).voltage(t), rate)
