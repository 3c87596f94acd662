"""Command line: ``pianofft gen | detect | oracle | trace``.

Exit codes: 0 success, 1 input error, 2 no signal.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import wave
from dataclasses import asdict, dataclass, field

import numpy as np

from . import frontend
from .burst_core import BurstCore, TraceRow
from .detect import NoSignal, OutOfPianoRange, find_peak, format_display, hz_to_note
from .fft import ScalingSchedule, dft_reference
from .frontend import AdcConfig, SamplerConfig, SignalTooShort, Tone, Waveform
from .traceio import write_csv, write_vcd

log = logging.getLogger("pianofft")

EXIT_OK, EXIT_INPUT, EXIT_NO_SIGNAL = 0, 1, 2
WAV_SCALE = 32768


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    fft_size: int = 512
    clock_hz: float = 5_000_000
    adc_interval: int = 73
    decimation: int = 16
    gain: float = 1.0
    vref: float = 1.65
    fullscale: float = 1.25
    schedule: tuple[int, ...] | None = None
    unload_mode: str = "explicit"
    output: str = "text"

    def __post_init__(self):
        if self.schedule is None:
            self.schedule = ScalingSchedule.default(self.fft_size).shifts
        if self.unload_mode not in ("explicit", "auto"):
            raise ValueError(f"unload mode must be explicit or auto, got {self.unload_mode!r}")
        if self.output not in ("text", "json"):
            raise ValueError(f"output must be text or json, got {self.output!r}")
        if self.gain == 0:
            raise ValueError("gain must be non-zero")
        # validates size and schedule length together
        self.scaling()
        self.sampler()
        self.adc()

    def scaling(self) -> ScalingSchedule:
        return ScalingSchedule(self.fft_size, tuple(self.schedule))

    def sampler(self) -> SamplerConfig:
        return SamplerConfig(self.clock_hz, self.adc_interval, self.decimation, self.fft_size)

    def adc(self) -> AdcConfig:
        return AdcConfig(vref=self.vref, fullscale=self.fullscale, gain=self.gain)

    def core(self) -> BurstCore:
        return BurstCore(self.fft_size, self.scaling(), auto_unload=self.unload_mode == "auto")


@dataclass
class DetectionReport:
    bin: int
    freq_hz: float
    note: str | None
    key: int | None
    cents: int | None
    mag_sq: int
    fs_hz: float
    delta_f_hz: float
    overflow: bool
    display: list[str] = field(default_factory=list)

    def text(self) -> str:
        lines = list(self.display)
        note = "out of piano range" if self.key is None else f"key {self.key}"
        lines.append(f"bin {self.bin}  |X|^2 {self.mag_sq}  {note}  fs {self.fs_hz:.4f} Hz  "
                     f"df {self.delta_f_hz:.4f} Hz  overflow {'yes' if self.overflow else 'no'}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# WAV I/O
# ---------------------------------------------------------------------------

def read_wav(path, vref: float = 1.65, fullscale: float = 1.25) -> Waveform:
    """16-bit PCM mono WAV to voltages: ``vref + code/32768 * fullscale``."""
    try:
        with wave.open(str(path), "rb") as w:
            if w.getcomptype() != "NONE":
                raise InputError(f"{path}: format {w.getcomptype()!r} is not PCM")
            if w.getnchannels() != 1:
                raise InputError(f"{path}: channels = {w.getnchannels()}, expected mono (1)")
            if w.getsampwidth() != 2:
                raise InputError(
                    f"{path}: sample width = {8 * w.getsampwidth()} bits, expected 16")
            rate = w.getframerate()
            raw = w.readframes(w.getnframes())
    except wave.Error as e:
        raise InputError(f"{path}: unsupported WAV format ({e})") from e
    except EOFError as e:
        raise InputError(f"{path}: truncated WAV") from e
    codes = np.frombuffer(raw, dtype="<i2").astype(float)
    return Waveform(vref + codes / WAV_SCALE * fullscale, float(rate))


def write_wav(path, sig: Waveform, dc: float, fullscale: float) -> int:
    """Write ``(v - dc)/fullscale`` as 16-bit PCM; returns the number of clipped samples."""
    codes = np.round((sig.volts - dc) / fullscale * WAV_SCALE)
    clipped = int(np.count_nonzero((codes > 32767) | (codes < -32768)))
    codes = np.clip(codes, -32768, 32767).astype("<i2")
    with open(path, "wb") as fh, wave.open(fh, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(int(round(sig.rate)))
        w.writeframes(codes.tobytes())
    return clipped


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def detect(sig, cfg: RunConfig) -> tuple[DetectionReport, list[TraceRow]]:
    """ADC capture, burst-core FFT, peak search and note naming."""
    smp = cfg.sampler()
    codes = frontend.acquire(sig, cfg.adc(), smp)
    spectrum, trace = cfg.core().run_frame(frontend.as_frame_data(codes))
    fs = frontend.effective_sample_rate(smp)
    peak = find_peak(spectrum, fs)
    try:
        note = hz_to_note(peak.freq_hz)
    except OutOfPianoRange:
        note = None
    report = DetectionReport(
        bin=peak.bin,
        freq_hz=peak.freq_hz,
        note=note.name if note else None,
        key=note.key if note else None,
        cents=note.cents if note else None,
        mag_sq=peak.mag_sq,
        fs_hz=fs,
        delta_f_hz=frontend.bin_resolution(smp, cfg.fft_size),
        overflow=spectrum.overflow,
        display=list(format_display(peak, note)),
    )
    return report, trace


def oracle_spectrum(sig, cfg: RunConfig) -> np.ndarray:
    """Float DFT of the unquantized ADC samples (in code units), bins 0 .. N/2-1."""
    volts = frontend.acquire_volts(sig, cfg.adc(), cfg.sampler())
    x = frontend.to_codes_float(volts, cfg.adc())
    return dft_reference(x, cfg.fft_size)[: cfg.fft_size // 2]


def oracle_peak(X: np.ndarray) -> int | None:
    """Same search range and tie rule as the fixed-point detector."""
    mags = np.abs(X[1:])
    if mags.size == 0 or not mags.max() > 0:
        return None
    return int(np.argmax(mags)) + 1


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _schedule_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}, expected e.g. 2,2,2,2,1")


def _add_run_options(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", help="16-bit PCM mono WAV file")
    src.add_argument("--tone", type=float, metavar="HZ", help="analytic sine input")
    p.add_argument("--amp", type=float, default=0.5, help="tone amplitude in volts")
    p.add_argument("--dc", type=float, default=1.65, help="tone DC offset in volts")
    p.add_argument("--phase", type=float, default=0.0, help="tone phase in radians")
    p.add_argument("--fft-size", type=int, default=512)
    p.add_argument("--clock-hz", type=float, default=5_000_000)
    p.add_argument("--adc-interval", type=int, default=73)
    p.add_argument("--decimation", type=int, default=16)
    p.add_argument("--gain", type=float, default=1.0)
    p.add_argument("--vref", type=float, default=1.65)
    p.add_argument("--fullscale", type=float, default=1.25)
    p.add_argument("--schedule", type=_schedule_arg, default=None,
                   help="per-stage shifts, comma separated (default 2,2,2,2,1 for N=512)")
    p.add_argument("--unload-mode", choices=("explicit", "auto"), default="explicit")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _run_config(args) -> RunConfig:
    return RunConfig(
        fft_size=args.fft_size, clock_hz=args.clock_hz, adc_interval=args.adc_interval,
        decimation=args.decimation, gain=args.gain, vref=args.vref, fullscale=args.fullscale,
        schedule=args.schedule, unload_mode=args.unload_mode,
        output="json" if args.json else "text")


def _signal(args, cfg: RunConfig):
    if args.tone is not None:
        return Tone(args.tone, args.amp, args.dc, args.phase)
    return read_wav(args.input, cfg.vref, cfg.fullscale)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pianofft",
                                     description="Fixed-point FFT piano note detector model")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a sine tone as a 16-bit PCM WAV")
    g.add_argument("--freq", type=float, required=True)
    g.add_argument("--amp", type=float, default=0.5)
    g.add_argument("--dc", type=float, default=1.65)
    g.add_argument("--phase", type=float, default=0.0)
    g.add_argument("--duration", type=float, default=0.5)
    g.add_argument("--rate", type=float, default=48000)
    g.add_argument("--fullscale", type=float, default=1.25)
    g.add_argument("-o", "--out", required=True)

    d = sub.add_parser("detect", help="detect the dominant note")
    _add_run_options(d)

    o = sub.add_parser("oracle", help="dump the float DFT of the captured samples")
    _add_run_options(o)

    t = sub.add_parser("trace", help="export the core handshake trace")
    _add_run_options(t)
    t.add_argument("--format", choices=("csv", "vcd"), default="csv")
    t.add_argument("-o", "--out", required=True)
    return parser


def cmd_gen(args) -> int:
    sig = frontend.synth_sine(args.freq, args.amp, args.dc, args.phase, args.duration, args.rate)
    if args.amp > args.fullscale:
        log.warning("amplitude %.3f V exceeds fullscale %.3f V, samples will clip",
                    args.amp, args.fullscale)
    try:
        write_wav(args.out, sig, args.dc, args.fullscale)
    except OSError as e:
        raise InputError(f"cannot write {args.out}: {e}") from e
    print(f"wrote {args.out}: {len(sig.volts)} frames, {args.freq} Hz, amp {args.amp} V, "
          f"dc {args.dc} V, phase {args.phase} rad, {args.rate:g} Hz")
    return EXIT_OK


def cmd_detect(args) -> int:
    cfg = _run_config(args)
    report, _ = detect(_signal(args, cfg), cfg)
    if cfg.output == "json":
        print(json.dumps(asdict(report)))
    else:
        print(report.text())
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _run_config(args)
    X = oracle_spectrum(_signal(args, cfg), cfg)
    peak = oracle_peak(X)
    if cfg.output == "json":
        print(json.dumps({
            "argmax": peak,
            "bins": [{"bin": k, "mag": float(abs(v)), "phase": float(np.angle(v))}
                     for k, v in enumerate(X)],
        }))
        return EXIT_OK
    print(f"{'bin':>4} {'|X(k)|':>14} {'phase':>9}")
    for k, v in enumerate(X):
        mark = "  <- peak" if k == peak else ""
        print(f"{k:>4} {abs(v):>14.4f} {np.angle(v):>9.4f}{mark}")
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = _run_config(args)
    sig = _signal(args, cfg)
    codes = frontend.acquire(sig, cfg.adc(), cfg.sampler())
    _, rows = cfg.core().run_frame(frontend.as_frame_data(codes))
    try:
        with open(args.out, "w", newline="") as fh:
            if args.format == "csv":
                write_csv(rows, fh)
            else:
                write_vcd(rows, fh, cfg.fft_size)
    except OSError as e:
        raise InputError(f"cannot write {args.out}: {e}") from e
    print(f"wrote {len(rows)} cycles to {args.out}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "detect": cmd_detect, "oracle": cmd_oracle, "trace": cmd_trace}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NoSignal as e:
        print(str(e), file=sys.stderr)
        return EXIT_NO_SIGNAL
    except (InputError, SignalTooShort, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
