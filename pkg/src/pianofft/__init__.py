"""Bit-accurate software model of an FPGA piano-note detector."""

from .burst_core import BurstCore, CoreState, CorePins, TraceRow
from .detect import (NoSignal, NoteId, OutOfPianoRange, PeakResult, bin_to_hz, find_peak,
                     format_display, hz_to_note, magnitude_sq, note_frequency)
from .fft import (Frame, ScalingSchedule, Spectrum, dft_reference, digit_reverse_map,
                  fft_fixed, idft_reference, radix2_butterfly, radix4_butterfly)
from .frontend import (AdcConfig, SamplerConfig, Tone, Waveform, acquire, bin_resolution,
                       effective_sample_rate, preamp, quantize, synth_sine)
from .numerics import CFix, Fix, Twiddle, cmul_twiddle, round_shift, saturate, twiddle

__version__ = "0.1.0"
