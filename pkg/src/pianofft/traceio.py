"""CSV and VCD serialization of burst-core traces, plus readers used for round trips."""

from __future__ import annotations

import csv
from typing import Iterable, TextIO

import vcd
from vcd.reader import TokenKind, tokenize

from .burst_core import FLAG_COLUMNS, TRACE_COLUMNS, TraceRow, row_values

CYCLE_NS = 200  # 5 MHz
SCOPE = "fft_core"
DATA_BITS = 14


def write_csv(rows: Iterable[TraceRow], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for row in rows:
        w.writerow(row_values(row))


def read_csv(fh: TextIO) -> list[tuple[int, ...]]:
    r = csv.reader(fh)
    header = next(r)
    if tuple(header) != TRACE_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return [tuple(int(v) for v in line) for line in r]


def _index_bits(n: int) -> int:
    # signed vector wide enough for N-1
    return max(n - 1, 1).bit_length() + 1


def write_vcd(rows: list[TraceRow], fh: TextIO, n: int = 512) -> None:
    """One 1-bit wire per flag, signed vectors for indices and data buses."""
    sizes = {c: 1 for c in FLAG_COLUMNS}
    sizes.update(xn_index=_index_bits(n), xk_index=_index_bits(n),
                 xn_re=DATA_BITS, xn_im=DATA_BITS, xk_re=DATA_BITS, xk_im=DATA_BITS)
    with vcd.VCDWriter(fh, timescale="1 ns", date="", version="pianofft") as w:
        wires = {}
        for name in TRACE_COLUMNS[1:]:
            kind = "wire" if sizes[name] == 1 else "integer"
            wires[name] = w.register_var(SCOPE, name, kind, size=sizes[name], init=0)
        last = 0
        for row in rows:
            t = row.cycle * CYCLE_NS
            for name, v in zip(TRACE_COLUMNS[1:], row_values(row)[1:]):
                w.change(wires[name], t, v)
            last = t
        if rows:
            w.close(last + CYCLE_NS)


def _signed(value: int, bits: int) -> int:
    return value - (1 << bits) if value >> (bits - 1) & 1 else value


def read_vcd(fh) -> list[tuple[int, ...]]:
    """Decode a trace written by :func:`write_vcd` back into CSV-shaped rows.

    ``fh`` must be a binary file object.
    """
    ids: dict[str, tuple[str, int]] = {}
    current: dict[str, int] = {}
    changes: list[tuple[int, str, int]] = []
    time = 0
    end = 0
    for tok in tokenize(fh):
        if tok.kind is TokenKind.VAR:
            decl = tok.var
            ids[decl.id_code] = (decl.reference, decl.size)
        elif tok.kind is TokenKind.CHANGE_TIME:
            time = tok.time_change
            end = max(end, time)
        elif tok.kind is TokenKind.CHANGE_SCALAR:
            name, _ = ids[tok.scalar_change.id_code]
            changes.append((time, name, int(tok.scalar_change.value)))
        elif tok.kind is TokenKind.CHANGE_VECTOR:
            name, size = ids[tok.vector_change.id_code]
            changes.append((time, name, _signed(tok.vector_change.value, size)))

    names = TRACE_COLUMNS[1:]
    current = dict.fromkeys(names, 0)
    rows = []
    i = 0
    first = changes[0][0] // CYCLE_NS if changes else 0
    for cycle in range(first, end // CYCLE_NS):
        t = cycle * CYCLE_NS
        while i < len(changes) and changes[i][0] <= t:
            _, name, v = changes[i]
            current[name] = v
            i += 1
        rows.append((cycle,) + tuple(current[c] for c in names))
    return rows
