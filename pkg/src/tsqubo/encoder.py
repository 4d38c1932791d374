"""Symbolic discretization of whole series: PAA, SAX and SFA.

Symbols are integer indices ``0..a-1``; letters only appear through
:func:`to_letters` / :func:`from_letters` for display.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from tsqubo.dataio import TimeSeries

SFA = "SFA"
SAX = "SAX"


@dataclass(frozen=True)
class SymbolicWord:
    symbols: tuple[int, ...]
    alphabet_size: int
    source_id: int | None = None
    label: int | str | None = None

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        if self.alphabet_size < 1:
            raise ValueError("alphabet_size must be positive")
        if any(s < 0 or s >= self.alphabet_size for s in symbols):
            raise ValueError(f"symbols {symbols} outside alphabet of size {self.alphabet_size}")
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return to_letters(self.symbols)

    def unlabeled(self) -> "SymbolicWord":
        return SymbolicWord(self.symbols, self.alphabet_size, self.source_id, None)


def to_letters(symbols) -> str:
    return "".join(string.ascii_uppercase[s] for s in symbols)


def from_letters(text: str, alphabet_size: int, source_id=None, label=None) -> SymbolicWord:
    return SymbolicWord(
        tuple(string.ascii_uppercase.index(c) for c in text.upper()), alphabet_size, source_id, label
    )


def paa(values, segments: int) -> np.ndarray:
    """Piecewise aggregate approximation with fractional-overlap weighting.

    Segment ``k`` spans the continuous index range ``[k*n/s, (k+1)*n/s)``;
    a sample straddling a boundary contributes to both neighbours in
    proportion to its overlap, so the overall mean is preserved exactly.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if segments < 1:
        raise ValueError("segments must be >= 1")
    if segments > n:
        raise ValueError(f"cannot reduce {n} samples to {segments} segments")
    if n % segments == 0:
        return values.reshape(segments, n // segments).mean(axis=1)
    edges = np.arange(segments + 1) * (n / segments)
    left = np.arange(n)
    overlap = np.minimum(left + 1, edges[1:, None]) - np.maximum(left, edges[:-1, None])
    weights = np.clip(overlap, 0.0, None)
    return weights @ values / (n / segments)


@dataclass(frozen=True, eq=False)
class EncoderModel:
    kind: str
    word_length: int
    alphabet_size: int
    breakpoints: np.ndarray
    include_dc: bool = False
    binning: str = "equi-depth"
    series_length: int | None = None

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float)
        expected = (self.word_length, self.alphabet_size - 1) if self.kind == SFA else (self.alphabet_size - 1,)
        if self.kind not in (SFA, SAX):
            raise ValueError(f"unknown encoder kind {self.kind!r}")
        if bp.shape != expected:
            raise ValueError(f"breakpoints have shape {bp.shape}, expected {expected}")
        if np.any(np.diff(bp, axis=-1) < 0):
            raise ValueError("breakpoints must be non-decreasing")
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "word_length": self.word_length,
                "alphabet_size": self.alphabet_size,
                "breakpoints": self.breakpoints.tolist(),
                "include_dc": self.include_dc,
                "binning": self.binning,
                "series_length": self.series_length,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "EncoderModel":
        return cls(**json.loads(text))


def dft_slots(values, word_length: int, include_dc: bool = False) -> np.ndarray:
    """First ``word_length`` interleaved (real, imag) Fourier coefficients."""
    coefs = np.fft.rfft(np.asarray(values, dtype=float), axis=-1)
    if not include_dc:
        coefs = coefs[..., 1:]
    slots = np.stack([coefs.real, coefs.imag], axis=-1).reshape(*coefs.shape[:-1], -1)
    if word_length > slots.shape[-1]:
        raise ValueError(
            f"word length {word_length} exceeds the {slots.shape[-1]} available Fourier slots"
        )
    return slots[..., :word_length]


def fit_sfa(
    train: list[TimeSeries],
    word_length: int,
    alphabet_size: int,
    include_dc: bool = False,
    binning: str = "equi-depth",
) -> EncoderModel:
    """Learn per-slot bin edges (multiple coefficient binning) from training series only."""
    if not train:
        raise ValueError("cannot fit an encoder on an empty training set")
    if alphabet_size < 2 or word_length < 1:
        raise ValueError("need word_length >= 1 and alphabet_size >= 2")
    lengths = {len(ts) for ts in train}
    if len(lengths) != 1:
        raise ValueError("training series must share one length")
    slots = dft_slots(np.stack([ts.values for ts in train]), word_length, include_dc)
    if binning == "equi-depth":
        qs = np.arange(1, alphabet_size) / alphabet_size
        edges = np.quantile(slots, qs, axis=0).T
    elif binning == "equi-width":
        lo, hi = slots.min(axis=0), slots.max(axis=0)
        frac = np.arange(1, alphabet_size) / alphabet_size
        edges = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
    else:
        raise ValueError(f"unknown binning {binning!r}")
    return EncoderModel(SFA, word_length, alphabet_size, edges, include_dc, binning, lengths.pop())


def fit_sax(word_length: int, alphabet_size: int, series_length: int | None = None) -> EncoderModel:
    if alphabet_size < 2 or word_length < 1:
        raise ValueError("need word_length >= 1 and alphabet_size >= 2")
    edges = norm.ppf(np.arange(1, alphabet_size) / alphabet_size)
    return EncoderModel(SAX, word_length, alphabet_size, edges, series_length=series_length)


def encode(model: EncoderModel, ts: TimeSeries, keep_label: bool = True) -> SymbolicWord:
    if model.series_length is not None and len(ts) != model.series_length:
        raise ValueError(f"series {ts.id} has length {len(ts)}, model expects {model.series_length}")
    if model.kind == SFA:
        slots = dft_slots(ts.values, model.word_length, model.include_dc)
        symbols = [int(np.searchsorted(row, v, side="right")) for row, v in zip(model.breakpoints, slots)]
    else:
        segments = paa(ts.values, model.word_length)
        symbols = np.searchsorted(model.breakpoints, segments, side="right").tolist()
    return SymbolicWord(tuple(symbols), model.alphabet_size, ts.id, ts.label if keep_label else None)
