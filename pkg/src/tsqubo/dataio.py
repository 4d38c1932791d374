"""Loading UCR-format univariate datasets and z-normalization."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np


class UCRParseError(ValueError):
    """Raised for malformed UCR text files."""


@dataclass(frozen=True, eq=False)
class TimeSeries:
    values: np.ndarray
    label: int | str | None
    id: int

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("series values must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.id} contains non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    def unlabeled(self) -> "TimeSeries":
        return replace(self, label=None)


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    train: list[TimeSeries]
    test: list[TimeSeries]
    class_set: frozenset = field(default=frozenset())

    def __post_init__(self):
        if not self.class_set:
            labels = {ts.label for ts in self.train} | {ts.label for ts in self.test}
            object.__setattr__(self, "class_set", frozenset(labels))
        stray = {ts.label for ts in self.train + self.test} - set(self.class_set)
        if stray:
            raise ValueError(f"labels {sorted(map(str, stray))} not in class_set")
        if {ts.id for ts in self.train} & {ts.id for ts in self.test}:
            raise ValueError("train and test ids overlap")


def _parse_label(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        as_float = float(token)
    except ValueError:
        return token
    return int(as_float) if as_float.is_integer() else token


def load_ucr(path, delimiter: str | None = "\t", id_offset: int = 0) -> list[TimeSeries]:
    """Read one UCR split: each line is ``label v1 v2 ... vT``.

    ``delimiter=None`` splits on any run of whitespace.
    """
    path = Path(path)
    series = []
    length = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = [t for t in line.split(delimiter) if t != ""] if delimiter else line.split()
            if len(tokens) < 2:
                raise UCRParseError(f"{path}:{lineno}: expected a label and at least one value")
            try:
                values = [float(t) for t in tokens[1:]]
            except ValueError as exc:
                raise UCRParseError(f"{path}:{lineno}: non-numeric token ({exc})") from None
            if length is None:
                length = len(values)
            elif len(values) != length:
                raise UCRParseError(
                    f"{path}:{lineno}: ragged line, {len(values)} values where {length} expected"
                )
            try:
                ts = TimeSeries(values, _parse_label(tokens[0]), id_offset + len(series))
            except ValueError as exc:
                raise UCRParseError(f"{path}:{lineno}: {exc}") from None
            series.append(ts)
    if not series:
        raise UCRParseError(f"{path}: empty file")
    return series


def znormalize(ts: TimeSeries) -> TimeSeries:
    """Shift to zero mean and scale to unit population std; constant series map to zeros."""
    values = ts.values
    mean = values.mean()
    std = values.std()
    if np.ptp(values) == 0 or std <= 1e-12 * max(1.0, abs(mean)):
        return replace(ts, values=np.zeros_like(values))
    return replace(ts, values=(values - mean) / std)


def _find_split(root: Path, name: str, split: str) -> Path:
    for ext in (".tsv", ".txt", ""):
        candidate = root / name / f"{name}_{split}{ext}"
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no {split} file for {name!r} under {root}")


def load_dataset(name: str, root=None, delimiter: str | None = "\t", normalize: bool = True) -> Dataset:
    """Load ``<root>/<name>/<name>_{TRAIN,TEST}.tsv`` as a :class:`Dataset`.

    ``root`` defaults to ``$UCR_ROOT``. Test ids continue after the train ids.
    """
    if root is None:
        root = os.environ.get("UCR_ROOT")
        if root is None:
            raise FileNotFoundError("no dataset root given and UCR_ROOT is unset")
    root = Path(root)
    train = load_ucr(_find_split(root, name, "TRAIN"), delimiter)
    test = load_ucr(_find_split(root, name, "TEST"), delimiter, id_offset=len(train))
    if len(train[0]) != len(test[0]):
        raise UCRParseError(f"{name}: train and test series lengths differ")
    if normalize:
        train = [znormalize(ts) for ts in train]
        test = [znormalize(ts) for ts in test]
    return Dataset(name, train, test)
