"""Feature-dump file format: CSV with a ``n,d,label`` header line followed
by n rows of d comma-separated decimal values. Values round-trip exactly
(shortest-repr formatting); NaN and infinities are rejected on read.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import MalformedHeader, NonFiniteValue, RowLengthMismatch


@dataclass(frozen=True)
class FeatureDump:
    n: int
    d: int
    label: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (self.n, self.d):
            raise MalformedHeader(
                f"matrix shape {m.shape} does not match header ({self.n}, {self.d})"
            )
        if not np.all(np.isfinite(m)):
            bad = np.argwhere(~np.isfinite(m))[0]
            raise NonFiniteValue(
                f"non-finite value at row {bad[0]}, col {bad[1]}",
                row=int(bad[0]),
                col=int(bad[1]),
            )
        object.__setattr__(self, "matrix", m)


def read_feature_dump(path):
    """Parse a feature dump; errors carry the offending row/column."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split(",", 2)
        if len(parts) != 3:
            raise MalformedHeader(
                f"{path}: header must be 'n,d,label', got {header!r}"
            )
        try:
            n, d = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise MalformedHeader(f"{path}: non-integer n/d in header {header!r}") from exc
        if n < 1 or d < 1:
            raise MalformedHeader(f"{path}: n and d must be positive, got {n},{d}")
        label = parts[2]
        matrix = np.empty((n, d), dtype=np.float64)
        for row in range(n):
            line = fh.readline()
            if not line:
                raise MalformedHeader(f"{path}: expected {n} rows, found {row}")
            fields = line.rstrip("\n").split(",")
            if len(fields) != d:
                raise RowLengthMismatch(
                    f"{path}: row {row} has {len(fields)} values, expected {d}",
                    row=row,
                )
            for col, text in enumerate(fields):
                try:
                    value = float(text)
                except ValueError as exc:
                    raise NonFiniteValue(
                        f"{path}: unparseable value {text!r} at row {row}, col {col}",
                        row=row,
                        col=col,
                    ) from exc
                if not math.isfinite(value):
                    raise NonFiniteValue(
                        f"{path}: non-finite value at row {row}, col {col}",
                        row=row,
                        col=col,
                    )
                matrix[row, col] = value
        trailer = fh.read().strip()
        if trailer:
            raise MalformedHeader(f"{path}: trailing content after {n} rows")
    return FeatureDump(n=n, d=d, label=label, matrix=matrix)


def write_feature_dump(path, dump):
    """Write a dump with exact round-trip value formatting."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{dump.n},{dump.d},{dump.label}\n")
        for row in dump.matrix:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
