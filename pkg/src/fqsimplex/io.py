"""Point-set files and seeded random sets.

File format::

    # comments start with '#', anywhere on a line
    q d
    x_1 x_2 ... x_d
    ...

Coordinates must already be residues in ``[0, q)``.  Duplicate points are
rejected with the offending line number.

Random sets use numpy's PCG64 bit generator.  ``sample_set`` draws one
uniform double per point of F_q^d in mixed-radix order and keeps the point
when the draw is below ``density``; for a fixed seed the sets are therefore
nested as the density grows.
"""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import PointSetFormatError
from .field import field_ctx
from .simplex import PointSet


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_point_set(text: str) -> PointSet:
    lines = _lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise PointSetFormatError("empty point-set file; expected a 'q d' header") from None
    parts = header.split()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        raise PointSetFormatError(f"line {lineno}: header must be 'q d', got {header!r}")
    q, d = int(parts[0]), int(parts[1])
    try:
        field_ctx(q)
    except ValueError as exc:
        raise PointSetFormatError(f"line {lineno}: {exc}") from None
    if d < 1:
        raise PointSetFormatError(f"line {lineno}: dimension must be >= 1")
    seen: dict[tuple[int, ...], int] = {}
    points = []
    for lineno, line in lines:
        fields = line.split()
        if len(fields) != d:
            raise PointSetFormatError(f"line {lineno}: expected {d} coordinates, got {len(fields)}")
        try:
            pt = tuple(int(f) for f in fields)
        except ValueError:
            raise PointSetFormatError(f"line {lineno}: non-integer coordinate in {line!r}") from None
        if any(c < 0 or c >= q for c in pt):
            raise PointSetFormatError(f"line {lineno}: coordinates must lie in [0, {q})")
        if pt in seen:
            raise PointSetFormatError(f"line {lineno}: duplicate point {pt} (first on line {seen[pt]})")
        seen[pt] = lineno
        points.append(pt)
    return PointSet(q, d, np.array(points, dtype=np.int64).reshape(-1, d))


def read_point_set(path) -> PointSet:
    return parse_point_set(Path(path).read_text())


def format_point_set(e: PointSet) -> str:
    rows = [f"{e.q} {e.d}"]
    rows += [" ".join(str(int(c)) for c in p) for p in e.points]
    return "\n".join(rows) + "\n"


def write_point_set(e: PointSet, fh: TextIO | str | Path) -> None:
    if isinstance(fh, (str, Path)):
        Path(fh).write_text(format_point_set(e))
    else:
        fh.write(format_point_set(e))


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an int or a SeedSequence."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def sample_set(q: int, d: int, density: float, seed) -> PointSet:
    """Include each point of F_q^d independently with probability ``density``."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    field_ctx(q)
    draws = make_rng(seed).random(q**d)
    return PointSet.from_mask(draws < density, q, d)


def trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    """Per-trial stream; adding trials never changes earlier ones."""
    return np.random.SeedSequence(entropy=seed, spawn_key=(0, trial))


def side_length_seed(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(1,))
