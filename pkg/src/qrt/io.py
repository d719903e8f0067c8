"""Tournament text format and canonical JSON output.

Text format: first line is ``n``; each of the next ``n`` lines holds ``n``
characters ``'0'``/``'1'`` with row ``x`` column ``y`` equal to adj(x, y).
The file ends with a newline.
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .core import Tournament, TournamentError, validate

FLOAT_DIGITS = 12


def dumps_tournament(t: Tournament) -> str:
    lines = [str(t.n)]
    for row in t.rows:
        lines.append("".join("1" if row >> y & 1 else "0" for y in range(t.n)))
    return "\n".join(lines) + "\n"


def loads_tournament(text: str, check: bool = True) -> Tournament:
    if not text.endswith("\n"):
        raise TournamentError("tournament text must end with a newline")
    lines = text[:-1].split("\n")
    try:
        n = int(lines[0])
    except ValueError:
        raise TournamentError(f"first line must be a vertex count, got {lines[0]!r}") from None
    if n < 1:
        raise TournamentError("vertex count must be positive")
    body = lines[1:]
    if len(body) != n:
        raise TournamentError(f"expected {n} rows, got {len(body)}")
    rows = []
    for x, line in enumerate(body):
        if len(line) != n or set(line) - {"0", "1"}:
            raise TournamentError(f"row {x} must be {n} characters of 0/1")
        if line[x] != "0":
            raise TournamentError(f"diagonal entry ({x}, {x}) must be 0", (x, x))
        rows.append(int(line[::-1], 2))
    t = Tournament(n, tuple(rows))
    if check:
        validate(t)
    return t


def write_tournament(t: Tournament, path) -> None:
    Path(path).write_text(dumps_tournament(t), encoding="utf-8")


def read_tournament(path, check: bool = True) -> Tournament:
    return loads_tournament(Path(path).read_text(encoding="utf-8"), check=check)


def content_hash(t: Tournament) -> str:
    """``sha256:<hex>`` of the UTF-8 text-format bytes."""
    return "sha256:" + hashlib.sha256(dumps_tournament(t).encode("utf-8")).hexdigest()


def _canon(obj):
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(f"{x:.{FLOAT_DIGITS}g}")
        return x if x != 0 else 0.0
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_canon(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    """Sorted keys, floats rounded to 12 significant digits, trailing newline."""
    return json.dumps(_canon(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
