"""LDS code matrices: incidence matrix plus two conic columns, signed and scaled.

Entries are kept as integers in {-1, 0, +1}; the common column scale
1/sqrt(q+1) is carried symbolically as ``scale_sq_denom = q + 1``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .projective import (
    IncidenceMatrix,
    QuadricVector,
    incidence_matrix,
    quadric_vector,
    shift_down,
)


class LdsValidationError(ValueError):
    pass


class SigningError(RuntimeError):
    pass


class MatrixFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LdsMatrix:
    q: int
    entries: np.ndarray  # L x K, int64
    scale_sq_denom: int

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.int64)
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def L(self) -> int:
        return self.entries.shape[0]

    @property
    def K(self) -> int:
        return self.entries.shape[1]

    @property
    def scale(self) -> float:
        return 1.0 / np.sqrt(self.scale_sq_denom)

    def normalized(self) -> np.ndarray:
        return self.entries * self.scale

    def gram(self) -> np.ndarray:
        """Unnormalized integer Gram matrix C^T C."""
        return self.entries.T @ self.entries

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LdsMatrix)
            and self.q == other.q
            and self.scale_sq_denom == other.scale_sq_denom
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def validate(self) -> None:
        """Raise LdsValidationError unless every structural invariant holds."""
        q, L, K = self.q, self.L, self.K
        if L != q * q + q + 1:
            raise LdsValidationError(f"L={L} does not equal q^2+q+1 for q={q}")
        if self.scale_sq_denom != q + 1:
            raise LdsValidationError(f"scale_sq_denom={self.scale_sq_denom}, expected {q + 1}")
        if not np.isin(self.entries, (-1, 0, 1)).all():
            raise LdsValidationError("entries must lie in {-1, 0, 1}")
        weights = (self.entries != 0).sum(axis=0)
        for k, w in enumerate(weights):
            if w != q + 1:
                raise LdsValidationError(f"column {k} has weight {w}, expected {q + 1}")
        g = self.gram()
        off = np.abs(g - np.diag(np.diag(g)))
        if K > 1 and off.max() > 1:
            v, lam = np.argwhere(off > 1)[0]
            raise LdsValidationError(
                f"columns {v} and {lam} have |dot| = {off[v, lam]} > 1"
            )


# ---------------------------------------------------------------- construction

def overlap(a: np.ndarray, b: np.ndarray) -> int:
    return int(((np.asarray(a) != 0) & (np.asarray(b) != 0)).sum())


def choose_shift(gq: QuadricVector) -> tuple[int, np.ndarray]:
    """Smallest downward shift t >= 1 minimising the overlap of g_Q with its shift."""
    v = gq.vector
    best = min(range(1, gq.L), key=lambda t: (overlap(v, shift_down(v, t)), t))
    return best, shift_down(v, best)


def _candidate_negations(points: list[int], max_size: int | None = None):
    """Subsets of ``points`` by size, then lexicographically in the given order."""
    top = len(points) if max_size is None else max_size
    for size in range(top + 1):
        yield from combinations(points, size)


def _signed(support: list[int], negated, L: int) -> np.ndarray:
    v = np.zeros(L, dtype=np.int64)
    v[support] = 1
    v[list(negated)] = -1
    return v


def assign_signs(
    im: IncidenceMatrix, gq: QuadricVector, gq_prime: np.ndarray
) -> np.ndarray:
    """Signed L x (L+2) matrix [I_L | g_Q | g_Q'] with all pairwise |dots| <= 1.

    g_Q is held positive (per-column sign gauge).  The search backtracks over
    signings of g_Q' (fewest negations first, rows ascending) and, for each,
    signs the line columns left to right.  Within line j only points shared
    with a conic are candidates; they are tried fewest first, ordered by
    their offset from row j, so every column is searched in the same
    circulant-relative frame.  Two lines always meet in exactly one point,
    so line columns never constrain each other.
    """
    L = im.L
    g = gq.vector
    gp_support = [int(i) for i in np.flatnonzero(gq_prime)]
    for gp_neg in _candidate_negations(gp_support):
        gp = _signed(gp_support, gp_neg, L)
        if abs(int(g @ gp)) > 1:
            continue
        cols = []
        for j in range(L):
            pts = im.line_points(j)
            hits = [i for i in pts if g[i] or gp[i]]
            for neg in _candidate_negations(hits):
                c = _signed(pts, neg, L)
                if abs(int(c @ g)) <= 1 and abs(int(c @ gp)) <= 1:
                    cols.append(c)
                    break
            else:
                break
        if len(cols) == L:
            return np.column_stack(cols + [g, gp])
    raise SigningError(f"no valid signing exists for q={im.q} with this conic pair")


def build_lds(q: int) -> LdsMatrix:
    im = incidence_matrix(q)
    gq = quadric_vector(im)
    _, gq_prime = choose_shift(gq)
    entries = assign_signs(im, gq, gq_prime)
    C = LdsMatrix(q, entries, q + 1)
    C.validate()
    return C


# ---------------------------------------------------------------- comparison

@dataclass(frozen=True)
class FixtureVerdict:
    equivalent: bool
    position: tuple[int, int] | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.equivalent


def canonical_entries(entries: np.ndarray) -> np.ndarray:
    """Flip each column so its first nonzero entry is +1."""
    out = np.array(entries, dtype=np.int64)
    for k in range(out.shape[1]):
        nz = np.flatnonzero(out[:, k])
        if len(nz) and out[nz[0], k] < 0:
            out[:, k] = -out[:, k]
    return out


def verify_fixture(C: LdsMatrix, fixture: LdsMatrix) -> FixtureVerdict:
    """Equality up to per-column sign flips."""
    if C.entries.shape != fixture.entries.shape:
        raise ValueError(f"dimension mismatch: {C.entries.shape} vs {fixture.entries.shape}")
    if C.scale_sq_denom != fixture.scale_sq_denom:
        return FixtureVerdict(False, None, "scale differs")
    a, b = canonical_entries(C.entries), canonical_entries(fixture.entries)
    diff = np.argwhere(a != b)
    if len(diff) == 0:
        return FixtureVerdict(True)
    # column-major so the reported position is the first differing column
    i, k = min((int(r), int(c)) for r, c in diff[:, ::-1])[::-1]
    return FixtureVerdict(
        False, (i, k), f"row {i}, column {k}: {a[i, k]} vs {b[i, k]} after sign canonicalization"
    )


# ---------------------------------------------------------------- file formats

def to_json_dict(C: LdsMatrix) -> dict:
    return {
        "q": C.q,
        "L": C.L,
        "K": C.K,
        "scale_sq_denom": C.scale_sq_denom,
        "columns": [[int(v) for v in C.entries[:, k]] for k in range(C.K)],
    }


def from_json_dict(d: dict, validate: bool = True) -> LdsMatrix:
    for key in ("q", "L", "K", "scale_sq_denom", "columns"):
        if key not in d:
            raise MatrixFormatError(f"missing field {key!r}")
    for key in ("q", "L", "K", "scale_sq_denom"):
        if not isinstance(d[key], int) or isinstance(d[key], bool):
            raise MatrixFormatError(f"field {key!r} must be an integer, got {d[key]!r}")
    cols = d["columns"]
    if not isinstance(cols, list) or len(cols) != d["K"]:
        raise MatrixFormatError(f"field 'columns' must hold K={d['K']} columns")
    for k, col in enumerate(cols):
        if not isinstance(col, list) or len(col) != d["L"]:
            raise MatrixFormatError(f"columns[{k}] must have length L={d['L']}")
        for i, v in enumerate(col):
            if v not in (-1, 0, 1) or isinstance(v, bool):
                raise MatrixFormatError(f"columns[{k}][{i}] = {v!r} not in {{-1, 0, 1}}")
    C = LdsMatrix(d["q"], np.array(cols, dtype=np.int64).T.reshape(d["L"], d["K"]), d["scale_sq_denom"])
    if validate:
        C.validate()
    return C


def to_csv(C: LdsMatrix) -> str:
    buf = io.StringIO()
    buf.write(f"# q={C.q} L={C.L} K={C.K} scale=1/sqrt({C.scale_sq_denom})\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in C.entries:
        w.writerow(int(v) for v in row)
    return buf.getvalue()


def from_csv(text: str, validate: bool = True) -> LdsMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise MatrixFormatError("line 1: missing '# q=... L=... K=... scale=...' header")
    meta = {}
    for tok in lines[0][1:].split():
        if "=" not in tok:
            raise MatrixFormatError(f"line 1: malformed header token {tok!r}")
        k, v = tok.split("=", 1)
        meta[k] = v
    try:
        q, L, K = int(meta["q"]), int(meta["L"]), int(meta["K"])
        scale = meta["scale"]
        denom = int(scale[len("1/sqrt("):-1])
    except (KeyError, ValueError) as exc:
        raise MatrixFormatError(f"line 1: bad header ({exc})") from None
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != K:
            raise MatrixFormatError(f"line {lineno}: expected {K} fields, got {len(fields)}")
        row = []
        for f_idx, f in enumerate(fields, start=1):
            try:
                v = int(f)
            except ValueError:
                raise MatrixFormatError(f"line {lineno}, field {f_idx}: {f!r} is not an integer") from None
            if v not in (-1, 0, 1):
                raise MatrixFormatError(f"line {lineno}, field {f_idx}: {v} not in {{-1, 0, 1}}")
            row.append(v)
        rows.append(row)
    if len(rows) != L:
        raise MatrixFormatError(f"expected {L} data rows, got {len(rows)}")
    C = LdsMatrix(q, np.array(rows, dtype=np.int64), denom)
    if validate:
        C.validate()
    return C


def export_matrix(C: LdsMatrix, path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or ("csv" if path.suffix.lower() == ".csv" else "json")
    if fmt == "json":
        path.write_text(json.dumps(to_json_dict(C)) + "\n")
    elif fmt == "csv":
        path.write_text(to_csv(C))
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def import_matrix(path, validate: bool = True) -> LdsMatrix:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv" or text.lstrip().startswith("#"):
        return from_csv(text, validate)
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(d, dict):
        raise MatrixFormatError(f"{path}: top level must be an object")
    return from_json_dict(d, validate)
