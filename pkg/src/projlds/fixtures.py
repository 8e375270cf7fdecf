"""Regression checks against the published matrices and numbers.

The data files live next to this module; ``run_checks`` accepts another
directory so tampered copies can be exercised.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .galois import field_new
from .lds import build_lds, choose_shift, import_matrix, verify_fixture
from .metrics import shannon_limit
from .projective import incidence_matrix, quadric_vector, trace_table

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _load(d: Path, name: str):
    return json.loads((d / name).read_text())


def _incidence(q: int, fname: str):
    def check(d: Path):
        rows = np.array(_load(d, fname)["rows"])
        got = incidence_matrix(q).matrix
        if got.shape != rows.shape:
            return False, f"shape {got.shape} vs {rows.shape}"
        bad = np.argwhere(got != rows)
        if len(bad):
            i, j = bad[0]
            return False, f"entry ({i}, {j}): built {got[i, j]}, fixture {rows[i, j]}"
        return True, f"{rows.shape[0]}x{rows.shape[1]} exact"
    return check


def _trace(d: Path):
    want = _load(d, "published_values.json")["trace_q3"]
    got = trace_table(field_new(3, 1))
    if got != want:
        i = next(k for k, (a, b) in enumerate(zip(got, want)) if a != b)
        return False, f"Tr(alpha^{i}) = {got[i]}, fixture {want[i]}"
    return True, "13 values exact"


def _quadric(q: int):
    def check(d: Path):
        want = _load(d, "published_values.json")["quadric"][str(q)]
        im = incidence_matrix(q)
        if list(im.first_col) != want["first_col"]:
            return False, f"first column {list(im.first_col)} vs {want['first_col']}"
        gq = quadric_vector(im)
        if gq.r != want["r"]:
            return False, f"multiplier r = {gq.r}, fixture {want['r']}"
        if list(gq.bits) != want["g_q"]:
            return False, f"g_Q {list(gq.bits)} vs {want['g_q']}"
        return True, f"r = {gq.r}, g_Q exact"
    return check


def _shifted(q: int):
    def check(d: Path):
        want = _load(d, "published_values.json")["shifted_quadric"][str(q)]
        t, gp = choose_shift(quadric_vector(q))
        if t != want["t"] or gp.tolist() != want["g_q_prime"]:
            return False, f"t = {t}, g_Q' = {gp.tolist()}; fixture t = {want['t']}, {want['g_q_prime']}"
        return True, f"t = {t}, g_Q' exact"
    return check


def _lds(q: int, fname: str):
    def check(d: Path):
        fixture = import_matrix(d / fname)  # validates the published signing
        verdict = verify_fixture(build_lds(q), fixture)
        if not verdict:
            return False, f"built matrix differs from fixture: {verdict.detail}"
        return True, f"{fixture.L}x{fixture.K} equal up to column signs"
    return check


def _shannon(d: Path):
    msgs = []
    ok = True
    for row in _load(d, "published_values.json")["shannon"]:
        num, den = row["code_rate"]
        eta, lin, db = shannon_limit(num / den, row["bits_per_symbol"], row["K"], row["L"])
        good = (
            abs(round(eta, 2) - row["eta"]) < 1e-9
            and abs(lin - row["eb_n0"]) < 5e-4
            and abs(db - row["eb_n0_db"]) <= 0.01
        )
        ok &= good
        msgs.append(f"{row['K']}/{row['L']}: eta={eta:.3f}, Eb/N0={lin:.3f} ({db:.2f} dB)")
    return ok, "; ".join(msgs)


CHECKS: dict[str, Callable[[Path], tuple[bool, str]]] = {
    "incidence_I7": _incidence(2, "incidence_7.json"),
    "incidence_I13": _incidence(3, "incidence_13.json"),
    "trace_table_q3": _trace,
    "quadric_q2": _quadric(2),
    "quadric_q3": _quadric(3),
    "shifted_quadric_q2": _shifted(2),
    "shifted_quadric_q3": _shifted(3),
    "lds_7x9": _lds(2, "lds_7x9.json"),
    "lds_13x15": _lds(3, "lds_13x15.json"),
    "shannon_limits": _shannon,
}


def run_checks(fixture_dir: Path | None = None, names=None) -> list[CheckResult]:
    d = Path(fixture_dir) if fixture_dir else FIXTURE_DIR
    out = []
    for name in names or CHECKS:
        try:
            ok, detail = CHECKS[name](d)
        except Exception as exc:  # a broken fixture file is a named failure
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, detail))
    return out
