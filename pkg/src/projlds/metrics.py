"""Correlation, Welch-bound, distance and rate figures for LDS matrices.

Everything that can be exact is a ``Fraction``: entries are integers and the
column scale is 1/sqrt(q+1), so correlations are (integer dot)/(q+1).
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lds import LdsMatrix


@dataclass(frozen=True)
class CorrelationReport:
    q: int
    L: int
    K: int
    rho: list[list[Fraction]]
    c_max: Fraction
    tsc: Fraction
    welch_tsc_lb: Fraction
    closed_form_tsc: Fraction
    welch_cmax_lb: float
    distance_spectrum: Counter  # squared distance -> number of unordered pairs

    @property
    def tsc_minus_formula(self) -> Fraction:
        return self.tsc - self.closed_form_tsc

    @property
    def min_distance_sq(self) -> Fraction:
        return min(self.distance_spectrum)

    def to_dict(self) -> dict:
        def fr(x: Fraction) -> dict:
            return {"fraction": str(x), "decimal": float(x)}

        return {
            "q": self.q,
            "L": self.L,
            "K": self.K,
            "c_max": fr(self.c_max),
            "welch_cmax_lb": self.welch_cmax_lb,
            "tsc": fr(self.tsc),
            "welch_tsc_lb": fr(self.welch_tsc_lb),
            "tsc_meets_welch": self.tsc >= self.welch_tsc_lb,
            "closed_form_tsc": fr(self.closed_form_tsc),
            "tsc_minus_formula": fr(self.tsc_minus_formula),
            "distance_spectrum": [
                {"distance_sq": fr(d), "pairs": n} for d, n in sorted(self.distance_spectrum.items())
            ],
            "min_distance_sq": fr(self.min_distance_sq),
            "rho": [[str(v) for v in row] for row in self.rho],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        rows = [
            ("matrix", f"{self.L} x {self.K} (q = {self.q})"),
            ("c_max", _both(self.c_max)),
            ("Welch c_max bound", f"{self.welch_cmax_lb:.6f}"),
            ("TSC (measured)", _both(self.tsc)),
            ("Welch TSC bound K^2/L", _both(self.welch_tsc_lb)),
            ("TSC closed form", _both(self.closed_form_tsc)),
            ("measured - closed form", _both(self.tsc_minus_formula)),
            ("min squared distance", _both(self.min_distance_sq)),
        ]
        for d, n in sorted(self.distance_spectrum.items()):
            rows.append((f"  d^2 = {d}", f"{n} pairs"))
        w = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(w)}  {v}" for k, v in rows)


def _both(x: Fraction) -> str:
    return f"{x}  ({float(x):.6f})"


def correlation_matrix(C: LdsMatrix) -> list[list[Fraction]]:
    g = C.gram()
    d = C.scale_sq_denom
    return [[Fraction(int(v), d) for v in row] for row in g]


def max_cross_correlation(rho: list[list[Fraction]]) -> Fraction:
    K = len(rho)
    return max(abs(rho[v][lam]) for v in range(K) for lam in range(K) if v != lam)


def total_squared_correlation(rho: list[list[Fraction]]) -> Fraction:
    """Ordered double sum over all (v, lambda), diagonal included."""
    return sum((x * x for row in rho for x in row), Fraction(0))


def welch_tsc_lb(K: int, L: int) -> Fraction:
    return Fraction(K * K, L)


def welch_cmax_lb(K: int, L: int) -> float:
    """sqrt((K/L - 1)/(K - 1)); zero when K <= L since orthogonal columns exist."""
    if K <= L:
        return 0.0
    return math.sqrt((K / L - 1) / (K - 1))


def closed_form_tsc(q: int) -> Fraction:
    """(q^2+q+2) + (q^2+q+1)(q^2+q) / (2(q+1)^2) + 1/(q+1), evaluated literally."""
    return (
        Fraction(q * q + q + 2)
        + Fraction((q * q + q + 1) * (q * q + q), 2 * (q + 1) ** 2)
        + Fraction(1, q + 1)
    )


def distance_spectrum(C: LdsMatrix) -> Counter:
    """Squared Euclidean distances between normalized columns, over unordered pairs."""
    g = C.gram()
    d = C.scale_sq_denom
    out: Counter = Counter()
    for v in range(C.K):
        for lam in range(v + 1, C.K):
            out[Fraction(int(g[v, v] + g[lam, lam] - 2 * g[v, lam]), d)] += 1
    return out


def expected_distances(q: int) -> set[Fraction]:
    return {Fraction(2 * q, q + 1), Fraction(2), Fraction(2 * q + 4, q + 1)}


def correlation_report(C: LdsMatrix) -> CorrelationReport:
    rho = correlation_matrix(C)
    return CorrelationReport(
        q=C.q,
        L=C.L,
        K=C.K,
        rho=rho,
        c_max=max_cross_correlation(rho),
        tsc=total_squared_correlation(rho),
        welch_tsc_lb=welch_tsc_lb(C.K, C.L),
        closed_form_tsc=closed_form_tsc(C.q),
        welch_cmax_lb=welch_cmax_lb(C.K, C.L),
        distance_spectrum=distance_spectrum(C),
    )


def shannon_limit(code_rate: float, bits_per_symbol: float, K: int, L: int) -> tuple[float, float, float]:
    """Spectral efficiency and the unrestricted Shannon-limit Eb/N0.

    Returns (eta, eb_n0_linear, eb_n0_db) with eta = code_rate * bits * K/L and
    Eb/N0 = (2^eta - 1)/eta.
    """
    if min(code_rate, bits_per_symbol, K, L) <= 0:
        raise ValueError("all arguments must be positive")
    eta = float(code_rate) * bits_per_symbol * K / L
    ebn0 = np.expm1(eta * np.log(2)) / eta
    return eta, float(ebn0), float(10 * np.log10(ebn0))
