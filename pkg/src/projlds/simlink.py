"""Monte Carlo link simulation of y = C D x + n with 4QAM users.

Noise calibration: with unit-norm spreading columns, user k spends d_k^2 per
symbol, so Eb = mean(d_k^2) / bits_per_symbol.  The complex noise has total
variance sigma^2 = N0 per chip (sigma^2 / 2 per real dimension), hence

    sigma^2 = mean(d^2) / (bits_per_symbol * 10^(EbN0_dB / 10)).

Trials are grouped in fixed blocks; trial t at SNR index s draws from its own
stream seeded by (seed, s, t), so results do not depend on how many worker
threads evaluate the blocks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.special import expit

BITS_PER_SYMBOL = 2
MAX_ENUM_BITS = 20
DIAG_LOADING = 1e-10

# Gray 4QAM: bit 0 -> +1, bit 1 -> -1 on I and Q; index = 2*b_I + b_Q
QAM4 = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)


class SearchSpaceTooLarge(ValueError):
    pass


# ---------------------------------------------------------------- modulation

def modulate(bits) -> np.ndarray:
    """Map bits (..., 2K) to 4QAM symbols (..., K)."""
    bits = np.asarray(bits)
    if bits.shape[-1] % 2:
        raise ValueError(f"need an even number of bits, got {bits.shape[-1]}")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("bits must be 0 or 1")
    b_i, b_q = bits[..., 0::2], bits[..., 1::2]
    return ((1 - 2 * b_i) + 1j * (1 - 2 * b_q)) / np.sqrt(2)


def demodulate(x) -> np.ndarray:
    """Hard demap of symbols (..., K) to bits (..., 2K)."""
    x = np.asarray(x)
    out = np.empty(x.shape[:-1] + (2 * x.shape[-1],), dtype=np.int64)
    out[..., 0::2] = (x.real < 0).astype(np.int64)
    out[..., 1::2] = (x.imag < 0).astype(np.int64)
    return out


def symbol_indices_to_bits(idx) -> np.ndarray:
    idx = np.asarray(idx)
    out = np.empty(idx.shape[:-1] + (2 * idx.shape[-1],), dtype=np.int64)
    out[..., 0::2] = idx >> 1
    out[..., 1::2] = idx & 1
    return out


# ---------------------------------------------------------------- channel

def transmit(C: np.ndarray, d: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Chip vector(s) s = C diag(d) x; x may carry leading batch axes."""
    C = np.asarray(C)
    d = np.asarray(d)
    x = np.asarray(x)
    if C.shape[1] != d.shape[0] or x.shape[-1] != C.shape[1]:
        raise ValueError(f"dimension mismatch: C {C.shape}, d {d.shape}, x {x.shape}")
    return (x * d) @ C.T


def noise_variance(eb_n0_db: float, amplitudes) -> float:
    """Total complex noise variance per chip for a given Eb/N0."""
    if math.isinf(eb_n0_db) and eb_n0_db > 0:
        return 0.0
    a = np.asarray(amplitudes, dtype=float)
    eb = float(np.mean(a ** 2)) / BITS_PER_SYMBOL
    return eb / 10 ** (eb_n0_db / 10)


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    z = rng.standard_normal(shape + (2,) if isinstance(shape, tuple) else (shape, 2))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(variance / 2)


@dataclass
class ChannelState:
    """Effective matrix seen by the detector (per trial) and the noise variance."""

    H: np.ndarray  # (..., L, K) complex: C diag(h * d)
    sigma2: float
    gains: np.ndarray | None = None


def channel(C, d, x, sigma2: float, rng: np.random.Generator, kind: str = "awgn"):
    """Single-trial channel: returns (y, ChannelState)."""
    C = np.asarray(C, dtype=float)
    d = np.asarray(d, dtype=float)
    L, K = C.shape
    if kind == "awgn":
        h = np.ones(K, dtype=complex)
    elif kind == "rayleigh_flat":
        h = complex_gaussian(rng, K)
    else:
        raise ValueError(f"unknown channel {kind!r}")
    H = C * (h * d)
    n = complex_gaussian(rng, L, sigma2) if sigma2 > 0 else np.zeros(L, dtype=complex)
    return transmit(C, h * d, x) + n, ChannelState(H, sigma2, h)


# ---------------------------------------------------------------- detectors

def _check_enum(K: int) -> None:
    if BITS_PER_SYMBOL * K > MAX_ENUM_BITS:
        raise SearchSpaceTooLarge(
            f"exhaustive search over 4^{K} hypotheses exceeds the 2^{MAX_ENUM_BITS} limit; use the PDA detector"
        )


def _pm_table(n: int) -> np.ndarray:
    """All {+1,-1}^n vectors, lexicographic with +1 (bit 0) first."""
    return 1.0 - 2.0 * np.array(list(product((0, 1), repeat=n)), dtype=float).reshape(-1, n)


def _nearest(y: np.ndarray, S: np.ndarray, chunk: int = 1 << 15) -> np.ndarray:
    """Index of the first column of S (per batch) nearest to y.

    y: (B, N); S: (N, M) shared or (B, N, M) per batch.
    """
    B = y.shape[0]
    M = S.shape[-1]
    best = np.full(B, np.inf)
    arg = np.zeros(B, dtype=np.int64)
    for lo in range(0, M, chunk):
        Sc = S[..., lo:lo + chunk]
        if Sc.ndim == 2:
            diff = y[:, :, None] - Sc[None]
        else:
            diff = y[:, :, None] - Sc
        dist = np.einsum("bnm,bnm->bm", diff, diff)
        a = dist.argmin(axis=1)
        v = dist[np.arange(B), a]
        upd = v < best
        best = np.where(upd, v, best)
        arg = np.where(upd, a + lo, arg)
    return arg


def detect_ml(y: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Exhaustive ML: symbol indices (B, K) minimising ||y - H x||^2.

    y: (B, L) or (L,); H: (L, K) shared or (B, L, K).  When H is real the I
    and Q rails decouple and are searched separately over 2^K each; this
    returns the same lexicographically first minimiser as the joint search.
    """
    single = np.ndim(y) == 1
    y = np.atleast_2d(y)
    H = np.asarray(H)
    B, K = y.shape[0], H.shape[-1]
    _check_enum(K)
    A = _pm_table(K).T / np.sqrt(2)  # (K, 2^K)
    if not np.iscomplexobj(H) or not np.any(H.imag):
        Hr = np.real(H)
        S = Hr @ A  # (L, 2^K) or (B, L, 2^K)
        ia = _nearest(np.ascontiguousarray(y.real), S)
        ib = _nearest(np.ascontiguousarray(y.imag), S)
        bits_i = (1 - _pm_table(K)[ia]) / 2
        bits_q = (1 - _pm_table(K)[ib]) / 2
        idx = (2 * bits_i + bits_q).astype(np.int64)
    else:
        # joint search on the real-equivalent model, ordering hypotheses by
        # interleaved bits (b_I0, b_Q0, b_I1, ...) so the first minimiser is
        # the lexicographically first symbol vector
        T = _pm_table(2 * K)  # columns alternate I, Q per user
        X = (T[:, 0::2] + 1j * T[:, 1::2]).T / np.sqrt(2)  # (K, 4^K)
        S = H @ X
        Sr = np.concatenate([S.real, S.imag], axis=-2)
        yr = np.concatenate([y.real, y.imag], axis=-1)
        j = _nearest(yr, Sr)
        bits = ((1 - T[j]) / 2).astype(np.int64)
        idx = 2 * bits[:, 0::2] + bits[:, 1::2]
    return idx[0] if single else idx


@dataclass
class PdaResult:
    symbols: np.ndarray        # (B, K) symbol indices
    posteriors: np.ndarray     # (B, K, 4)
    iterations: np.ndarray     # (B,)
    loaded: bool               # diagonal loading was applied
    history: list = field(default_factory=list, repr=False)


def real_equivalent(y: np.ndarray, H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(B, 2L) observations and (B, 2L, 2K) matrix acting on {+-1}^(2K).

    Components 0..K-1 are the in-phase signs, K..2K-1 the quadrature signs.
    """
    Hr = np.concatenate(
        [np.concatenate([H.real, -H.imag], axis=-1), np.concatenate([H.imag, H.real], axis=-1)],
        axis=-2,
    ) / np.sqrt(2)
    yr = np.concatenate([y.real, y.imag], axis=-1)
    return yr, Hr


def detect_pda(
    y: np.ndarray,
    H: np.ndarray,
    sigma2: float,
    max_iters: int = 10,
    damping: float = 0.0,
    tol: float = 1e-6,
    keep_history: bool = False,
) -> PdaResult:
    """Probabilistic data association on the real-equivalent model.

    Each antipodal component i is updated in turn: the other components are
    replaced by a Gaussian with their current mean and variance, the inverse
    covariance is corrected by rank-1 (Sherman-Morrison) steps, and
    P(s_i = +1) = sigmoid(2 h_i^T W_i (y - sum_{j != i} h_j m_j)).
    Trials stop individually once no probability moves by more than ``tol``.
    """
    single = np.ndim(y) == 1
    y = np.atleast_2d(y)
    H = np.asarray(H, dtype=complex)
    if H.ndim == 2:
        H = np.broadcast_to(H, (y.shape[0],) + H.shape)
    yr, Hr = real_equivalent(y, H)
    B, N, n = Hr.shape
    noise = sigma2 / 2
    loaded = noise < DIAG_LOADING
    noise = max(noise, DIAG_LOADING)

    P = np.full((B, n), 0.5)
    active = np.ones(B, dtype=bool)
    iters = np.zeros(B, dtype=np.int64)
    eye = np.eye(N)
    history = []
    for _ in range(max_iters):
        m = 2 * P - 1
        v = 1 - m * m
        omega = np.einsum("bik,bk,bjk->bij", Hr, v, Hr) + noise * eye
        W = np.linalg.inv(omega)
        resid = yr - np.einsum("bik,bk->bi", Hr, m)
        P_old = P.copy()
        for i in range(n):
            h = Hr[:, :, i]
            Wh = np.einsum("bij,bj->bi", W, h)
            hWh = np.einsum("bi,bi->b", h, Wh)
            Wi = W + (v[:, i] / (1 - v[:, i] * hWh))[:, None, None] * Wh[:, :, None] * Wh[:, None, :]
            z = resid + h * m[:, i, None]
            llr = 2 * np.einsum("bi,bij,bj->b", h, Wi, z)
            p_new = expit(llr)
            p_new = (1 - damping) * p_new + damping * P[:, i]
            p_new = np.where(active, p_new, P[:, i])
            m_new = 2 * p_new - 1
            v_new = 1 - m_new * m_new
            Wih = np.einsum("bij,bj->bi", Wi, h)
            hWih = np.einsum("bi,bi->b", h, Wih)
            W = Wi - (v_new / (1 + v_new * hWih))[:, None, None] * Wih[:, :, None] * Wih[:, None, :]
            resid = z - h * m_new[:, None]
            P[:, i], m[:, i], v[:, i] = p_new, m_new, v_new
        iters += active
        change = np.abs(P - P_old).max(axis=1)
        if keep_history:
            history.append(_symbol_posteriors(P))
        active &= change >= tol
        if not active.any():
            break
    post = _symbol_posteriors(P)
    K = n // 2
    b_i = (P[:, :K] < 0.5).astype(np.int64)
    b_q = (P[:, K:] < 0.5).astype(np.int64)
    symbols = 2 * b_i + b_q
    if single:
        return PdaResult(symbols[0], post[0], iters[:1], loaded, [h[0] for h in history])
    return PdaResult(symbols, post, iters, loaded, history)


def _symbol_posteriors(P: np.ndarray) -> np.ndarray:
    K = P.shape[1] // 2
    pi = np.stack([P[:, :K], 1 - P[:, :K]], axis=-1)  # b_I = 0, 1
    pq = np.stack([P[:, K:], 1 - P[:, K:]], axis=-1)
    return (pi[..., :, None] * pq[..., None, :]).reshape(P.shape[0], K, 4)


# ---------------------------------------------------------------- UD check

@dataclass(frozen=True)
class UdReport:
    hypotheses: int
    distinct_images: int
    colliding_pairs: int
    colliding_inputs: int

    @property
    def uniquely_decodable(self) -> bool:
        return self.colliding_pairs == 0


def ud_check(entries, amplitudes=None) -> UdReport:
    """Exact collision count of x -> C D x over all 4QAM inputs.

    ``entries`` are the integer spreading entries (scale dropped, it is
    common to all columns); amplitudes are rationals.  Symbols are scaled
    to Gaussian integers +-1 +-i.
    """
    E = np.asarray(entries, dtype=np.int64)
    L, K = E.shape
    _check_enum(K)
    amps = [Fraction(a) for a in (amplitudes if amplitudes is not None else [1] * K)]
    if len(amps) != K or any(a <= 0 for a in amps):
        raise ValueError("need K positive amplitudes")
    den = math.lcm(*(a.denominator for a in amps))
    D = np.array([int(a * den) for a in amps], dtype=np.int64)
    signs = 1 - 2 * np.array(list(product((0, 1), repeat=K)), dtype=np.int64).reshape(-1, K)
    R = signs @ (E * D).T  # (2^K, L): one rail
    n = len(R)
    ia = np.repeat(np.arange(n), n)
    ib = np.tile(np.arange(n), n)
    img = np.concatenate([R[ia], R[ib]], axis=1)
    _, counts = np.unique(img, axis=0, return_counts=True)
    pairs = int((counts * (counts - 1) // 2).sum())
    return UdReport(n * n, len(counts), pairs, int(counts[counts > 1].sum()))


# ---------------------------------------------------------------- sweeps

@dataclass(frozen=True)
class BerPoint:
    eb_n0_db: float
    trials: int
    bit_errors: int
    bits_per_trial: int

    @property
    def ber(self) -> Fraction:
        total = self.trials * self.bits_per_trial
        return Fraction(self.bit_errors, total) if total else Fraction(0)

    @property
    def std_error(self) -> float:
        p = float(self.ber)
        n = self.trials * self.bits_per_trial
        return math.sqrt(max(p * (1 - p), 0.0) / n) if n else float("inf")


@dataclass(frozen=True)
class LinkSetup:
    C: np.ndarray          # L x K normalized real spreading matrix
    amplitudes: np.ndarray
    channel: str = "awgn"
    pda_max_iters: int = 10
    pda_damping: float = 0.0


def trial_rng(seed: int, snr_index: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(snr_index, trial))))


def draw_block(setup: LinkSetup, seed: int, snr_index: int, start: int, stop: int, sigma2: float):
    """Bits, received vectors and effective matrices for trials [start, stop)."""
    L, K = setup.C.shape
    bits = np.empty((stop - start, 2 * K), dtype=np.int64)
    y = np.empty((stop - start, L), dtype=complex)
    H = np.empty((stop - start, L, K), dtype=complex)
    for row, t in enumerate(range(start, stop)):
        rng = trial_rng(seed, snr_index, t)
        bits[row] = rng.integers(0, 2, 2 * K)
        x = modulate(bits[row])
        y[row], st = channel(setup.C, setup.amplitudes, x, sigma2, rng, setup.channel)
        H[row] = st.H
    return bits, y, H


def run_detector(name: str, setup: LinkSetup, y, H, sigma2) -> np.ndarray:
    if name == "ml":
        if setup.channel == "awgn":
            return detect_ml(y, H[0])
        return detect_ml(y, H)
    if name == "pda":
        return detect_pda(y, H, sigma2, setup.pda_max_iters, setup.pda_damping).symbols
    raise ValueError(f"unknown detector {name!r}")


def simulate_block(setup, detectors, seed, snr_index, eb_n0_db, start, stop) -> dict[str, np.ndarray]:
    """Per-trial bit-error counts for each detector on shared realisations."""
    sigma2 = noise_variance(eb_n0_db, setup.amplitudes)
    bits, y, H = draw_block(setup, seed, snr_index, start, stop, sigma2)
    out = {}
    for name in detectors:
        est = symbol_indices_to_bits(run_detector(name, setup, y, H, sigma2))
        out[name] = (est != bits).sum(axis=1)
    return out


def ber_point(setup, detector, seed, snr_index, eb_n0_db, max_trials, min_bit_errors,
              block_size=256, workers=1) -> BerPoint:
    """Run blocks in order until the error target or the trial cap is reached."""
    if detector == "ml":
        _check_enum(setup.C.shape[1])
    bounds = [(lo, min(lo + block_size, max_trials)) for lo in range(0, max_trials, block_size)]
    trials = errors = 0

    def job(b):
        lo, hi = b
        return simulate_block(setup, (detector,), seed, snr_index, eb_n0_db, lo, hi)[detector]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for first in range(0, len(bounds), max(1, workers)):
            chunk = bounds[first:first + max(1, workers)]
            for (lo, hi), errs in zip(chunk, pool.map(job, chunk)):
                trials += hi - lo
                errors += int(errs.sum())
                if errors >= min_bit_errors:
                    break
            if errors >= min_bit_errors:
                break
    return BerPoint(float(eb_n0_db), trials, errors, BITS_PER_SYMBOL * setup.C.shape[1])


def ber_sweep(cfg) -> list[BerPoint]:
    """Sweep a SimConfig over its SNR grid."""
    setup = cfg.link_setup()
    return [
        ber_point(setup, cfg.detector, cfg.seed, s, snr, cfg.max_trials, cfg.min_bit_errors,
                  cfg.block_size, cfg.workers)
        for s, snr in enumerate(cfg.snr_grid_db)
    ]


def paired_errors(setup, detectors, seed, eb_n0_db, trials, snr_index=0, block_size=256):
    """Per-trial error counts of several detectors on identical realisations."""
    parts = [
        simulate_block(setup, detectors, seed, snr_index, eb_n0_db, lo, min(lo + block_size, trials))
        for lo in range(0, trials, block_size)
    ]
    return {d: np.concatenate([p[d] for p in parts]) for d in detectors}
