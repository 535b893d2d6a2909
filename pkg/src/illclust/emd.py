"""Empirical Mode Decomposition by envelope sifting.

Each pass subtracts the mean of the natural-cubic-spline envelopes through
the maxima and minima until the Cauchy-type criterion
sum((h_prev - h_new)^2) / sum(h_prev^2) drops below the threshold and the
candidate satisfies the mode condition (extrema and zero-crossing counts
within one of each other).  Envelope ends are stabilized by mirroring the
two nearest extrema across each boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import SiftingDivergence, SignalTooShort
from .matrix import DataMatrix

SD_THRESHOLD = 0.2   # sift stopping threshold (Cauchy criterion)
MAX_SIFTS = 50       # hard cap per mode
MIN_LENGTH = 8
MIRROR_COUNT = 2     # extrema mirrored across each boundary
RESIDUAL_FLOOR = 1e-12   # residual range below this fraction of the input is noise


@dataclass(frozen=True)
class EmdDecomposition:
    """Ordered modes (fastest first) plus the leftover residual."""

    imfs: tuple[np.ndarray, ...]
    residual: np.ndarray
    source_length: int

    def reconstruct(self) -> np.ndarray:
        out = self.residual.copy()
        for imf in self.imfs:
            out += imf
        return out


def _extrema(x: np.ndarray):
    """Interior maxima and minima positions (plateau midpoints), with values.

    Returns (max_pos, max_val, min_pos, min_val); positions are floats so a
    plateau can peak between samples.
    """
    d = np.diff(x)
    nz = np.flatnonzero(d != 0.0)
    max_pos, max_val, min_pos, min_val = [], [], [], []
    if nz.size >= 2:
        signs = np.sign(d[nz])
        flips = np.flatnonzero(signs[1:] != signs[:-1])
        for f in flips:
            left = nz[f]
            right = nz[f + 1]
            pos = (left + 1 + right) / 2.0   # midpoint of the flat stretch
            val = x[int(pos)]
            if signs[f] > 0:
                max_pos.append(pos)
                max_val.append(val)
            else:
                min_pos.append(pos)
                min_val.append(val)
    return (
        np.array(max_pos),
        np.array(max_val),
        np.array(min_pos),
        np.array(min_val),
    )


def _count_extrema(x: np.ndarray) -> int:
    max_pos, _, min_pos, _ = _extrema(x)
    return max_pos.size + min_pos.size


def _count_zero_crossings(x: np.ndarray) -> int:
    signs = np.sign(x)
    signs = signs[signs != 0.0]
    if signs.size < 2:
        return 0
    return int(np.sum(signs[1:] != signs[:-1]))


def _is_mode(x: np.ndarray) -> bool:
    return abs(_count_extrema(x) - _count_zero_crossings(x)) <= 1


def _envelope(pos: np.ndarray, val: np.ndarray, length: int) -> np.ndarray:
    """Natural cubic spline through the extrema, mirrored across both ends."""
    k = min(MIRROR_COUNT, pos.size)
    left_pos = (-pos[:k])[::-1]
    left_val = (val[:k])[::-1]
    right_pos = (2.0 * (length - 1) - pos[-k:])[::-1]
    right_val = (val[-k:])[::-1]
    xs = np.concatenate([left_pos, pos, right_pos])
    ys = np.concatenate([left_val, val, right_val])
    spline = CubicSpline(xs, ys, bc_type="natural")
    return spline(np.arange(length, dtype=float))


def _sift_mode(signal: np.ndarray, sd_threshold: float) -> np.ndarray:
    """Extract one mode from the signal, or raise SiftingDivergence."""
    h = signal.copy()
    length = h.size
    for _ in range(MAX_SIFTS):
        max_pos, max_val, min_pos, min_val = _extrema(h)
        if max_pos.size < 1 or min_pos.size < 1:
            return h  # lost its oscillation; trivially a mode
        upper = _envelope(max_pos, max_val, length)
        lower = _envelope(min_pos, min_val, length)
        mean = (upper + lower) / 2.0
        h_new = h - mean
        denom = float(np.sum(h**2))
        sd = float(np.sum(mean**2)) / denom if denom > 0 else 0.0
        h = h_new
        if sd < sd_threshold and _is_mode(h):
            return h
    if _is_mode(h):
        return h
    raise SiftingDivergence(
        f"mode criterion unmet after {MAX_SIFTS} sifts"
    )


def decompose(
    signal: np.ndarray,
    max_imfs: int = 10,
    sd_threshold: float = SD_THRESHOLD,
) -> EmdDecomposition:
    """Split a signal into at most max_imfs modes plus a residual.

    Stops early once the residual has fewer than two interior extrema.
    """
    signal = np.asarray(signal, dtype=float).ravel()
    if signal.size < MIN_LENGTH:
        raise SignalTooShort(
            f"need at least {MIN_LENGTH} samples, got {signal.size}"
        )
    if not np.all(np.isfinite(signal)):
        raise ValueError("signal contains NaN or Inf")
    if max_imfs < 1:
        raise ValueError("max_imfs must be positive")
    residual = signal.copy()
    scale = np.ptp(signal)
    imfs = []
    while len(imfs) < max_imfs:
        if _count_extrema(residual) < 2:
            break
        if np.ptp(residual) <= RESIDUAL_FLOOR * scale:
            break  # leftover is floating-point noise, not a mode
        imf = _sift_mode(residual, sd_threshold)
        imfs.append(imf)
        residual = residual - imf
    return EmdDecomposition(
        imfs=tuple(imfs), residual=residual, source_length=signal.size
    )


@dataclass(frozen=True)
class FirstImfMatrix:
    """First mode of every row; rows that had no mode pass through unchanged."""

    matrix: DataMatrix
    passthrough_rows: tuple[int, ...]


def first_imf_matrix(m: DataMatrix, max_imfs: int = 10) -> FirstImfMatrix:
    """Replace each row with the first mode of its decomposition.

    Only the first mode is ever extracted: it does not depend on how many
    further modes a full decomposition would produce, so stopping there is
    output-identical, several times faster, and immune to sift divergence
    in the smoother late modes.  Rows with no mode at all (fewer than two
    interior extrema) are kept as-is and listed in passthrough_rows.
    """
    if max_imfs < 1:
        raise ValueError("max_imfs must be positive")
    out = np.empty_like(m.values)
    passthrough = []
    for i in range(m.n_vars):
        dec = decompose(m.values[i], max_imfs=1)
        if dec.imfs:
            out[i] = dec.imfs[0]
        else:
            out[i] = m.values[i]
            passthrough.append(i)
    return FirstImfMatrix(
        matrix=DataMatrix(out, row_labels=m.row_labels),
        passthrough_rows=tuple(passthrough),
    )
