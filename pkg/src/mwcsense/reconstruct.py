"""Band reconstruction and carrier estimation on a detected support.

Once the support S is known the system y[n] = C_S z_S[n] is overdetermined,
so the slices come back through a per-snapshot least-squares solve, the
dense waveform through frequency-domain upsampling and remodulation, and
carriers through a stitched-group spectral estimator.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, ReconstructionIllPosed
from .frontend import SampleMatrix
from .recovery import HoleMap, RecoveryDiagnostics
from .sensing_matrix import SensingMatrix
from .signals import DenseSignal, SupportSet

logger = logging.getLogger(__name__)

# hybrid carrier rule: quadratic peak interpolation when the group power is
# concentrated around the peak, power centroid otherwise (wide-deviation FM
# peaks at its modulation turning points, not at the carrier)
_PEAK_CONCENTRATION = 0.9
_MIN_PAD_BINS = 1 << 14


@dataclass(frozen=True)
class SliceGroup:
    """A run of contiguous support slices stitched into one complex baseband."""

    slice_indices: tuple[int, ...]
    baseband: np.ndarray
    sample_rate_hz: float
    f_center_hz: float
    f_lo_hz: float
    f_hi_hz: float


@dataclass(frozen=True)
class RecoveryResult:
    """Everything the sensing pass produces for one run."""

    support: SupportSet
    holes: HoleMap
    slices: dict
    carriers_hz: tuple[float, ...]
    diagnostics: RecoveryDiagnostics


def recover_slices(
    samples: SampleMatrix, C: SensingMatrix, support: SupportSet
) -> dict:
    """Least-squares slice sequences on the support; map l -> z_l[n]."""
    ls = sorted(int(l) for l in support)
    if not ls:
        raise InvalidArgument("support is empty; nothing to recover")
    if len(ls) > C.n_rows:
        raise ReconstructionIllPosed(
            f"support of size {len(ls)} exceeds the {C.n_rows} virtual channels",
            {"support": ls},
        )
    cols = [C.col_of(l) for l in ls]
    sub = C.entries[:, cols]
    rank = np.linalg.matrix_rank(sub)
    if rank < len(ls):
        raise ReconstructionIllPosed(
            "support columns are rank deficient",
            {"support": ls, "rank": int(rank)},
        )
    z, _, _, _ = np.linalg.lstsq(sub, samples.rows, rcond=None)
    return {l: z[i] for i, l in enumerate(ls)}


def reconstruct_signal(
    slices: dict,
    support: SupportSet,
    f_p: float,
    grid_rate: float,
    duration_s: float,
) -> DenseSignal:
    """Upsample each slice (frequency-domain zero insertion), remodulate to
    l*f_p, sum, and take the real part."""
    ls = sorted(int(l) for l in support)
    if set(ls) != set(int(l) for l in slices):
        raise InvalidArgument("slices' keys must equal the support indices")
    n_out = int(round(grid_rate * duration_s))
    if n_out < 1:
        raise InvalidArgument("empty output grid", {"n_out": n_out})
    if not ls:
        return DenseSignal(sample_rate_hz=float(grid_rate), samples=np.zeros(n_out))
    lengths = {len(np.asarray(slices[l])) for l in ls}
    if len(lengths) != 1:
        raise InvalidArgument("all slice sequences must share one length")
    n = lengths.pop()
    if abs(n - f_p * duration_s) > 1e-6 * max(n, 1):
        raise InvalidArgument(
            "slice length does not match duration at rate f_p",
            {"n": n, "expected": f_p * duration_s},
        )
    l_max = max(abs(l) for l in ls)
    if (l_max + 0.5) * f_p > grid_rate / 2.0 * (1 + 1e-9):
        raise InvalidArgument(
            "grid_rate too low to hold the outermost support slice",
            {"grid_rate": grid_rate, "l_max": l_max},
        )
    ks = np.arange(n)
    ks_signed = ((ks + n // 2) % n) - n // 2
    dense = np.zeros(n_out, dtype=np.complex128)
    scale = n_out / n
    for l in ls:
        Z = np.fft.fft(np.asarray(slices[l], dtype=np.complex128))
        np.add.at(dense, (l * n + ks_signed) % n_out, Z * scale)
    return DenseSignal(
        sample_rate_hz=float(grid_rate), samples=np.fft.ifft(dense).real
    )


def positive_groups(support: SupportSet) -> list[tuple[int, ...]]:
    """Runs of contiguous support indices on the non-negative side."""
    ls = sorted(l for l in support if l >= 0)
    groups: list[list[int]] = []
    for l in ls:
        if groups and l == groups[-1][-1] + 1:
            groups[-1].append(l)
        else:
            groups.append([l])
    return [tuple(g) for g in groups]


def group_baseband(slices: dict, group: tuple[int, ...], f_p: float) -> SliceGroup:
    """Stitch a slice run into one complex baseband at rate W*f_p.

    Per-slice spectra are concatenated in frequency order, so the stitched
    sequence is the group's content demodulated to the group center. The
    stitching is coherent: a line near a shared slice boundary lands at its
    true offset instead of wrapping inside a single slice.
    """
    arrays = [np.asarray(slices[l], dtype=np.complex128) for l in group]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise InvalidArgument("all slice sequences must share one length")
    stitched = np.concatenate([np.fft.fftshift(np.fft.fft(a)) for a in arrays])
    baseband = np.fft.ifft(np.fft.ifftshift(stitched)) * len(group)
    w = len(group)
    f_lo = group[0] * f_p - f_p / 2.0
    f_hi = group[-1] * f_p + f_p / 2.0
    return SliceGroup(
        slice_indices=tuple(group),
        baseband=baseband,
        sample_rate_hz=w * f_p,
        f_center_hz=(f_lo + f_hi) / 2.0,
        f_lo_hz=f_lo,
        f_hi_hz=f_hi,
    )


def _estimate_group_carrier(group: SliceGroup) -> float | None:
    x = group.baseband
    if not np.any(np.abs(x) > 0):
        return None
    n0 = len(x)
    window = np.hanning(n0)
    nfft = _MIN_PAD_BINS
    while nfft < n0:
        nfft *= 2
    spectrum = np.fft.fft(x * window, nfft)
    power = np.abs(spectrum) ** 2
    freqs = np.fft.fftfreq(nfft, 1.0 / group.sample_rate_hz) + group.f_center_hz

    k0 = int(np.argmax(power))
    span = group.f_hi_hz - group.f_lo_hz
    w_half = max(8.0 * group.sample_rate_hz / n0, 0.01 * span)
    near = np.abs(freqs - freqs[k0]) <= w_half
    total = float(power.sum())
    if total <= 0:
        return None
    concentration = float(power[near].sum()) / total

    if concentration >= _PEAK_CONCENTRATION:
        # quadratic interpolation on log power around the peak bin
        km = (k0 - 1) % nfft
        kp = (k0 + 1) % nfft
        logs = np.log(power[[km, k0, kp]] + 1e-300)
        denom = logs[0] - 2.0 * logs[1] + logs[2]
        delta = 0.0 if denom == 0 else 0.5 * (logs[0] - logs[2]) / denom
        delta = float(np.clip(delta, -0.5, 0.5))
        return float(freqs[k0] + delta * group.sample_rate_hz / nfft)
    return float(np.sum(freqs * power) / total)


def estimate_carriers(slices: dict, support: SupportSet, f_p: float) -> tuple[float, ...]:
    """One carrier estimate per contiguous positive-side slice group."""
    if not len(support):
        raise InvalidArgument("support is empty; no carriers to estimate")
    carriers = []
    for group_ls in positive_groups(support):
        group = group_baseband(slices, group_ls, f_p)
        est = _estimate_group_carrier(group)
        if est is None:
            logger.warning("slice group %s has no energy; skipped", group_ls)
            continue
        carriers.append(est)
    return tuple(carriers)
