"""The measurement matrix C relating virtual-channel samples to slices.

Under the FFT sign convention used throughout (slice l is the band around
+l*f_p demodulated by exp(-2j*pi*l*f_p*t)), virtual channel (i, r) measures

    y_{i,r}[n] = sum_m c_{i, r-m} z_m[n]

so row (i, r), column m holds the channel's Fourier coefficient at order
r - m. Entries whose order exceeds the mixer's rendered harmonic budget
l_cut are zero: the simulated waveform genuinely lacks those harmonics, and
matrix and mixer must agree on the budget for the model to be exact.

For even q the virtual row at r = -q/2 carries the deliberate fold of the
two outermost half-slices and holds the sum of the +q/2 and -q/2 shifted
coefficient rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidConfig
from .frontend import MwcConfig
from .waveforms import WaveformBank, fourier_coeffs_at

_REL_TOL = 1e-9


@dataclass(frozen=True)
class SensingMatrix:
    """Complex matrix of shape (m*q, 2L+1); column j maps to slice l = j - L."""

    entries: np.ndarray
    m: int
    q: int
    L: int
    f_p: float
    l_cut: int

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        expected = (self.m * self.q, 2 * self.L + 1)
        if entries.shape != expected:
            raise InvalidArgument(
                f"entries shape {entries.shape} != {expected}"
            )
        object.__setattr__(self, "entries", entries)

    @property
    def n_rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.entries.shape[1])

    def col_of(self, l: int) -> int:
        if not -self.L <= l <= self.L:
            raise InvalidArgument(f"slice index {l} outside [-{self.L}, {self.L}]")
        return int(l + self.L)

    def l_of(self, col: int) -> int:
        if not 0 <= col < self.n_cols:
            raise InvalidArgument(f"column {col} outside [0, {self.n_cols})")
        return int(col - self.L)

    def column_frequency(self, l: int) -> tuple[float, float]:
        self.col_of(l)
        return column_frequency(l, self.f_p)


def column_frequency(l: int, f_p: float, L: int | None = None) -> tuple[float, float]:
    """Closed frequency interval of slice l: [l*f_p - f_p/2, l*f_p + f_p/2]."""
    if not f_p > 0:
        raise InvalidArgument("f_p must be positive", {"f_p": f_p})
    if L is not None and not -L <= l <= L:
        raise InvalidArgument(f"slice index {l} outside [-{L}, {L}]")
    return (l * f_p - f_p / 2.0, l * f_p + f_p / 2.0)


def _gated_coeffs(pattern, orders: np.ndarray, l_cut: int) -> np.ndarray:
    c = fourier_coeffs_at(pattern, orders)
    return np.where(np.abs(orders) <= l_cut, c, 0.0)


def build_matrix(bank: WaveformBank, config: MwcConfig) -> SensingMatrix:
    """Assemble C row by row from the closed-form waveform coefficients."""
    if bank.m != config.m:
        raise InvalidArgument(f"bank has {bank.m} patterns for m={config.m} channels")
    if bank.m_chips != config.m_chips:
        raise InvalidArgument(
            f"bank chip count {bank.m_chips} != config m_chips {config.m_chips}"
        )
    if abs(bank.period_s - config.t_p) > _REL_TOL * config.t_p:
        raise InvalidArgument(
            "bank period does not match 1/f_p",
            {"period_s": bank.period_s, "t_p": config.t_p},
        )
    if config.L is None:
        raise InvalidConfig("L is unresolved; call config.resolved(f_max) first")
    L = config.L
    l_cut = config.effective_l_cut()
    slice_idx = np.arange(-L, L + 1)
    half = config.q // 2

    entries = np.empty((config.n_rows, 2 * L + 1), dtype=np.complex128)
    for i, pattern in enumerate(bank.patterns):
        for r_idx, r in enumerate(config.shifts):
            row = _gated_coeffs(pattern, r - slice_idx, l_cut)
            if config.q % 2 == 0 and r == -half:
                # folded edge row: +q/2 and -q/2 shifts land on the same
                # virtual channel after decimation
                row = row + _gated_coeffs(pattern, half - slice_idx, l_cut)
            entries[i * config.q + r_idx] = row
    return SensingMatrix(
        entries=entries, m=config.m, q=config.q, L=L, f_p=config.f_p, l_cut=l_cut
    )


@dataclass(frozen=True)
class ConditioningReport:
    """Cheap health metrics for a sensing matrix."""

    mutual_coherence: float
    has_duplicate_columns: bool
    rank: int
    min_singular_sampled: float
    submatrix_cols: int
    n_submatrices: int

    def to_dict(self) -> dict:
        return {
            "mutual_coherence": self.mutual_coherence,
            "has_duplicate_columns": self.has_duplicate_columns,
            "rank": self.rank,
            "min_singular_sampled": self.min_singular_sampled,
            "submatrix_cols": self.submatrix_cols,
            "n_submatrices": self.n_submatrices,
        }


def conditioning_report(
    C: SensingMatrix | np.ndarray,
    submatrix_cols: int | None = None,
    n_submatrices: int = 64,
    seed: int = 0,
) -> ConditioningReport:
    """Column coherence, rank, and the smallest singular value seen over
    random column subsets of the size recovery actually inverts."""
    A = C.entries if isinstance(C, SensingMatrix) else np.asarray(C, dtype=np.complex128)
    n_rows, n_cols = A.shape
    norms = np.linalg.norm(A, axis=0)
    nonzero = norms > 0
    U = A[:, nonzero] / norms[nonzero]
    gram = np.abs(U.conj().T @ U)
    np.fill_diagonal(gram, 0.0)
    coherence = float(gram.max()) if gram.size else 0.0

    if submatrix_cols is None:
        submatrix_cols = min(n_rows, n_cols)
    submatrix_cols = min(submatrix_cols, n_cols)
    rng = np.random.default_rng(seed)
    smin = np.inf
    for _ in range(n_submatrices):
        cols = rng.choice(n_cols, size=submatrix_cols, replace=False)
        s = np.linalg.svd(A[:, cols], compute_uv=False)
        smin = min(smin, float(s[-1]) if s.size else 0.0)
    return ConditioningReport(
        mutual_coherence=coherence,
        has_duplicate_columns=coherence >= 1.0 - 1e-10,
        rank=int(np.linalg.matrix_rank(A)),
        min_singular_sampled=float(smin),
        submatrix_cols=int(submatrix_cols),
        n_submatrices=int(n_submatrices),
    )
