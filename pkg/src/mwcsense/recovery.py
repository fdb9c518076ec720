"""Continuous-to-finite recovery: frame, noise-space removal, joint-sparse MMV.

The infinite set of snapshot equations y[n] = C z[n] shares one support, so
support recovery reduces to a single finite problem: build the frame
Q = Y Y^H, factor out the noise space, and solve V = C U for a row-sparse U
with simultaneous orthogonal matching pursuit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .frontend import SampleMatrix
from .sensing_matrix import SensingMatrix
from .signals import SupportSet

# relative window for treating selection metrics as tied; +-l columns of a
# real-valued measurement set produce bit-equal metrics
_TIE_REL = 1e-12
# alternative openers tried when the greedy ends above the residual floor
_BEAM_WIDTH = 8


@dataclass(frozen=True)
class Frame:
    """Snapshot autocorrelation Q = sum_n y[n] y[n]^H."""

    Q: np.ndarray
    n_snapshots: int

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=np.complex128)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise InvalidArgument(f"Q must be square, got {Q.shape}")
        object.__setattr__(self, "Q", Q)


@dataclass(frozen=True)
class HoleMap:
    """Disjoint unoccupied frequency intervals, sorted ascending."""

    holes: tuple[tuple[float, float], ...]

    def __post_init__(self):
        holes = tuple((float(a), float(b)) for a, b in self.holes)
        for a, b in holes:
            if not a <= b:
                raise InvalidArgument(f"malformed hole interval ({a}, {b})")
        for (_, b0), (a1, _) in zip(holes, holes[1:]):
            if a1 < b0:
                raise InvalidArgument("hole intervals must be disjoint and sorted")
        object.__setattr__(self, "holes", holes)

    def total_width_hz(self) -> float:
        return sum(b - a for a, b in self.holes)


@dataclass(frozen=True)
class RecoveryDiagnostics:
    """Solver metadata carried alongside a detected support."""

    kept_eigenvalues: tuple[float, ...]
    residual_curve: tuple[float, ...]
    n_iterations: int
    wall_time_s: float
    rank_deficient: bool
    whitened: bool
    eps_res_used: float

    def to_dict(self) -> dict:
        # plain python scalars only, so the dict JSON-encodes as is
        return {
            "kept_eigenvalues": [float(v) for v in self.kept_eigenvalues],
            "residual_curve": [float(v) for v in self.residual_curve],
            "n_iterations": int(self.n_iterations),
            "wall_time_s": float(self.wall_time_s),
            "rank_deficient": bool(self.rank_deficient),
            "whitened": bool(self.whitened),
            "eps_res_used": float(self.eps_res_used),
        }


@dataclass(frozen=True)
class MmvSolution:
    """Row-sparse solution of V = A U with its active column set."""

    U: np.ndarray
    support: tuple[int, ...]
    residuals: tuple[float, ...]
    rank_deficient: bool


def build_frame(samples: SampleMatrix | np.ndarray) -> Frame:
    Y = samples.rows if isinstance(samples, SampleMatrix) else np.asarray(samples)
    Y = np.asarray(Y, dtype=np.complex128)
    if Y.ndim != 2:
        raise InvalidArgument("samples must be a 2-d array")
    return Frame(Q=Y @ Y.conj().T, n_snapshots=int(Y.shape[1]))


def decompose(frame: Frame, rel_tol: float = 1e-4) -> np.ndarray:
    """Columns u_k*sqrt(lambda_k) for every eigenvalue above rel_tol*max.

    A zero frame yields a zero-column V, signalling an empty spectrum.
    """
    if not 0 <= rel_tol < 1:
        raise InvalidArgument("rel_tol must lie in [0, 1)", {"rel_tol": rel_tol})
    Q = (frame.Q + frame.Q.conj().T) / 2.0
    lam, U = np.linalg.eigh(Q)
    lam_max = float(lam[-1]) if lam.size else 0.0
    if lam_max <= 0:
        return np.zeros((Q.shape[0], 0), dtype=np.complex128)
    keep = lam > max(rel_tol * lam_max, 0.0)
    if rel_tol == 0.0:
        keep = lam > 0.0
    order = np.argsort(lam[keep])[::-1]
    lam_k = lam[keep][order]
    return U[:, keep][:, order] * np.sqrt(lam_k)


def discarded_energy_fraction(frame: Frame, rel_tol: float = 1e-4) -> float:
    """Fraction of frame energy living below the eigenvalue threshold."""
    Q = (frame.Q + frame.Q.conj().T) / 2.0
    lam = np.linalg.eigvalsh(Q)
    lam = np.clip(lam, 0.0, None)
    total = float(lam.sum())
    if total <= 0:
        return 0.0
    kept = lam[lam > rel_tol * float(lam.max())]
    # rounding can push the ratio a hair past 1 when nothing is discarded
    return max(0.0, 1.0 - float(kept.sum()) / total)


def solve_mmv(
    C: SensingMatrix | np.ndarray,
    V: np.ndarray,
    max_rows: int,
    eps_res: float = 1e-6,
    normalize: bool | str = True,
    tie_rank: np.ndarray | None = None,
    blocks: list[tuple[int, ...]] | None = None,
    slack: int = 0,
    prune: bool = False,
) -> MmvSolution:
    """Simultaneous OMP for the joint-sparse system V = C U.

    Column selection maximizes ||C_j^H R||_2, by default normalized by the
    column norm so envelope decay toward high slice orders does not bias the
    greedy choice (normalize=False restores the plain metric). Ties within a
    1e-12 relative window resolve to the smallest tie_rank (column order when
    no ranking is given).

    normalize="projected" switches to order-recursive selection: candidates
    are scored by the residual energy captured by the component of their
    columns orthogonal to the active set. Correlation against raw columns
    systematically under-ranks weak sources once strong ones are projected
    out; the projected metric stays exact in that regime.

    blocks groups columns that must enter together (e.g. conjugate slice
    pairs for real inputs); a block's score combines its columns' metrics.
    Singleton blocks reproduce plain column-wise selection.

    slack lets the greedy select up to max_rows + slack columns while the
    residual stays above the eps_res floor; prune then backward-eliminates
    blocks whose removal keeps the fit at the floor, and if the fit still
    has unexplained residual the greedy is restarted from each of the top
    first-pick alternatives (the first pick is the only unguarded choice;
    once one true block is active the projected metric is exact on the
    rest). A wrong early pick is repaired instead of crowding out a true
    block. The returned support never exceeds max_rows: without a floor
    fit the pick sequence is cut back to its leading max_rows columns
    (identical to the plain greedy).
    """
    A = C.entries if isinstance(C, SensingMatrix) else np.asarray(C, dtype=np.complex128)
    V = np.asarray(V, dtype=np.complex128)
    if V.ndim != 2 or V.shape[0] != A.shape[0]:
        raise InvalidArgument(
            f"V must have {A.shape[0]} rows, got {V.shape}"
        )
    if normalize not in (True, False, "projected"):
        raise InvalidArgument(
            "normalize must be True, False, or 'projected'", {"normalize": normalize}
        )
    n_cols = A.shape[1]
    if not 0 <= max_rows <= n_cols:
        raise InvalidArgument(
            f"max_rows must lie in [0, {n_cols}]", {"max_rows": max_rows}
        )
    # slack is pointless when nothing may be kept
    max_total = min(max_rows + max(int(slack), 0), n_cols) if max_rows > 0 else 0
    if tie_rank is None:
        tie_rank = np.arange(n_cols)
    tie_rank = np.asarray(tie_rank)

    if blocks is None:
        block_list = [(j,) for j in range(n_cols)]
    else:
        block_list = [tuple(int(j) for j in b) for b in blocks]
        seen: set[int] = set()
        for b in block_list:
            for j in b:
                if not 0 <= j < n_cols or j in seen:
                    raise InvalidArgument(
                        "blocks must partition a subset of distinct column indices",
                        {"column": j},
                    )
                seen.add(j)

    norms = np.linalg.norm(A, axis=0)
    col_weight2 = norms**2 if normalize is True else np.ones(n_cols)
    block_weight = np.array(
        [np.sqrt(col_weight2[list(b)].sum()) for b in block_list]
    )
    block_weight = np.where(block_weight > 0, block_weight, np.inf)
    block_rank = np.array([tie_rank[list(b)].min() for b in block_list])
    sizes = np.array([len(b) for b in block_list])

    v_norm = float(np.linalg.norm(V))
    floor = eps_res * v_norm

    def _block_metric(R, active, eligible):
        if normalize == "projected":
            return _projected_block_metric(A, R, active, block_list, eligible, norms)
        col_corr2 = np.linalg.norm(A.conj().T @ R, axis=1) ** 2
        metric = np.array(
            [
                np.sqrt(col_corr2[list(b)].sum()) if ok else -np.inf
                for b, ok in zip(block_list, eligible)
            ]
        )
        return metric / block_weight

    def _greedy(budget, forced=()):
        active: list[int] = []
        order: list[int] = []
        resids: list[float] = []
        deficient = False
        R = V
        coef = np.zeros((0, V.shape[1]), dtype=np.complex128)
        picked = np.zeros(len(block_list), dtype=bool)
        while v_norm > 0:
            if len(order) < len(forced):
                pick = forced[len(order)]
                if sizes[pick] > budget - len(active):
                    break
            else:
                eligible = ~picked & (sizes <= budget - len(active))
                if not eligible.any():
                    break
                metric = _block_metric(R, active, eligible)
                best = float(metric.max())
                if not best > 0:
                    break
                tied = np.flatnonzero(metric >= best * (1.0 - _TIE_REL))
                pick = int(tied[np.argmin(block_rank[tied])])
            picked[pick] = True
            order.append(pick)
            active.extend(block_list[pick])
            sub = A[:, active]
            coef, _, rank, _ = np.linalg.lstsq(sub, V, rcond=None)
            if rank < len(active):
                deficient = True
            R = V - sub @ coef
            res = float(np.linalg.norm(R))
            resids.append(res)
            if res <= floor:
                break
        return order, active, coef, resids, deficient

    pick_order, active, coef, residuals, rank_deficient = _greedy(max_total)
    at_floor = bool(residuals) and residuals[-1] <= floor
    changed = False

    def _fit(order: list[int]) -> tuple[np.ndarray, float, bool]:
        cols = [j for bi in order for j in block_list[bi]]
        if not cols:
            return np.zeros((0, V.shape[1]), dtype=np.complex128), v_norm, False
        c, _, rank, _ = np.linalg.lstsq(A[:, cols], V, rcond=None)
        r = float(np.linalg.norm(V - A[:, cols] @ c))
        return c, r, bool(rank < len(cols))

    def _floor_prune(order: list[int]) -> bool:
        trimmed = False
        while len(order) > 1:
            best_k, best_res = None, None
            for k in range(len(order)):
                _, r, _ = _fit(order[:k] + order[k + 1 :])
                if r <= floor and (best_res is None or r < best_res):
                    best_k, best_res = k, r
            if best_k is None:
                break
            order.pop(best_k)
            trimmed = True
        return trimmed

    if prune and at_floor and len(pick_order) > 1:
        changed = _floor_prune(pick_order) or changed

    total = sum(sizes[bi] for bi in pick_order)
    if total > max_rows:
        if at_floor:
            # every remaining block is needed for the floor fit; shed the
            # ones whose removal hurts least until the budget is met
            while total > max_rows and pick_order:
                rs = [
                    _fit(pick_order[:k] + pick_order[k + 1 :])[1]
                    for k in range(len(pick_order))
                ]
                k = int(np.argmin(rs))
                total -= sizes[pick_order[k]]
                pick_order.pop(k)
                changed = True
        else:
            keep: list[int] = []
            size = 0
            for bi in pick_order:
                if size + sizes[bi] > max_rows:
                    break
                keep.append(bi)
                size += sizes[bi]
            if len(keep) != len(pick_order):
                pick_order = keep
                changed = True

    if prune and v_norm > 0:
        res_now = _fit(pick_order)[1]
        if res_now > floor:
            # an unexplained residual means the opening picks likely went
            # to bystander blocks. A source straddling the boundary between
            # two adjacent blocks splits its energy so that each true block
            # alone scores below a lucky third, while their union captures
            # it exactly; restart from the strongest adjacent-union and
            # single openers and keep the best completed branch.
            branches: list[tuple[int, ...]] = []
            unions = [
                block_list[k] + block_list[k + 1]
                for k in range(len(block_list) - 1)
            ]
            u_elig = np.array([len(u) <= max_rows for u in unions], dtype=bool)
            if u_elig.any():
                mu = _projected_block_metric(A, V, [], unions, u_elig, norms)
                branches += [
                    (int(k), int(k) + 1)
                    for k in np.argsort(-mu)[:_BEAM_WIDTH]
                    if mu[k] > 0
                ]
            first = _block_metric(V, [], sizes <= max_rows)
            branches += [
                (int(j),) for j in np.argsort(-first)[:_BEAM_WIDTH] if first[j] > 0
            ]
            best_order, best_res = list(pick_order), res_now
            for forced in branches:
                order2, _, _, resids2, _ = _greedy(max_rows, forced=forced)
                r2 = resids2[-1] if resids2 else v_norm
                if r2 < best_res * (1.0 - _TIE_REL):
                    best_order, best_res = order2, r2
                if best_res <= floor:
                    break
            if best_order != pick_order:
                pick_order = best_order
                changed = True
            if best_res <= floor:
                # forced openers may be needless once the rest is in
                changed = _floor_prune(pick_order) or changed

    if changed:
        active = [j for bi in pick_order for j in block_list[bi]]
        coef, res, deficient = _fit(pick_order)
        rank_deficient = rank_deficient or deficient
        residuals.append(res)

    U = np.zeros((n_cols, V.shape[1]), dtype=np.complex128)
    if active:
        U[np.array(active)] = coef
    return MmvSolution(
        U=U,
        support=tuple(sorted(active)),
        residuals=tuple(residuals),
        rank_deficient=rank_deficient,
    )


def _projected_block_metric(A, R, active, block_list, eligible, norms):
    """Residual energy captured by each block's directions orthogonal to the
    active columns (order-recursive selection).  Directions whose projected
    scale falls below 1e-10 of the block's column norms add nothing new and
    are dropped from the basis."""
    if active:
        Q, _ = np.linalg.qr(A[:, active], mode="reduced")
        B = A - Q @ (Q.conj().T @ A)
    else:
        B = A
    metric = np.full(len(block_list), -np.inf)
    for k, (b, ok) in enumerate(zip(block_list, eligible)):
        if not ok:
            continue
        cols = B[:, list(b)]
        scale = float(norms[list(b)].max())
        if scale <= 0:
            metric[k] = 0.0
            continue
        u, s, _ = np.linalg.svd(cols, full_matrices=False)
        basis = u[:, s > 1e-10 * scale]
        if basis.shape[1] == 0:
            metric[k] = 0.0
            continue
        metric[k] = float(np.linalg.norm(basis.conj().T @ R))
    return metric


def _whitener(A: np.ndarray) -> np.ndarray:
    """Inverse symmetric square root of A A^H (pseudo-inverse on rank loss)."""
    G = A @ A.conj().T
    lam, U = np.linalg.eigh((G + G.conj().T) / 2.0)
    lam_max = float(lam[-1]) if lam.size else 0.0
    if lam_max <= 0:
        return np.eye(A.shape[0], dtype=np.complex128)
    keep = lam > 1e-12 * lam_max
    inv_sqrt = np.zeros_like(lam)
    inv_sqrt[keep] = 1.0 / np.sqrt(lam[keep])
    return (U * inv_sqrt) @ U.conj().T


def _slice_tie_rank(L: int) -> np.ndarray:
    # prefer the smallest |l|, and +l before -l
    ls = np.arange(-L, L + 1)
    return np.where(ls > 0, 2 * np.abs(ls) - 1, 2 * np.abs(ls))


def detect_support(
    samples: SampleMatrix,
    C: SensingMatrix,
    sparsity: int,
    rel_tol: float = 1e-4,
    eps_res: float | None = None,
    symmetrize: bool = True,
    whiten: bool = True,
    normalize: bool | str = "projected",
) -> SupportSet:
    """Frame -> noise-space removal -> simultaneous OMP -> slice support."""
    support, _ = detect_support_full(
        samples,
        C,
        sparsity,
        rel_tol=rel_tol,
        eps_res=eps_res,
        symmetrize=symmetrize,
        whiten=whiten,
        normalize=normalize,
    )
    return support


def detect_support_full(
    samples: SampleMatrix,
    C: SensingMatrix,
    sparsity: int,
    rel_tol: float = 1e-4,
    eps_res: float | None = None,
    symmetrize: bool = True,
    whiten: bool = True,
    normalize: bool | str = "projected",
) -> tuple[SupportSet, RecoveryDiagnostics]:
    """detect_support plus solver diagnostics.

    eps_res=None estimates the residual floor from the discarded eigenvalue
    energy (never below 1e-6), matching the noiseless default when the frame
    is clean. Whitening by (C C^H)^{-1/2} makes the detected support exactly
    invariant under consistent row rescaling of C and the measurements.
    """
    if sparsity > C.n_cols:
        raise InvalidArgument(
            f"sparsity {sparsity} exceeds the {C.n_cols} slice columns"
        )
    start = time.perf_counter()
    Y = samples.rows
    A = C.entries
    if whiten:
        W = _whitener(A)
        A = W @ A
        Y = W @ Y

    frame = build_frame(Y)
    V = decompose(frame, rel_tol=rel_tol)
    if eps_res is None:
        eps_eff = float(max(np.sqrt(discarded_energy_fraction(frame, rel_tol)), 1e-6))
    else:
        eps_eff = float(eps_res)

    lam = np.linalg.norm(V, axis=0) ** 2 if V.size else np.array([])
    if V.shape[1] == 0:
        elapsed = time.perf_counter() - start
        return SupportSet(()), RecoveryDiagnostics(
            kept_eigenvalues=(),
            residual_curve=(),
            n_iterations=0,
            wall_time_s=elapsed,
            rank_deficient=False,
            whitened=whiten,
            eps_res_used=eps_eff,
        )

    # real inputs have conjugate-symmetric spectra, so select +-l jointly;
    # this also keeps each greedy step's residual aligned with whole
    # transmissions instead of splitting a pair across iterations
    blocks = None
    if symmetrize:
        blocks = [(C.L,)] + [(C.L - l, C.L + l) for l in range(1, C.L + 1)]
    # slack up to full row rank: a boundary tone splits its rank-1
    # direction across two adjacent pairs, so the first greedy pick can go
    # to a bystander; extra picks reach the residual floor and the prune
    # pass then drops whichever blocks the floor fit does not need
    sol = solve_mmv(
        A,
        V,
        max_rows=sparsity,
        eps_res=eps_eff,
        normalize=normalize,
        tie_rank=_slice_tie_rank(C.L),
        blocks=blocks,
        slack=A.shape[0],
        prune=True,
    )
    ls = [col - C.L for col in sol.support]
    support = SupportSet(tuple(ls))
    if symmetrize:
        support = support.symmetrized()
    elapsed = time.perf_counter() - start
    diag = RecoveryDiagnostics(
        kept_eigenvalues=tuple(float(v) for v in lam),
        residual_curve=sol.residuals,
        n_iterations=len(sol.residuals),
        wall_time_s=elapsed,
        rank_deficient=sol.rank_deficient,
        whitened=whiten,
        eps_res_used=eps_eff,
    )
    return support, diag


def spectrum_holes(
    support: SupportSet | tuple[int, ...],
    f_p: float,
    L: int,
    positive_only: bool = False,
) -> HoleMap:
    """Merged complement of the occupied slices inside the covered band."""
    indices = set(int(i) for i in support)
    for l in indices:
        if not -L <= l <= L:
            raise InvalidArgument(f"support index {l} outside [-{L}, {L}]")
    lo_l = 0 if positive_only else -L
    free_runs: list[tuple[int, int]] = []
    run_start = None
    for l in range(lo_l, L + 1):
        if l not in indices:
            if run_start is None:
                run_start = l
        elif run_start is not None:
            free_runs.append((run_start, l - 1))
            run_start = None
    if run_start is not None:
        free_runs.append((run_start, L))
    holes = []
    for a, b in free_runs:
        lo = a * f_p - f_p / 2.0
        hi = b * f_p + f_p / 2.0
        if positive_only:
            lo = max(lo, 0.0)
        holes.append((lo, hi))
    return HoleMap(holes=tuple(holes))
