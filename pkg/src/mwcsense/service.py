"""JSON-over-HTTP facade for the four-stage sensing flow.

Runs are immutable snapshots held in an in-memory store (optionally
mirrored to a directory, one folder per run with binary sidecars). Stage
execution on a single run is serialized by a per-run lock; distinct runs
proceed in parallel. Every error uses one envelope:

    {"code": ..., "message": ..., "details": {...}}

Compute is stateless: identical stage inputs (scenario seed, config, bank
seed) produce byte-identical artifacts, so digests can be compared across
runs and restarts.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import InvalidArgument, MwcError, ReconstructionIllPosed
from .frontend import (
    MwcConfig,
    SampleMatrix,
    choose_grid_rate,
    expand_channels,
    simulate_frontend,
    validate_config,
)
from .reconstruct import estimate_carriers, reconstruct_signal, recover_slices
from .recovery import detect_support_full, spectrum_holes
from .sensing_matrix import build_matrix
from .serialization import (
    bank_to_json,
    config_from_json,
    holes_to_csv,
    sample_matrix_from_bytes,
    sample_matrix_to_bytes,
    scenario_from_json,
    sha256_hex,
    support_to_list,
)
from .signals import DenseSignal, SignalScenario, SupportSet, synthesize, true_support
from .waveforms import gen_random_bank

_PSD_POINTS = 1024

_STATUS_BY_CODE = {
    "invalid-argument": 422,
    "invalid-scenario": 422,
    "invalid-config": 422,
    "reconstruction-ill-posed": 409,
    "not-found": 404,
    "conflict": 409,
}


class NotFound(MwcError):
    code = "not-found"


class Conflict(MwcError):
    code = "conflict"


@dataclass
class RunRecord:
    """One immutable scenario snapshot plus its staged artifacts."""

    run_id: str
    created_at: float
    scenario: SignalScenario
    lock: threading.Lock = field(default_factory=threading.Lock)
    config: MwcConfig | None = None
    bank_seed: int | None = None
    grid_rate_hz: float | None = None
    samples: SampleMatrix | None = None
    sample_summary: dict | None = None
    recover_summary: dict | None = None
    support: SupportSet | None = None
    reconstruct_summary: dict | None = None
    artifacts: dict[str, bytes] = field(default_factory=dict)

    def stage(self) -> int:
        if self.reconstruct_summary is not None:
            return 4
        if self.recover_summary is not None:
            return 3
        if self.sample_summary is not None:
            return 2
        return 1

    def view(self) -> dict:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "stage": self.stage(),
            "scenario": self.scenario.to_dict(),
            "sample": self.sample_summary,
            "recover": self.recover_summary,
            "reconstruct": self.reconstruct_summary,
            "artifacts": sorted(self.artifacts),
        }


class RunStore:
    """Thread-safe run registry with optional directory persistence."""

    def __init__(self, store_dir: str | Path | None = None):
        self._runs: dict[str, RunRecord] = {}
        self._registry_lock = threading.Lock()
        self._dir = Path(store_dir) if store_dir else None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def create(self, scenario: SignalScenario) -> RunRecord:
        record = RunRecord(
            run_id=uuid.uuid4().hex, created_at=time.time(), scenario=scenario
        )
        with self._registry_lock:
            self._runs[record.run_id] = record
        self.persist(record)
        return record

    def get(self, run_id: str) -> RunRecord:
        with self._registry_lock:
            record = self._runs.get(run_id)
        if record is None:
            raise NotFound(f"run {run_id} does not exist", {"run_id": run_id})
        return record

    def persist(self, record: RunRecord) -> None:
        if self._dir is None:
            return
        run_dir = self._dir / record.run_id
        run_dir.mkdir(exist_ok=True)
        state = record.view()
        state["config"] = record.config.to_dict() if record.config else None
        state["bank_seed"] = record.bank_seed
        state["grid_rate_hz"] = record.grid_rate_hz
        state["support"] = (
            None if record.support is None else support_to_list(record.support)
        )
        (run_dir / "run.json").write_text(json.dumps(state, indent=2) + "\n")
        for name, blob in record.artifacts.items():
            path = run_dir / name
            if not path.exists():
                path.write_bytes(blob)

    def _load(self) -> None:
        for run_json in sorted(self._dir.glob("*/run.json")):
            state = json.loads(run_json.read_text())
            record = RunRecord(
                run_id=state["run_id"],
                created_at=state["created_at"],
                scenario=scenario_from_json(state["scenario"]),
            )
            if state.get("config"):
                record.config = config_from_json(state["config"])
            record.bank_seed = state.get("bank_seed")
            record.grid_rate_hz = state.get("grid_rate_hz")
            record.sample_summary = state.get("sample")
            record.recover_summary = state.get("recover")
            record.reconstruct_summary = state.get("reconstruct")
            if state.get("support") is not None:
                record.support = SupportSet(tuple(state["support"]))
            for name in state.get("artifacts", []):
                path = run_json.parent / name
                if path.exists():
                    record.artifacts[name] = path.read_bytes()
            if "samples.bin" in record.artifacts:
                record.samples = sample_matrix_from_bytes(
                    record.artifacts["samples.bin"]
                )
            self._runs[record.run_id] = record


def _bucket_psd(freqs: np.ndarray, power: np.ndarray, n_points: int) -> dict:
    """Max-pooled PSD so narrow tones survive decimation to plot width."""
    n = freqs.size
    if n <= n_points:
        keep_f, keep_p = freqs, power
    else:
        edges = np.linspace(0, n, n_points + 1, dtype=int)
        keep_f = np.empty(n_points)
        keep_p = np.empty(n_points)
        for i in range(n_points):
            a, b = edges[i], max(edges[i + 1], edges[i] + 1)
            block = power[a:b]
            j = int(np.argmax(block))
            keep_f[i] = freqs[a + j]
            keep_p[i] = block[j]
    ref = float(keep_p.max()) if keep_p.size else 1.0
    ref = ref if ref > 0 else 1.0
    db = 10.0 * np.log10(np.maximum(keep_p / ref, 1e-12))
    return {
        "frequency_hz": [float(f) for f in keep_f],
        "power_db": [float(p) for p in db],
    }


def _input_psd(x: DenseSignal) -> dict:
    spec = np.fft.rfft(np.asarray(x.samples))
    freqs = np.fft.rfftfreq(x.n_samples, 1.0 / x.sample_rate_hz)
    return _bucket_psd(freqs, np.abs(spec) ** 2, _PSD_POINTS)


def _baseband_psd(samples: SampleMatrix) -> dict:
    rows = samples.rows
    spec = np.fft.fft(rows, axis=1)
    power = np.mean(np.abs(spec) ** 2, axis=0)
    freqs = np.fft.fftfreq(rows.shape[1], 1.0 / samples.f_p)
    order = np.argsort(freqs)
    return _bucket_psd(freqs[order], power[order], _PSD_POINTS)


def _band_correlations(
    scenario: SignalScenario, original: DenseSignal, rebuilt: DenseSignal
) -> list[dict]:
    """Pearson correlation of original vs rebuilt inside each band's slot."""
    x = np.asarray(original.samples)
    y = np.asarray(rebuilt.samples)
    n = min(x.size, y.size)
    x, y = x[:n], y[:n]
    X = np.fft.rfft(x)
    Y = np.fft.rfft(y)
    freqs = np.fft.rfftfreq(n, 1.0 / original.sample_rate_hz)
    out: list[dict] = []
    for band in scenario.bands:
        half = max(band.occupied_width_hz / 2.0, 0.5e6)
        mask = (freqs >= band.carrier_hz - half) & (freqs <= band.carrier_hz + half)
        xb = np.fft.irfft(np.where(mask, X, 0.0), n=n)
        yb = np.fft.irfft(np.where(mask, Y, 0.0), n=n)
        denom = float(np.linalg.norm(xb) * np.linalg.norm(yb))
        corr = float(xb @ yb / denom) if denom > 0 else 0.0
        out.append({"carrier_hz": band.carrier_hz, "correlation": corr})
    return out


def _envelope(exc: MwcError) -> JSONResponse:
    status = _STATUS_BY_CODE.get(exc.code, 400)
    return JSONResponse(
        status_code=status,
        content={"code": exc.code, "message": exc.message, "details": exc.details},
    )


def create_app(store_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="mwcsense", version="1")
    # the browser explorer is served from its own origin during development
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = RunStore(store_dir)
    app.state.store = store

    @app.exception_handler(MwcError)
    async def _mwc_error(_request: Request, exc: MwcError):
        return _envelope(exc)

    @app.exception_handler(RequestValidationError)
    async def _request_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "invalid-request",
                "message": "request body failed validation",
                "details": {"errors": exc.errors()},
            },
        )

    @app.post("/v1/runs", status_code=201)
    def create_run(scenario: dict = Body(...)):
        record = store.create(scenario_from_json(scenario))
        return {"run_id": record.run_id, "stage": record.stage()}

    @app.get("/v1/runs/{run_id}")
    def get_run(run_id: str):
        return store.get(run_id).view()

    @app.post("/v1/runs/{run_id}/sample")
    def sample_run(run_id: str, payload: dict = Body(...)):
        record = store.get(run_id)
        if "config" not in payload:
            raise InvalidArgument(
                "payload must carry a 'config' object", {"field": "config"}
            )
        config = config_from_json(payload["config"]).resolved(record.scenario.f_max)
        bank_seed = int(payload.get("bank_seed", 0))
        with record.lock:
            rates = validate_config(config, record.scenario)
            bank = gen_random_bank(
                config.m, config.m_chips, seed=bank_seed, period_s=config.t_p
            )
            grid_rate = choose_grid_rate(config, record.scenario.f_max)
            x = synthesize(record.scenario, grid_rate)
            samples = expand_channels(simulate_frontend(x, bank, config), config)
            matrix = build_matrix(bank, config)
            blob = sample_matrix_to_bytes(samples)

            record.config = config
            record.bank_seed = bank_seed
            record.grid_rate_hz = grid_rate
            record.samples = samples
            record.artifacts["samples.bin"] = blob
            # changing stage-2 inputs invalidates later stages
            record.recover_summary = None
            record.support = None
            record.reconstruct_summary = None
            record.artifacts.pop("holes.csv", None)
            record.artifacts.pop("reconstruction.bin", None)
            record.sample_summary = {
                "rates": rates.to_dict(),
                "basic_config": rates.basic_config_pass,
                "matrix_shape": [matrix.n_rows, matrix.n_cols],
                "n_snapshots": samples.n_snapshots,
                "digests": {
                    "samples": sha256_hex(blob),
                    "sensing_matrix": sha256_hex(matrix.entries),
                    "bank": sha256_hex(bank_to_json(bank).encode()),
                },
                "plots": {
                    "input_psd": _input_psd(x),
                    "baseband_psd": _baseband_psd(samples),
                },
            }
            store.persist(record)
            return {"run_id": run_id, "stage": record.stage(), **record.sample_summary}

    @app.post("/v1/runs/{run_id}/recover")
    def recover_run(run_id: str, payload: dict | None = Body(default=None)):
        record = store.get(run_id)
        payload = payload or {}
        with record.lock:
            if record.samples is None or record.config is None:
                raise Conflict(
                    "sampling stage has not run yet", {"run_id": run_id, "stage": record.stage()}
                )
            config = record.config
            bank = gen_random_bank(
                config.m, config.m_chips, seed=record.bank_seed or 0, period_s=config.t_p
            )
            matrix = build_matrix(bank, config)
            sparsity = payload.get("sparsity")
            if sparsity is None:
                sparsity = min(2 * record.scenario.n_bands_max, matrix.n_cols)
            view = record.samples.truncated(
                min(record.samples.n_snapshots, config.n_snapshots)
            )
            support, diagnostics = detect_support_full(
                view,
                matrix,
                int(sparsity),
                rel_tol=float(payload.get("rel_tol", 1e-4)),
                eps_res=payload.get("eps_res"),
                symmetrize=bool(payload.get("symmetrize", True)),
            )
            holes = spectrum_holes(support, config.f_p, matrix.L)
            holes_pos = spectrum_holes(support, config.f_p, matrix.L, positive_only=True)
            record.support = support
            record.artifacts["holes.csv"] = holes_to_csv(holes_pos).encode()
            record.reconstruct_summary = None
            record.artifacts.pop("reconstruction.bin", None)
            record.recover_summary = {
                "support": support_to_list(support),
                "true_support": sorted(
                    true_support(record.scenario, config.f_p, matrix.L)
                ),
                "holes_hz": [[a, b] for a, b in holes.holes],
                "holes_positive_hz": [[a, b] for a, b in holes_pos.holes],
                "sparsity": int(sparsity),
                "diagnostics": diagnostics.to_dict(),
            }
            store.persist(record)
            return {"run_id": run_id, "stage": record.stage(), **record.recover_summary}

    @app.post("/v1/runs/{run_id}/reconstruct")
    def reconstruct_run(run_id: str):
        record = store.get(run_id)
        with record.lock:
            if record.reconstruct_summary is not None:
                return {
                    "run_id": run_id,
                    "stage": record.stage(),
                    "cached": True,
                    **record.reconstruct_summary,
                }
            if record.support is None or record.recover_summary is None:
                raise Conflict(
                    "recovery stage has not run yet", {"run_id": run_id, "stage": record.stage()}
                )
            config = record.config
            bank = gen_random_bank(
                config.m, config.m_chips, seed=record.bank_seed or 0, period_s=config.t_p
            )
            matrix = build_matrix(bank, config)
            support = record.support
            grid_rate = record.grid_rate_hz or choose_grid_rate(
                config, record.scenario.f_max
            )
            original = synthesize(record.scenario, grid_rate)

            carriers: tuple[float, ...] = ()
            if len(support):
                slices = recover_slices(record.samples, matrix, support)
                carriers = estimate_carriers(slices, support, config.f_p)
                n = len(next(iter(slices.values())))
                rebuilt = reconstruct_signal(
                    slices, support, config.f_p, grid_rate, n / config.f_p
                )
            else:
                rebuilt = DenseSignal(
                    sample_rate_hz=grid_rate, samples=np.zeros(original.n_samples)
                )
            # raw little-endian float64; Nyquist-scale rates overflow a WAV
            # header, so the rate travels in the summary instead
            blob = np.ascontiguousarray(rebuilt.samples, dtype="<f8").tobytes()
            record.artifacts["reconstruction.bin"] = blob
            record.reconstruct_summary = {
                "carriers_hz": [float(c) for c in carriers],
                "band_correlations": _band_correlations(
                    record.scenario, original, rebuilt
                ),
                "rms": float(np.sqrt(np.mean(np.square(rebuilt.samples)))),
                "sample_rate_hz": rebuilt.sample_rate_hz,
                "duration_s": rebuilt.n_samples / rebuilt.sample_rate_hz,
                "digests": {"reconstruction": sha256_hex(blob)},
                "artifacts": {
                    "waveform": f"/v1/runs/{run_id}/artifacts/reconstruction.bin"
                },
            }
            store.persist(record)
            return {
                "run_id": run_id,
                "stage": record.stage(),
                "cached": False,
                **record.reconstruct_summary,
            }

    @app.get("/v1/runs/{run_id}/artifacts/{name}")
    def get_artifact(run_id: str, name: str):
        record = store.get(run_id)
        blob = record.artifacts.get(name)
        if blob is None:
            raise NotFound(
                f"run {run_id} has no artifact {name!r}",
                {"run_id": run_id, "artifact": name, "available": sorted(record.artifacts)},
            )
        media = "text/csv" if name.endswith(".csv") else "application/octet-stream"
        return Response(content=blob, media_type=media)

    return app
