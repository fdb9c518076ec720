"""Wire formats: JSON codecs, binary matrix containers, CSV, WAV, digests.

The binary container is one 64-byte little-endian header followed by
row-major interleaved re/im float64 payload:

    magic "MWCS" | version u32 | n_rows u32 | n_cols u32 | m u32 | q u32
    | extra0 i64 | extra1 i64 | f_p f64 | tag 16 bytes (ascii, zero padded)

SampleMatrix leaves extra0/extra1 at 0; SensingMatrix stores L and l_cut
there. Digests are sha256 over exactly these bytes, so equal artifacts are
byte-equal and vice versa.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import struct
import wave
from importlib import resources

import numpy as np

from .errors import InvalidArgument
from .frontend import MwcConfig, SampleMatrix
from .recovery import HoleMap
from .reconstruct import RecoveryResult
from .sensing_matrix import SensingMatrix
from .signals import SignalScenario, SupportSet
from .waveforms import ChipPattern, WaveformBank

_MAGIC = b"MWCS"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIIIqqd16s")


# ---------------------------------------------------------------- JSON codecs

def scenario_to_json(scenario: SignalScenario) -> str:
    return json.dumps(scenario.to_dict(), indent=2, sort_keys=True)


def scenario_from_json(text: str | bytes | dict) -> SignalScenario:
    d = text if isinstance(text, dict) else json.loads(text)
    return SignalScenario.from_dict(d)


def config_to_json(config: MwcConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True)


def config_from_json(text: str | bytes | dict) -> MwcConfig:
    d = text if isinstance(text, dict) else json.loads(text)
    return MwcConfig.from_dict(d)


def bank_to_dict(bank: WaveformBank) -> dict:
    return {
        "period_s": bank.period_s,
        "derivation": bank.derivation,
        "taps": None if bank.taps is None else list(bank.taps),
        "seed": bank.seed,
        "chips": [[int(c) for c in p.chips] for p in bank.patterns],
    }


def bank_from_dict(d: dict) -> WaveformBank:
    try:
        period = float(d["period_s"])
        patterns = tuple(
            ChipPattern(chips=np.asarray(row, dtype=np.float64), period_s=period)
            for row in d["chips"]
        )
        return WaveformBank(
            patterns=patterns,
            derivation=d.get("derivation", "independent_random"),
            taps=None if d.get("taps") is None else tuple(int(t) for t in d["taps"]),
            seed=d.get("seed"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgument(f"malformed bank: {exc}") from exc


def bank_to_json(bank: WaveformBank) -> str:
    return json.dumps(bank_to_dict(bank), indent=2, sort_keys=True)


def bank_from_json(text: str | bytes | dict) -> WaveformBank:
    d = text if isinstance(text, dict) else json.loads(text)
    return bank_from_dict(d)


# ------------------------------------------------------------ binary container

def _pack(arr: np.ndarray, f_p: float, m: int, q: int, extra0: int, extra1: int, tag: str) -> bytes:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    header = _HEADER.pack(
        _MAGIC,
        _VERSION,
        arr.shape[0],
        arr.shape[1],
        m,
        q,
        extra0,
        extra1,
        float(f_p),
        tag.encode("ascii")[:16].ljust(16, b"\0"),
    )
    return header + arr.view(np.float64).tobytes()


def _unpack(blob: bytes) -> tuple[np.ndarray, dict]:
    if len(blob) < _HEADER.size:
        raise InvalidArgument("binary blob shorter than the header")
    magic, version, n_rows, n_cols, m, q, extra0, extra1, f_p, tag = _HEADER.unpack(
        blob[: _HEADER.size]
    )
    if magic != _MAGIC:
        raise InvalidArgument("bad magic; not a matrix container")
    if version != _VERSION:
        raise InvalidArgument(f"unsupported container version {version}")
    expected = n_rows * n_cols * 16
    payload = blob[_HEADER.size :]
    if len(payload) != expected:
        raise InvalidArgument(
            f"payload size {len(payload)} != expected {expected}"
        )
    flat = np.frombuffer(payload, dtype=np.float64).reshape(n_rows * n_cols, 2)
    arr = (flat[:, 0] + 1j * flat[:, 1]).reshape(n_rows, n_cols)
    meta = {
        "n_rows": n_rows,
        "n_cols": n_cols,
        "m": m,
        "q": q,
        "extra0": extra0,
        "extra1": extra1,
        "f_p": f_p,
        "tag": tag.rstrip(b"\0").decode("ascii"),
    }
    return arr, meta


def sample_matrix_to_bytes(sm: SampleMatrix) -> bytes:
    return _pack(sm.rows, sm.f_p, sm.m, sm.q, 0, 0, sm.ordering)


def sample_matrix_from_bytes(blob: bytes) -> SampleMatrix:
    arr, meta = _unpack(blob)
    return SampleMatrix(
        rows=arr, f_p=meta["f_p"], m=meta["m"], q=meta["q"], ordering=meta["tag"]
    )


def sensing_matrix_to_bytes(C: SensingMatrix) -> bytes:
    return _pack(C.entries, C.f_p, C.m, C.q, C.L, C.l_cut, "sensing-matrix")


def sensing_matrix_from_bytes(blob: bytes) -> SensingMatrix:
    arr, meta = _unpack(blob)
    return SensingMatrix(
        entries=arr,
        m=meta["m"],
        q=meta["q"],
        L=meta["extra0"],
        f_p=meta["f_p"],
        l_cut=meta["extra1"],
    )


def matrix_metadata(C: SensingMatrix, bank: WaveformBank | None = None) -> dict:
    meta = {
        "m": C.m,
        "q": C.q,
        "L": C.L,
        "f_p": C.f_p,
        "l_cut": C.l_cut,
        "shape": [C.n_rows, C.n_cols],
        "digest": sha256_hex(sensing_matrix_to_bytes(C)),
    }
    if bank is not None:
        meta["bank"] = bank_to_dict(bank)
    return meta


# ------------------------------------------------------------------- CSV / WAV

def holes_to_csv(holes: HoleMap) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["start_hz", "end_hz"])
    for a, b in holes.holes:
        writer.writerow([f"{a:.6f}", f"{b:.6f}"])
    return buf.getvalue()


def signal_to_wav_bytes(
    samples: np.ndarray, sample_rate_hz: float, peak: float = 0.9
) -> bytes:
    """16-bit mono WAV for auditioning demodulated envelopes."""
    rate = int(round(sample_rate_hz))
    if not 0 < rate < 2**32:
        raise InvalidArgument(
            "sample rate does not fit a WAV header", {"rate": sample_rate_hz}
        )
    x = np.asarray(samples, dtype=np.float64)
    top = float(np.max(np.abs(x))) if x.size else 0.0
    if top > 0:
        x = x / top * peak
    pcm = np.clip(np.round(x * 32767.0), -32768, 32767).astype("<i2")
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(pcm.tobytes())
    return buf.getvalue()


# ------------------------------------------------------------ recovery results

def support_to_list(support: SupportSet) -> list[int]:
    return list(support.indices)


def recovery_to_dict(result: RecoveryResult) -> dict:
    """JSON view of a recovery pass; slice payloads travel separately as binary."""
    return {
        "support": support_to_list(result.support),
        "holes": [[a, b] for a, b in result.holes.holes],
        "carriers_hz": list(result.carriers_hz),
        "diagnostics": result.diagnostics.to_dict(),
    }


# ----------------------------------------------------------------- digests etc

def sha256_hex(blob: bytes | np.ndarray) -> str:
    if isinstance(blob, np.ndarray):
        blob = np.ascontiguousarray(blob).tobytes()
    return hashlib.sha256(blob).hexdigest()


def load_report_schema() -> dict:
    text = resources.files("mwcsense.schemas").joinpath("report.schema.json").read_text()
    return json.loads(text)


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, load_report_schema())
