"""Wire formats: JSON documents, binary matrices, WAV, digests, schema."""

import io
import json
import wave

import numpy as np
import pytest

from mwcsense import (
    InvalidArgument,
    InvalidScenario,
    SampleMatrix,
    SupportSet,
    demo_scenario,
    gen_random_bank,
    prototype_config,
    spectrum_holes,
)
from mwcsense.serialization import (
    bank_from_json,
    bank_to_json,
    config_from_json,
    config_to_json,
    holes_to_csv,
    matrix_metadata,
    sample_matrix_from_bytes,
    sample_matrix_to_bytes,
    scenario_from_json,
    scenario_to_json,
    sensing_matrix_from_bytes,
    sensing_matrix_to_bytes,
    sha256_hex,
    signal_to_wav_bytes,
    support_to_list,
    validate_report,
)


def test_scenario_round_trip():
    scen = demo_scenario()
    back = scenario_from_json(scenario_to_json(scen))
    assert back.f_max == scen.f_max
    assert back.n_bands_max == scen.n_bands_max
    assert len(back.bands) == len(scen.bands)
    for a, b in zip(back.bands, scen.bands):
        assert a.carrier_hz == b.carrier_hz
        assert a.modulation == b.modulation
        assert a.mod_params == b.mod_params


def test_scenario_rejects_malformed_band():
    doc = json.loads(scenario_to_json(demo_scenario()))
    doc["bands"][0]["carrier_hz"] = "not-a-number"
    with pytest.raises(InvalidScenario):
        scenario_from_json(doc)


def test_config_round_trip():
    cfg = prototype_config()
    back = config_from_json(config_to_json(cfg))
    assert (back.m, back.q, back.f_p, back.m_chips) == (
        cfg.m,
        cfg.q,
        cfg.f_p,
        cfg.m_chips,
    )
    assert back.adc_rate_hz == cfg.adc_rate_hz


def test_bank_round_trip():
    bank = gen_random_bank(3, 24, seed=5, period_s=5e-8)
    back = bank_from_json(bank_to_json(bank))
    assert back.derivation == bank.derivation
    assert back.seed == bank.seed
    for a, b in zip(back.patterns, bank.patterns):
        assert np.array_equal(a.chips, b.chips)
        assert a.period_s == b.period_s


def test_sample_matrix_round_trip():
    rng = np.random.default_rng(0)
    rows = rng.standard_normal((6, 17)) + 1j * rng.standard_normal((6, 17))
    sm = SampleMatrix(rows=rows, f_p=20e6, m=3, q=2)
    back = sample_matrix_from_bytes(sample_matrix_to_bytes(sm))
    np.testing.assert_array_equal(back.rows, rows)
    assert (back.f_p, back.m, back.q, back.ordering) == (20e6, 3, 2, sm.ordering)


def test_sensing_matrix_round_trip(matrix):
    back = sensing_matrix_from_bytes(sensing_matrix_to_bytes(matrix))
    np.testing.assert_array_equal(back.entries, matrix.entries)
    assert (back.m, back.q, back.L, back.f_p) == (
        matrix.m,
        matrix.q,
        matrix.L,
        matrix.f_p,
    )


def test_matrix_metadata(matrix, bank):
    meta = matrix_metadata(matrix, bank)
    assert meta["m"] == 4 and meta["q"] == 3 and meta["L"] == 55
    json.dumps(meta)


def test_holes_csv_layout():
    holes = spectrum_holes((-20, 20), 20e6, 55, positive_only=True)
    lines = holes_to_csv(holes).strip().splitlines()
    assert lines[0] == "start_hz,end_hz"
    assert len(lines) == 3
    start, end = lines[1].split(",")
    assert float(start) == 0.0 and float(end) == 390e6


def test_wav_bytes_are_playable():
    t = np.linspace(0, 1, 8000, endpoint=False)
    blob = signal_to_wav_bytes(np.sin(2 * np.pi * 440 * t), 8000)
    with wave.open(io.BytesIO(blob)) as w:
        assert w.getnchannels() == 1
        assert w.getframerate() == 8000
        assert w.getnframes() == 8000
    pcm = np.frombuffer(blob[-16000:], dtype="<i2")
    assert np.max(np.abs(pcm)) == pytest.approx(0.9 * 32767, abs=1)


def test_wav_rejects_oversized_rate():
    with pytest.raises(InvalidArgument):
        signal_to_wav_bytes(np.zeros(4), 4.32e9)


def test_support_to_list():
    assert support_to_list(SupportSet(indices=(-20, 20))) == [-20, 20]


def test_sha256_stable_and_sensitive():
    a = np.arange(10, dtype=np.float64)
    assert sha256_hex(a) == sha256_hex(a.copy())
    b = a.copy()
    b[3] += 1e-12
    assert sha256_hex(a) != sha256_hex(b)
    assert sha256_hex(b"abc") == sha256_hex(b"abc")


def test_report_schema_rejects_unknown_kind():
    import jsonschema

    from mwcsense.harness import time_sensing

    report = time_sensing(repetitions=1)
    doc = json.loads(json.dumps(report.to_dict()))
    validate_report(doc)
    doc["kind"] = "bogus"
    with pytest.raises(jsonschema.ValidationError):
        validate_report(doc)
