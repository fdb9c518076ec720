"""Canonical configurations and scenarios used by the demos and tests."""

from __future__ import annotations

from .frontend import MwcConfig
from .signals import BandSpec, SignalScenario

# hardware-profile numbers: 4 physical channels collapsed by q=3, slice width
# 20 MHz, chip length 108, 12x111 effective system, 70 MHz physical ADCs
PROTOTYPE_F_P = 20e6
PROTOTYPE_M = 4
PROTOTYPE_Q = 3
PROTOTYPE_M_CHIPS = 108
PROTOTYPE_L = 55
PROTOTYPE_ADC_HZ = 70e6

DEMO_F_MAX = 1e9
DEMO_AM_CARRIER = 807.8e6
DEMO_AM_ENVELOPE = 100e3
DEMO_FM_CARRIER = 631.2e6
DEMO_FM_DEVIATION = 1.5e6
DEMO_FM_RATE = 10e3
DEMO_SINE_CARRIER = 981.9e6


def prototype_config(n_snapshots: int = 64) -> MwcConfig:
    """The desk-scale stand-in for the hardware prototype."""
    return MwcConfig(
        m=PROTOTYPE_M,
        q=PROTOTYPE_Q,
        f_p=PROTOTYPE_F_P,
        m_chips=PROTOTYPE_M_CHIPS,
        L=PROTOTYPE_L,
        n_snapshots=n_snapshots,
        adc_rate_hz=PROTOTYPE_ADC_HZ,
    )


def basic_config(n_intervals: int = 6, n_snapshots: int = 64) -> MwcConfig:
    """A full-rate q=1 configuration satisfying the m >= 4N guideline."""
    return MwcConfig(
        m=4 * n_intervals,
        q=1,
        f_p=PROTOTYPE_F_P,
        m_chips=PROTOTYPE_M_CHIPS,
        n_snapshots=n_snapshots,
    )


def demo_scenario(
    seed: int = 7, snr_db: float | None = None, duration_s: float = 1e-3
) -> SignalScenario:
    """Three concurrent transmissions: AM, wide-deviation FM, and a pure sine.

    Band widths are the occupied widths: twice the envelope rate for AM and
    the Carson width 2*(deviation + rate) for FM.
    """
    bands = (
        BandSpec(
            carrier_hz=DEMO_AM_CARRIER,
            bandwidth_hz=2 * DEMO_AM_ENVELOPE,
            modulation="am",
            mod_params={"envelope_rate_hz": DEMO_AM_ENVELOPE, "depth": 0.5},
        ),
        BandSpec(
            carrier_hz=DEMO_FM_CARRIER,
            bandwidth_hz=2 * (DEMO_FM_DEVIATION + DEMO_FM_RATE),
            modulation="fm",
            mod_params={"deviation_hz": DEMO_FM_DEVIATION, "rate_hz": DEMO_FM_RATE},
        ),
        BandSpec(carrier_hz=DEMO_SINE_CARRIER, modulation="pure_sine"),
    )
    return SignalScenario(
        f_max=DEMO_F_MAX,
        n_bands_max=6,
        band_width_max_hz=PROTOTYPE_F_P,
        bands=bands,
        duration_s=duration_s,
        snr_db=snr_db,
        seed=seed,
    )


def tone_scenario(
    carrier_hz: float,
    f_max: float,
    duration_s: float,
    seed: int = 0,
    amplitude: float = 1.0,
    snr_db: float | None = None,
) -> SignalScenario:
    """A single pure sinusoid, as used by the frequency sweep."""
    return SignalScenario(
        f_max=f_max,
        n_bands_max=2,
        band_width_max_hz=PROTOTYPE_F_P,
        bands=(BandSpec(carrier_hz=carrier_hz, amplitude=amplitude),),
        duration_s=duration_s,
        snr_db=snr_db,
        seed=seed,
    )
