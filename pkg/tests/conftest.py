"""Shared fixtures: prototype-shaped configs, banks, and cached pipeline runs.

Session scope keeps the expensive dense-grid simulations to one run each;
every fixture is immutable after construction so sharing is safe.
"""

import numpy as np
import pytest
from hypothesis import settings

from mwcsense import (
    build_matrix,
    choose_grid_rate,
    demo_scenario,
    expand_channels,
    gen_random_bank,
    prototype_config,
    simulate_frontend,
    synthesize,
    tone_scenario,
)

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def proto():
    return prototype_config()


@pytest.fixture(scope="session")
def demo():
    return demo_scenario()


@pytest.fixture(scope="session")
def bank(proto):
    return gen_random_bank(proto.m, proto.m_chips, seed=0, period_s=proto.t_p)


@pytest.fixture(scope="session")
def matrix(proto, bank):
    return build_matrix(bank, proto)


def front_end(scenario, config, bank, duration_s=None):
    """Dense synthesis -> mix/filter/decimate -> virtual-channel expansion."""
    if duration_s is not None:
        scenario = type(scenario)(
            f_max=scenario.f_max,
            n_bands_max=scenario.n_bands_max,
            band_width_max_hz=scenario.band_width_max_hz,
            bands=scenario.bands,
            duration_s=duration_s,
            snr_db=scenario.snr_db,
            seed=scenario.seed,
        )
    grid_rate = choose_grid_rate(config, scenario.f_max)
    x = synthesize(scenario, grid_rate)
    return expand_channels(simulate_frontend(x, bank, config), config), x


@pytest.fixture(scope="session")
def demo_samples(demo, proto, bank):
    samples, _ = front_end(demo, proto, bank, duration_s=2e-4)
    return samples


@pytest.fixture(scope="session")
def tone_samples(proto, bank):
    """400 MHz sine through the full front end; slice 20 is dead-center."""
    scen = tone_scenario(400e6, f_max=1e9, duration_s=2e-4, seed=3)
    samples, x = front_end(scen, proto, bank)
    return scen, samples, x


def rel_err(a, b):
    denom = np.linalg.norm(b)
    return np.linalg.norm(np.asarray(a) - np.asarray(b)) / denom if denom else 0.0


def exhaustive_mmv(A, V, k):
    """Brute-force MMV oracle: best size-k column set by least-squares fit.

    Ties broken by lexicographic column order so the answer is deterministic.
    """
    import itertools

    best_cols, best_res = None, np.inf
    for cols in itertools.combinations(range(A.shape[1]), k):
        sub = A[:, list(cols)]
        coef, *_ = np.linalg.lstsq(sub, V, rcond=None)
        res = float(np.linalg.norm(V - sub @ coef))
        if res < best_res * (1 - 1e-12) or best_cols is None:
            best_cols, best_res = cols, res
    return frozenset(best_cols), best_res


def planted_mmv_instance(seed, m=6, n=18, k=3, snapshots=8):
    """Random complex dictionary with a planted row-k-sparse solution."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    A /= np.linalg.norm(A, axis=0)
    support = tuple(sorted(rng.choice(n, size=k, replace=False)))
    U = rng.standard_normal((k, snapshots)) + 1j * rng.standard_normal((k, snapshots))
    return A, A[:, list(support)] @ U, support
