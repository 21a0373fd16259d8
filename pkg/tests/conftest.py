"""Shared fixtures and the acceptance report.

Acceptance tests register one line per criterion in ACCEPTANCE_REPORT; the
terminal-summary hook prints them all at the end of the run so the pass/fail
status of every criterion is visible even when all tests pass.
"""

from __future__ import annotations

import numpy as np
import pytest

from cfiama.config import SimulationConfig
from cfiama.network import build_channel_statistics, generate_network

ACCEPTANCE_REPORT = {}


def record_criterion(number, passed, detail):
    ACCEPTANCE_REPORT[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_REPORT):
        passed, detail = ACCEPTANCE_REPORT[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status} - {detail}")


@pytest.fixture()
def tiny_config():
    """Smallest config that exercises every pipeline stage quickly."""
    return SimulationConfig(L=3, K=4, N=2, tau_p=2, n_setups=1,
                            n_channel_reals=8, seed=7)


@pytest.fixture()
def small_setup():
    """One deterministic small network with its channel statistics."""
    config = SimulationConfig(L=6, K=8, N=2, tau_p=3, seed=11)
    rng = np.random.default_rng(11)
    net = generate_network(config, rng)
    stats = build_channel_statistics(net, config, rng)
    return config, stats
