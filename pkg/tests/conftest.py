import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from pathlasso import MediationDataset, default_design, gen_proposed, standardize  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_dataset(n=40, k=5, seed=0):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n)
    a = rng.normal(size=k)
    m = np.outer(z, a) + rng.standard_normal((n, k))
    r = 0.5 * z + m @ rng.normal(size=k) + rng.standard_normal(n)
    return MediationDataset(z, m, r)


@pytest.fixture
def small_data():
    return standardize(random_dataset())


@pytest.fixture(scope="session")
def sim50():
    design = default_design(n=50, k=50, seed=5)
    data, truth = gen_proposed(design, 0)
    return design, standardize(data), truth


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
