import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

import qsteer

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def random_params(rng, omega_max=5.0, m_hat=None, alpha=1.0):
    if m_hat is None:
        v = rng.normal(size=3)
        m_hat = tuple(v / np.linalg.norm(v))
    return qsteer.ProtocolParams(
        omega=float(rng.uniform(0, omega_max)),
        theta=float(rng.uniform(0, np.pi)),
        phi=float(rng.uniform(0, 2 * np.pi)),
        m_hat=m_hat,
        alpha=alpha,
    )


unit_vectors = (
    st.tuples(*[st.floats(-1, 1)] * 3)
    .filter(lambda v: np.linalg.norm(v) > 0.1)
    .map(lambda v: tuple(np.asarray(v) / np.linalg.norm(v)))
)

params_strategy = st.builds(
    qsteer.ProtocolParams,
    omega=st.floats(0, 20),
    theta=st.floats(0, np.pi),
    phi=st.floats(0, 2 * np.pi),
    m_hat=unit_vectors,
    alpha=st.floats(0.1, 10),
)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
