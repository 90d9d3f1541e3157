import numpy as np
import pytest

from blaschke_lab import BlaschkeProduct, DiskPoint, ZeroSequence, pairwise_rho

ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_separated(seed, n, min_rho=0.1, rmax=0.9):
    """Rejection-sample n points with pairwise pseudohyperbolic distance >= min_rho."""
    rng = np.random.default_rng(seed)
    values = []
    attempts = 0
    while len(values) < n:
        attempts += 1
        if attempts > 50_000:
            raise RuntimeError("separated sampling stalled; loosen the parameters")
        w = complex(rng.uniform(-rmax, rmax), rng.uniform(-rmax, rmax))
        if abs(w) > rmax:
            continue
        if values and float(pairwise_rho(np.array(values), np.array([w])).min()) < min_rho:
            continue
        values.append(w)
    return ZeroSequence([DiskPoint(w.real, w.imag) for w in values])


def random_delta_sequence(seed, n, delta_min=0.3):
    """Radial radii with random arguments, resampled until the Carleson bound holds."""
    rng = np.random.default_rng(seed)
    # Deep rungs must clear the disk-boundary margin: q^n >= 2e-14.
    q_floor = max(0.12, (2e-14) ** (1.0 / n))
    for _ in range(300):
        q = rng.uniform(q_floor, 0.22)
        args = rng.uniform(0.0, 2.0 * np.pi, size=n)
        radii = 1.0 - q ** np.arange(1, n + 1)
        seq = ZeroSequence(
            [DiskPoint(r * np.cos(t), r * np.sin(t)) for r, t in zip(radii, args)]
        )
        if BlaschkeProduct(seq).carleson().delta >= delta_min:
            return seq
    raise RuntimeError("no sequence reached the requested Carleson bound")


def split_separated(seed, n_a, n_z, min_rho=0.45, rmax=0.9):
    """Two sequences whose union is min_rho-separated, so the cross separation is too."""
    merged = random_separated(seed, n_a + n_z, min_rho=min_rho, rmax=rmax)
    return merged[:n_a], merged[n_a:]


@pytest.fixture
def separated_factory():
    return random_separated


@pytest.fixture
def delta_factory():
    return random_delta_sequence


@pytest.fixture
def split_factory():
    return split_separated
