import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20120418)


def random_images(count, size, seed):
    """Mix of uniform and bimodal 8-bit images."""
    rng = np.random.default_rng(seed)
    images = []
    for k in range(count):
        if k % 2 == 0:
            img = rng.integers(0, 256, size=size)
        else:
            lo, hi = sorted(rng.integers(10, 246, size=2))
            split = rng.random(size) < rng.uniform(0.2, 0.8)
            img = np.where(split, rng.normal(lo, 12, size), rng.normal(hi, 12, size))
        images.append(np.clip(np.rint(img), 0, 255).astype(np.uint8))
    return images


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
