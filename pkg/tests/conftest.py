import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uslkit import Dataset

# Capacity ratios from a web-application load test that scaled impossibly
# well in its mid range (virtual users, relative capacity).  The n = 1
# baseline makes the x column directly comparable to C(n).
SUSPECT_CAPACITIES = [
    (1, 1.00),
    (5, 5.67),
    (10, 11.33),
    (25, 27.50),
    (50, 55.83),
    (100, 107.50),
    (150, 153.33),
    (200, 198.33),
    (250, 204.17),
    (300, 210.00),
    (350, 209.67),
]

# Rounded efficiencies reported alongside the capacities above.
SUSPECT_EFFICIENCIES = [1.00, 1.13, 1.13, 1.10, 1.12, 1.08, 1.02, 0.99, 0.82, 0.70, 0.60]

# Levels whose efficiency exceeds 1 beyond the default tolerance.
SUSPECT_BAD_LEVELS = [5, 10, 25, 50, 100, 150]


@pytest.fixture
def suspect_dataset() -> Dataset:
    return Dataset.from_pairs(SUSPECT_CAPACITIES)


@pytest.fixture
def data_dir(tmp_path):
    return tmp_path


# The acceptance tests record one line per criterion here; the summary
# hook prints them after the run, outside pytest's output capture.
ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        status, text = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"CRITERION {num}: {status} - {text}")
