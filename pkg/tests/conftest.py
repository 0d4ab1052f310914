import numpy as np
import pytest

from incident_bench.data_model import BINARY, CATEGORICAL, NUMERIC, Dataset, Schema, VariableSpec

ACCEPTANCE_RESULTS = []


def record_criterion(number, name, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


def numeric_schema(width, label="fall"):
    return Schema(tuple(VariableSpec(f"x{i}", NUMERIC) for i in range(width)), label)


def make_dataset(X, y, schema=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return Dataset(schema or numeric_schema(X.shape[1]), X, np.asarray(y))


@pytest.fixture
def mixed_schema():
    return Schema(
        (
            VariableSpec("age", NUMERIC),
            VariableSpec("gynecology", BINARY),
            VariableSpec("dept", CATEGORICAL, ("A", "B", "C")),
        ),
        "fall",
    )
