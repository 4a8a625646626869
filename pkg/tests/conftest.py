"""Shared fixtures: reference-table loaders and cached expensive solves."""

import csv
import importlib.resources as resources

import pytest

from heun_spectra import ProblemParams, eigen_connection, find_energy


def load_rows(name):
    with resources.files("heun_spectra.data").joinpath(name).open("r", encoding="utf-8") as f:
        rows = [r for r in csv.reader(line for line in f if not line.startswith("#"))]
    return rows[0], rows[1:]


@pytest.fixture(scope="session")
def table1_reference():
    """(l, A, n) -> published energy."""
    _, body = load_rows("table1_energies.csv")
    return {(int(r[0]), float(r[1]), int(r[2])): float(r[3]) for r in body}


@pytest.fixture(scope="session")
def table2_reference():
    _, body = load_rows("table2_laurent.csv")
    return {int(r[0]): complex(float(r[1]), float(r[2])) for r in body}


@pytest.fixture(scope="session")
def table3_reference():
    _, body = load_rows("table3_indices.csv")
    return [
        (int(r[0]), float(r[1]), float(r[2]), complex(float(r[3]), float(r[4])))
        for r in body
    ]


@pytest.fixture(scope="session")
def table4_reference():
    _, body = load_rows("table4_quasipoly.csv")
    out = {}
    for r in body:
        out.setdefault((int(r[0]), int(r[1])), []).append((float(r[2]), r[3]))
    return out


@pytest.fixture(scope="session")
def table1_shooting(table1_reference):
    """(l, A, n) -> BoundState for every published energy cell."""
    states = {}
    for (l, A, n) in table1_reference:
        states[(l, A, n)] = find_energy(ProblemParams(A=A, Z=1.0, l=l), n)
    return states


@pytest.fixture(scope="session")
def worked_example():
    """Connection solution of the l=0 ground state at A=10."""
    params = ProblemParams(A=10.0, Z=1.0, l=0)
    return eigen_connection(params, (-0.12, -0.07))
