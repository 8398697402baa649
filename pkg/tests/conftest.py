from __future__ import annotations

import re
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

from quartic import catalog
from quartic.bitangents import compute_bitangents
from quartic.detrep import from_matrices
from quartic.dixon import dixon_detrep
from quartic.octad import all_36_reps, bitangent_matrix, cayley_octad
from quartic.steiner import all_63_grams
from quartic.vinnikov import all_idr_forms, normalize_coordinates

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def edge_bitangents():
    return compute_bitangents(catalog.EDGE)


@pytest.fixture(scope="session")
def edge_rep():
    return from_matrices(*catalog.matrix_coefficients(catalog.EDGE_MATRIX))


@pytest.fixture(scope="session")
def edge_octad(edge_rep):
    return cayley_octad(edge_rep)


@pytest.fixture(scope="session")
def edge_bm(edge_rep, edge_octad, edge_bitangents):
    return bitangent_matrix(edge_rep, edge_octad, edge_bitangents)


@pytest.fixture(scope="session")
def edge_classes(edge_rep, edge_octad, edge_bitangents):
    return all_36_reps(edge_rep, bitangents=edge_bitangents, octad=edge_octad)


@pytest.fixture(scope="session")
def edge_grams(edge_bm):
    return all_63_grams(catalog.EDGE, edge_bm)


@pytest.fixture(scope="session")
def empty_rep():
    return from_matrices(*catalog.matrix_coefficients(catalog.EMPTY_MATRIX))


@pytest.fixture(scope="session")
def empty_bitangents(empty_rep):
    return compute_bitangents(empty_rep.f)


@pytest.fixture(scope="session")
def empty_bm(empty_rep, empty_bitangents):
    return bitangent_matrix(empty_rep, cayley_octad(empty_rep), empty_bitangents)


@pytest.fixture(scope="session")
def empty_grams(empty_rep, empty_bm):
    return all_63_grams(empty_rep.f, empty_bm)


@pytest.fixture(scope="session")
def nested_normalized():
    return normalize_coordinates(catalog.NESTED_OVALS)[0]


@pytest.fixture(scope="session")
def nested_classes(nested_normalized):
    return all_36_reps(dixon_detrep(nested_normalized))


@pytest.fixture(scope="session")
def nested_forms(nested_classes):
    return all_idr_forms(nested_classes)


# -- per-criterion summary for the acceptance suite ------------------------------------------

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+?)(?:\[|$)")
_outcomes: dict = defaultdict(list)


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid.split("::")[-1])
    if not match:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[(int(match.group(1)), match.group(2))].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    by_number = defaultdict(list)
    names = {}
    for (number, name), results in _outcomes.items():
        by_number[number] += results
        names.setdefault(number, name.split("__")[0].replace("_", " "))
    terminalreporter.section("acceptance criteria")
    for number in sorted(by_number):
        verdict = "PASS" if all(r == "passed" for r in by_number[number]) else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {names[number]:<28} {verdict}")
