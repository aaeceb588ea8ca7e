"""Shared fixtures: the bundled rain-acidity sample and its empirical mixtures."""

import csv

import pytest

from dualquant import make_empirical, rain_csv_path


@pytest.fixture(scope="session")
def rain_columns():
    """The packaged rain sample as two parallel float lists (pH, aH)."""
    with open(rain_csv_path(), newline="") as fh:
        rows = list(csv.DictReader(fh))
    ph = [float(r["pH"]) for r in rows]
    ah = [float(r["aH"]) for r in rows]
    return ph, ah


@pytest.fixture(scope="session")
def ph_dist(rain_columns):
    return make_empirical(rain_columns[0])


@pytest.fixture(scope="session")
def ah_dist(rain_columns):
    return make_empirical(rain_columns[1])
