"""Acceptance criteria, each checked at its stated tolerance.

The whole suite runs once per session with seed 7; every test prints the
one-line verdict for its criterion and asserts it.
"""

import pytest

from banachlab.acceptance import run_suite


@pytest.fixture(scope="session")
def results():
    return {r.number: r for r in run_suite(7, "all")}


def check(results, n):
    r = results[n]
    print(r.line())
    assert r.passed, r.line()


def test_criterion_01_extremal_vector_closed_forms(results):
    check(results, 1)


def test_criterion_02_lozanovskii_functional_norming(results):
    check(results, 2)


def test_criterion_03_interpolation_product_identity(results):
    check(results, 3)


def test_criterion_04_convexification_power_identity(results):
    check(results, 4)


def test_criterion_05_tsirelson_oracle_agreement(results):
    check(results, 5)


def test_criterion_06_blocking_inequality(results):
    check(results, 6)


def test_criterion_07_tail_lower_estimate(results):
    check(results, 7)


def test_criterion_08_midpoint_inclusions(results):
    check(results, 8)


def test_criterion_09_ball_map_round_trips(results):
    check(results, 9)


def test_criterion_10_modulus_power_law(results):
    check(results, 10)


def test_criterion_11_determinism(results):
    check(results, 11)
