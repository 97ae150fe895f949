"""Acceptance criteria: thirteen suite-level checks at frozen tolerances.

Each test runs one criterion through a shared SuiteContext so heavy
artifacts (solved pairs, the profile extension, the kappa sweep) are
built once.  Criterion 8's multiplier clause is asserted at its stated
5% band even though the converged multipliers at kappa = 1e4 still sit
about 7.5% below 1; that assertion fails by design rather than being
widened.  See the failure message for the measured gap.
"""

import pytest

from segsym import acceptance
from segsym.config import SolveConfig


@pytest.fixture(scope="module")
def ctx(tmp_path_factory):
    return acceptance.SuiteContext(tmp_path_factory.mktemp("accept"), SolveConfig())


def run(ctx, k):
    res = acceptance.run_criterion(ctx, k)
    assert res.passed, "; ".join(res.failures())
    return res


def test_01_profile_structure(ctx):
    run(ctx, 1)


def test_02_linear_pair_oracles(ctx):
    run(ctx, 2)


def test_03_frequency_monotonicity(ctx):
    run(ctx, 3)


def test_04_doubling(ctx):
    run(ctx, 4)


def test_05_exponential_decay(ctx):
    run(ctx, 5)


def test_06_sharp_acf_fit(ctx):
    run(ctx, 6)


def test_07_rearrangement_laws(ctx):
    run(ctx, 7)


def test_08_spherical_minimization(ctx):
    res = acceptance.run_criterion(ctx, 8)
    by_label = {c.label: c for c in res.checks}
    for label in (
        "value_k100",
        "value_k1000",
        "value_k10000",
        "deficit_exponent",
        "seg_exponent",
        "runtime_s",
    ):
        c = by_label[label]
        assert c.ok, f"{c.label}: got {c.value:.10g}, wanted {c.requirement}"
    for label in ("mult1_at_1e4", "mult2_at_1e4"):
        c = by_label[label]
        assert c.ok, (
            f"{c.label}: got {c.value:.10g}, wanted {c.requirement}; the "
            "converged multiplier gap at kappa=1e4 is ~7.5% and closes "
            "like kappa^-0.24, so the 5% band is first reached near "
            "kappa~6e4"
        )


def test_09_gamma_identities(ctx):
    run(ctx, 9)


def test_10_blowdown_flatness(ctx):
    run(ctx, 10)


def test_11_segregation_bounds(ctx):
    run(ctx, 11)


def test_12_cone_monotonicity(ctx):
    run(ctx, 12)


def test_13_determinism(ctx):
    res = acceptance.criterion_13(ctx)
    assert res.passed, "; ".join(res.failures())
