import pytest

from condent import validation

CHEAP = [n for n, (_, _, count) in validation.SUITES.items() if count >= 50]


@pytest.mark.parametrize("name", CHEAP)
def test_suite_passes(name):
    r = validation.run_suite(name, samples=20)
    assert r.passed, r.line()


@pytest.mark.parametrize("name", ["discord_classical", "analytic_vs_grid", "discord_nonnegative"])
def test_optimizer_suites_pass(name):
    r = validation.run_suite(name, samples=3)
    assert r.passed, r.line()


def test_broken_tolerance_fails():
    r = validation.run_suite("closed_form_s2", samples=10, tol=-1.0)
    assert not r.passed
    assert r.line().startswith("FAIL closed_form_s2: 0/10")


def test_same_seed_same_summary():
    a = [r.line() for r in validation.run_all(samples=5, seed=3, names=["majorization", "refinement"])]
    b = [r.line() for r in validation.run_all(samples=5, seed=3, names=["majorization", "refinement"])]
    assert a == b


def test_unknown_tolerance_key():
    with pytest.raises(KeyError):
        validation.run_all(samples=2, tolerances={"nope": 1.0}, names=["majorization"])
