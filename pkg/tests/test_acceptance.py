"""Acceptance gate: every registered check runs at its registered tolerance.

Two projective-space golden values are registered targets that disagree with
the package's exact-rational oracle (and with the engine, which matches the
oracle); they are listed in ``KNOWN_DISPUTED_CHECKS``, kept as registered, and
fail here.  See the README for the caveat and the oracle values.
"""

from fractions import Fraction

import pytest

from conformal_zeta.acceptance import (CHECK_NAMES, KNOWN_DISPUTED_CHECKS,
                                       rational_finite_part, run_suite)


@pytest.fixture(scope="session")
def suite_report():
    return run_suite()


def _fmt(check):
    return (f"{check.name}: value={check.value!r} expected={check.expected!r} "
            f"tol={check.tolerance!r} [{check.provenance}]"
            + (f" ({check.note})" if check.note else ""))


def test_registry_is_complete(suite_report):
    assert tuple(c.name for c in suite_report.checks) == tuple(sorted(CHECK_NAMES))


def test_overall_flag_is_conjunction(suite_report):
    assert suite_report.overall_pass == all(c.passed for c in suite_report.checks)


def test_every_check_carries_provenance(suite_report):
    assert all(c.provenance in {"paper", "derived", "trivial"} for c in suite_report.checks)


@pytest.mark.parametrize("name", sorted(CHECK_NAMES))
def test_criterion(name, suite_report):
    check = next(c for c in suite_report.checks if c.name == name)
    print(("PASS  " if check.passed else "FAIL  ") + _fmt(check))
    assert check.passed, _fmt(check)


def test_disputed_targets_are_exactly_the_known_ones(suite_report):
    failing = tuple(c.name for c in suite_report.checks if not c.passed)
    assert failing == tuple(sorted(KNOWN_DISPUTED_CHECKS))


def test_disputed_projective_target_diagnosis():
    # The registered +1/18 is what the rational oracle returns for the lattice
    # of degrees l = 0, 4, 8, ... (step-2 halving applied twice), while the
    # even-degree lattice of the actual projective stream gives +1/36.
    assert rational_finite_part(4, parity="even") == Fraction(1, 36)
    assert rational_finite_part(4, parity="even", step=4) == Fraction(1, 18)
