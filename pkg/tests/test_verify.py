import pytest

from multspec.errors import DomainError
from multspec.verify import SUITES, run_suites


@pytest.mark.parametrize("name", ["spaces", "symbols", "peaks", "spectra"])
def test_invariant_suites_pass(name):
    (result,) = run_suites([name])
    assert result.name == name
    assert result.rows
    assert result.passed, [row for row in result.rows if not row[-1]]


def test_spectra_suite_checks_containment():
    (result,) = run_suites(["spectra"])
    checks = [row[0] for row in result.rows]
    assert "essential inside spectrum B(0.5)*z+0.25" in checks


def test_all_covers_every_module_suite():
    for name in ("numerics", "series", "symbols", "spaces", "peaks", "spectra", "fredholm"):
        assert name in SUITES
    assert list(SUITES)[:3] == ["stirling", "parseval", "chu"]


def test_unknown_suite_is_rejected():
    with pytest.raises(DomainError):
        run_suites(["spaces", "nope"])
