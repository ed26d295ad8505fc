import pytest

from qiopa.core import CutoffError
from qiopa.verify import (
    CheckResult,
    VerificationReport,
    check_pair_evolution,
    check_cauchy_schwarz,
    check_cauchy_schwarz_oracle,
    check_correlations,
    check_negativity,
    check_oracle_feasible,
    check_output_states,
    check_wigner_oracle,
    run_verification,
)

# check_oracle_feasible
## validation
def test_infeasible_gain():
    with pytest.raises(CutoffError, match=r"verify --closed-form-only") as info:
        check_oracle_feasible((0.2, 2.5))
    assert info.value.suggested_cutoff > 100

def test_run_verification_infeasible_gain():
    with pytest.raises(CutoffError, match="The oracle cannot represent gain 2.5"):
        run_verification(gains=(2.5,))

## correctness
def test_feasible_gains():
    check_oracle_feasible((0.0, 0.2, 0.5, 0.8))

# closed-form checks
## correctness
def test_closed_form_only():
    report = run_verification(closed_form_only=True)
    assert [result.name for result in report.results] == ["wigner_normalization", "wigner_minimum", "cauchy_schwarz_violation"]
    assert report.passed
    assert report.failures() == []

def test_cauchy_schwarz_everywhere():
    result = check_cauchy_schwarz()
    assert result.passed
    assert result.detail == "violated everywhere"

def test_negativity_from_zero_gain():
    assert check_negativity(gains=(0.0,)).passed
    assert check_negativity().passed
    assert check_negativity().detail == "g in [0.0, 0.5, 1.5, 2.5]"

# oracle checks
## correctness
def test_pair_evolution():
    result = check_pair_evolution((0.0, 0.2), cutoff=20)
    assert result.passed, result.max_deviation

def test_output_states():
    assert check_output_states((0.2,)).passed

def test_wigner_oracle():
    result = check_wigner_oracle((0.2,))
    assert result.passed, result.max_deviation
    assert result.detail == "convention constant 1.0"

def test_wigner_oracle_wrong_constant():
    result = check_wigner_oracle((0.2,), constant=2.0)
    assert not result.passed
    assert result.max_deviation == pytest.approx(1.0, rel=1e-4)

def test_correlations():
    corrected, printed = check_correlations((0.2,))
    assert corrected.name == "correlations_corrected"
    assert corrected.passed, corrected.max_deviation
    assert printed.documented and printed.passed
    assert printed.max_deviation > printed.tolerance
    assert "nondegenerate:g2_12" in printed.detail

def test_cauchy_schwarz_oracle():
    assert check_cauchy_schwarz_oracle((0.5,)).passed

# VerificationReport
## correctness
def test_report_table_and_dict():
    report = VerificationReport([
        CheckResult("alpha", True, 1e-12, 1e-10),
        CheckResult("beta", False, 0.5, 1e-6),
        CheckResult("printed", True, 0.1, 1e-6, "deviates", documented=True),
    ])
    lines = report.table().splitlines()
    assert "PASS" in lines[1]
    assert "FAIL" in lines[2]
    assert "DOCUMENTED" in lines[3]
    assert lines[-1] == "FAIL"
    assert [result.name for result in report.failures()] == ["beta"]
    document = report.to_dict()
    assert document["schema_version"] == 1
    assert document["passed"] is False
    assert document["checks"][2]["documented"] is True
