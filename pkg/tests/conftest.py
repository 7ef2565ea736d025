ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when != "call" or ACCEPTANCE_FILE not in report.nodeid:
        return
    outcome = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    print(f"\nacceptance {outcome}: {name}", flush=True)
