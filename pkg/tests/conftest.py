import re

CRITERIA = {
    1: "single-capability optimum: lam* = 1, normalized peak 1/e",
    2: "asymptotic per-capability optimum nondecreasing through M = 50",
    3: "finite-population (N = 40) per-capability optimum nondecreasing",
    4: "high-capability efficiency limits split by load regime",
    5: "binary-backoff asymptotic attempt rates at M = 1 and M = 2",
    6: "simulator matches fixed-point analysis within 3% (N = 50 grid)",
    7: "binary-backoff efficiency: ALOHA M = 10 band, RTS/CTS floor",
    8: "optimal backoff factor trend in M for ALOHA and basic access",
    9: "throughput recurrence and closed-form identities to 1e-12",
    10: "multiuser detection: ZF, MMSE, source count, blind search",
    11: "sequence-pool throughput parity and overhead trade-off",
}

_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for key, label in (("passed", "PASS"), ("failed", "FAIL"),
                       ("error", "FAIL"), ("skipped", "SKIP")):
        for report in terminalreporter.stats.get(key, []):
            match = _PATTERN.search(getattr(report, "nodeid", ""))
            if match:
                outcomes[int(match.group(1))] = label
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(outcomes):
        name = CRITERIA.get(num, "")
        terminalreporter.write_line(
            f"criterion {num:2d}: {outcomes[num]}  {name}")
