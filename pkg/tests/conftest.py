import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, desc, seconds = results[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {desc}  ({seconds:.2f}s)")
