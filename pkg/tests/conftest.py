"""Independent reference counts used across test modules.

These go through the binary string of the word rather than bit scans, so
they share no code with ``qlzoc.oracle``.
"""


def lzc_str(x: int, width: int) -> int:
    s = format(x, f"0{width}b")
    return len(s) - len(s.lstrip("0"))


def loc_str(x: int, width: int) -> int:
    s = format(x, f"0{width}b")
    return len(s) - len(s.lstrip("1"))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
