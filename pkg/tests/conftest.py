import _acceptance_log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_log.LINES:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria", sep="=")
    for line in _acceptance_log.LINES:
        terminalreporter.write_line(line)
