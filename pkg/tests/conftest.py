from hypothesis import settings

settings.register_profile("cxorder", deadline=None, max_examples=30, derandomize=True)
settings.load_profile("cxorder")


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
