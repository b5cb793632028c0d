"""PASS/FAIL lines collected by the acceptance tests and echoed in the terminal summary."""

LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    LINES.append(line)
    print(line)
    return ok
