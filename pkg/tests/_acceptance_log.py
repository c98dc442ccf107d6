"""Shared registry for acceptance-criterion result lines.

test_acceptance.py appends one entry per criterion; the conftest
terminal-summary hook prints them after the run, outside pytest's
output capture, so the per-criterion verdicts always reach the
terminal (and any log the terminal is piped into).
"""

LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> str:
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    LINES.append(line)
    return line
