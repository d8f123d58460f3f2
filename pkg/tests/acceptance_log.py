"""Collected PASS/FAIL lines for the acceptance criteria."""

LINES = []


def report(name, failures, elapsed=None):
    status = "PASS" if not failures else "FAIL"
    line = f"{status} {name}"
    if elapsed is not None:
        line += f" ({elapsed:.1f}s)"
    if failures:
        line += ": " + "; ".join(failures[:6])
        if len(failures) > 6:
            line += f"; ... {len(failures) - 6} more"
    LINES.append(line)
    print(line)
    return line
