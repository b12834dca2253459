"""Collects one summary line per acceptance check; printed by conftest."""

LOG: list[str] = []


def record(label: str, ok: bool, detail: str = "") -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {label}"
    if detail:
        line += f"  ({detail})"
    LOG.append(line)
    print(line)
    return ok
