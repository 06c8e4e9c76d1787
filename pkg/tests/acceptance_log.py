"""Collects one verdict per acceptance criterion for the terminal summary."""

RESULTS = {}


def record(key, ok, detail=""):
    RESULTS[key] = (bool(ok), detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
