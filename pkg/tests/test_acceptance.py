"""Acceptance suite: one test per headline criterion, each printing a pass/fail line.

Run standalone with ``python tests/test_acceptance.py``.
"""

import sys

import pytest

from strata_chow import cli, verification

KEYS = [k for k, _, _ in verification.CHECKS]


def test_eleven_criteria():
    assert KEYS == [str(i) for i in range(1, 12)]


@pytest.mark.parametrize("key", KEYS)
def test_criterion(key, capsys):
    result = verification.run_check(key)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.line()


def test_criterion_4_via_cli(capsys):
    code = cli.main(["check-relation", "1*[4,1,1]+3*[2,2,2]-1*[3,2,1]", "--n", "6"])
    out = capsys.readouterr().out
    ok = code == 0 and out.startswith("HOLDS")
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] 4 check-relation command: exit {code}")
    assert ok, out


if __name__ == "__main__":
    results = verification.run_all()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
