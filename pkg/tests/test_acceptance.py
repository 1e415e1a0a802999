"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``criterion NN PASS/FAIL`` line (shown even without
``-s``). Criterion 10 reruns criteria 1-9 and compares their logs with the
runs made here.
"""
import pytest

from necklace_lab.acceptance import CRITERIA, criterion_10

SEED = 0
_results = {}


def _report(capsys, result):
    with capsys.disabled():
        print("\n" + result.line())
    return result


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = _report(capsys, CRITERIA[number](SEED))
    _results[number] = result
    assert result.passed, result.summary


def test_criterion_10_determinism(capsys):
    result = _report(capsys, criterion_10(SEED, _results))
    assert result.passed, result.summary
    assert len(result.records) == len(CRITERIA)


if __name__ == "__main__":
    from necklace_lab.acceptance import run_all

    for r in run_all(SEED):
        print(r.line())
