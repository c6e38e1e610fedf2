from __future__ import annotations

import pytest

from tatekit.errors import UnknownSuite
from tatekit.suites import SUITES, RunConfig, run_suite

SMALL = RunConfig(seed=3, ring=20, lattice=20, cubical=8, transfer=50, agreement=20, liftings=5)


@pytest.mark.parametrize("name", SUITES)
def test_each_suite_passes_small(name):
    res = run_suite(name, SMALL)
    assert res.ok, res.text()
    assert res.exit_code == 0


def test_cubical_covers_four_axiom_families():
    reps = run_suite("cubical", SMALL).suites["cubical"]
    families = {r.name.split(" ", 1)[1] for r in reps if r.name.startswith("n=")}
    assert len(families) >= 4


def test_agreement_reports_corpus_size():
    text = run_suite("agreement", SMALL).text()
    assert "corpus of 20 operators" in text


def test_reports_are_deterministic():
    a, b = run_suite("all", SMALL), run_suite("all", SMALL)
    assert a.text() == b.text() and a.json() == b.json()
    assert run_suite("ring", RunConfig(seed=4, ring=20)).text() != run_suite("ring", SMALL).text()


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope", SMALL)
