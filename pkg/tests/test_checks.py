from __future__ import annotations

import pytest

from vsheet import checks


class TestResolveTolerances:
    def test_defaults_copied(self):
        tols = checks.resolve_tolerances(None)
        assert tols == checks.DEFAULT_TOLERANCES
        assert tols is not checks.DEFAULT_TOLERANCES

    def test_single_override(self):
        tols = checks.resolve_tolerances({"factorization": 1e-4})
        assert tols["factorization"] == 1e-4
        assert tols["branch_sqrt"] == checks.DEFAULT_TOLERANCES["branch_sqrt"]

    def test_all_override(self):
        tols = checks.resolve_tolerances({"all": 1e-3})
        assert set(tols.values()) == {1e-3}

    def test_all_then_specific(self):
        tols = checks.resolve_tolerances({"all": 1e-3, "branch_sqrt": 1e-9})
        assert tols["branch_sqrt"] == 1e-9
        assert tols["factorization"] == 1e-3

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            checks.resolve_tolerances({"no_such_check": 1.0})


class TestRegistry:
    def test_names_match_tolerance_table(self):
        assert checks.check_names() == list(checks.DEFAULT_TOLERANCES)


class TestRunAll:
    def test_all_pass_at_defaults(self):
        results = checks.run_all(samples=200, seed=0)
        assert [r.name for r in results] == checks.check_names()
        failed = [r.name for r in results if not r.passed]
        assert failed == []
        for r in results:
            assert r.detail

    def test_impossible_tolerance_fails_numeric_checks(self):
        results = checks.run_all({"all": 1e-30}, samples=100, seed=0)
        by_name = {r.name: r for r in results}
        assert not by_name["factorization"].passed
        assert not by_name["triangularization"].passed
        # count-style checks measure exact integers, so a tiny tolerance
        # cannot fail them
        assert by_name["nondegeneracy"].passed
        assert by_name["classification"].passed
        assert by_name["roots"].passed
        assert by_name["determinism"].passed

    def test_deterministic(self):
        a = checks.run_all(samples=150, seed=3)
        b = checks.run_all(samples=150, seed=3)
        assert [(r.name, r.passed, r.value) for r in a] == \
               [(r.name, r.passed, r.value) for r in b]
