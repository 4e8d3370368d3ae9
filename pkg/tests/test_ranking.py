import json

import numpy as np
import pytest

from ecqubo.centrality import eigencentrality
from ecqubo.errors import CapacityError
from ecqubo.graph import builtin
from ecqubo.ranking import (
    RankReport,
    TauRecord,
    TauSweep,
    compare_rankings,
    make_solver,
    rank_from_sweep,
    tau_sweep,
)

# Published top-tau sets for a 13-node graph, tau = 1..13.
WORKED_SETS = [
    {2}, {0, 2}, {0, 2, 9}, {0, 1, 2, 9}, {0, 1, 2, 6, 9}, {0, 1, 2, 3, 6, 9},
    {0, 1, 2, 3, 5, 6, 9}, {0, 1, 2, 3, 5, 6, 9, 11}, {0, 1, 2, 3, 4, 5, 6, 9, 11},
    {0, 1, 2, 3, 4, 5, 6, 7, 9, 11}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12}, set(range(13)),
]
WORKED_RANKS = [2, 0, 9, 1, 6, 3, 5, 11, 4, 7, 8, 12, 10]


def synthetic(sets_per_tau, n, name="synthetic"):
    records = tuple(
        TauRecord(tau=t, node_sets=tuple(tuple(sorted(s)) for s in sets))
        for t, sets in enumerate(sets_per_tau, start=1)
    )
    return TauSweep(graph=name, n=n, records=records)


class TestDifferenceLogic:
    def test_worked_example(self):
        report = rank_from_sweep(synthetic([[s] for s in WORKED_SETS], 13))
        assert report.order == WORKED_RANKS
        assert report.entries[9].nodes == (7,)
        assert not report.anomalies and report.is_complete()
        assert not any(e.tied for e in report.entries)

    def test_lex_smallest_nested_superset(self):
        sweep = synthetic([[{1}], [{1, 3}, {0, 2}, {1, 2}], [{0, 1, 2}], [{0, 1, 2, 3}]], 4)
        report = rank_from_sweep(sweep)
        assert report.order == [1, 2, 0, 3]
        assert report.entries[1].alternatives == (0, 2, 3)
        assert report.entries[2].alternatives == (0, 1, 2)

    def test_anomaly(self):
        report = rank_from_sweep(synthetic([[{0}], [{1, 2}], [{0, 1, 2}]], 3))
        assert report.anomalies == [2]
        assert report.entries[1].nodes == (0, 1, 2)
        assert not report.is_complete()

    def test_gap_rejected(self):
        sweep = TauSweep("x", 3, (TauRecord(1, ((0,),)), TauRecord(3, ((0, 1, 2),))))
        with pytest.raises(ValueError):
            rank_from_sweep(sweep)


@pytest.fixture(scope="module")
def g8_sweep():
    return tau_sweep(builtin("g8_spider"))


class TestSweep:
    def test_g8_first_three(self, g8_sweep):
        r = [set(map(frozenset, g8_sweep.record(t).node_sets)) for t in (1, 2, 3)]
        assert r[0] == {frozenset({0})}
        assert r[1] == {frozenset({0, x}) for x in (1, 2, 3)}
        assert r[2] == {frozenset({0, 1, 2, 3}) - {x} for x in (1, 2, 3)}
        assert g8_sweep.weight_violations() == []

    def test_g8_ranks(self, g8_sweep):
        report = rank_from_sweep(g8_sweep)
        assert report.order == list(range(16))
        assert not report.entries[0].tied
        assert all(e.tied for e in report.entries[1:])
        assert set(report.entries[1].alternatives) == {1, 2, 3}
        assert set(report.entries[4].alternatives) == set(range(4, 16))

    def test_path3(self, p3):
        sweep = tau_sweep(p3)
        assert [set(map(frozenset, r.node_sets)) for r in sweep.records] == [
            {frozenset({1})}, {frozenset({0, 1}), frozenset({1, 2})}, {frozenset({0, 1, 2})}]
        report = rank_from_sweep(sweep)
        assert report.order == [1, 0, 2]
        assert report.entries[1].alternatives == (0, 2)

    def test_complete3_all_subsets(self):
        sweep = tau_sweep(builtin("complete", [3]), method="fixed-weight")
        assert [len(r.node_sets) for r in sweep.records] == [3, 3, 1]

    def test_complete4_tie_flagged(self):
        report = rank_from_sweep(tau_sweep(builtin("complete", [4]), method="fixed-weight"))
        assert all(e.tied for e in report.entries[:-1])
        assert report.is_complete()

    def test_capacity(self):
        with pytest.raises(CapacityError):
            tau_sweep(builtin("tutte"), method="exhaustive")
        with pytest.raises(CapacityError):
            tau_sweep(builtin("tutte"), method="fixed-weight")

    def test_unknown_solver(self):
        with pytest.raises(ValueError):
            make_solver("quantum")

    def test_sa_sweep(self, p3):
        report = rank_from_sweep(tau_sweep(p3, method="sa", reads=100, sweeps=100, seed=1))
        assert report.order == [1, 0, 2]


class TestCompare:
    def test_identical(self):
        report = rank_from_sweep(synthetic([[s] for s in WORKED_SETS], 13))
        scores = np.zeros(13)
        scores[WORKED_RANKS] = np.linspace(1, 0.1, 13)
        agree = compare_rankings(report, scores)
        assert agree.prefix == 13 and all(o == 1.0 for o in agree.overlaps)
        assert agree.kendall == 1.0

    def test_reversed_path3(self):
        report = rank_from_sweep(synthetic([[{0}], [{0, 1}], [{0, 1, 2}]], 3))
        agree = compare_rankings(report, [0.1, 0.2, 0.3])
        assert agree.prefix == 0 and agree.kendall == -1.0

    def test_g8_vs_ec(self, g8_sweep):
        agree = compare_rankings(rank_from_sweep(g8_sweep), eigencentrality(builtin("g8_spider")).scores)
        assert agree.prefix == 16
        assert all(o == 1.0 for o in agree.overlaps)
        assert agree.kendall == 1.0

    def test_mismatched_nodes(self, p3):
        with pytest.raises(ValueError):
            compare_rankings(rank_from_sweep(tau_sweep(p3)), [1.0, 2.0])


class TestReport:
    def test_json_round_trip(self, g8_sweep):
        report = rank_from_sweep(g8_sweep)
        back = RankReport.from_dict(json.loads(report.to_json()))
        assert back == report
        assert json.loads(report.to_json())["format_version"] == 1

    def test_table(self, p3):
        report = rank_from_sweep(tau_sweep(p3))
        text = report.to_table(reference=eigencentrality(p3).scores)
        lines = text.splitlines()
        assert lines[0].split() == ["tau", "top-tau", "set", "rank", "node", "reference"]
        assert "(tie: 0, 2)" in lines[2]
        assert len(lines) == 4

    def test_table_labels(self):
        report = rank_from_sweep(synthetic([[{1}], [{0, 1}]], 2))
        assert "Medici" in report.to_table(labels={1: "Medici"})
