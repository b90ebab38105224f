import random
import threading

import pytest

from conftest import random_graph
from tdobs.graph import Graph, GraphError, components, contract_edge, delete_edge, delete_vertex
from tdobs.oracle import graph_classes, td_by_definition
from tdobs.treedepth import (
    EliminationForest,
    TreedepthSolver,
    lower_bound,
    td_at_most,
    treedepth,
    verify_forest,
)


def _check(g: Graph, solver: TreedepthSolver | None = None) -> int:
    res = treedepth(g, solver)
    assert verify_forest(g, res.certificate)
    assert res.certificate.height() == res.value
    return res.value


class TestExamples:
    def test_k1(self):
        assert _check(Graph.complete(1)) == 1

    @pytest.mark.parametrize("n", [1, 2, 5, 18])
    def test_edgeless(self, n):
        assert _check(Graph.empty(n)) == 1

    @pytest.mark.parametrize("n", range(1, 10))
    def test_complete(self, n):
        assert _check(Graph.complete(n)) == n

    def test_p4_c4(self):
        assert _check(Graph.path(4)) == 3
        assert _check(Graph.cycle(4)) == 3

    @pytest.mark.parametrize("n,td", [(1, 1), (2, 2), (3, 2), (7, 3), (8, 4), (15, 4), (16, 5)])
    def test_paths(self, n, td):
        # td(P_n) = ceil(log2(n + 1))
        assert _check(Graph.path(n)) == td

    def test_empty_graph_rejected(self):
        with pytest.raises(GraphError):
            treedepth(Graph.empty(0))


class TestDecision:
    def test_examples(self):
        assert not td_at_most(Graph.complete(4), 3)
        assert td_at_most(Graph.path(4), 3)
        assert not td_at_most(Graph.complete(1), 0)
        assert not td_at_most(Graph.empty(5), 0)

    def test_negative_budget(self):
        with pytest.raises(ValueError):
            td_at_most(Graph.complete(2), -1)

    def test_consistent_with_value(self):
        rng = random.Random(21)
        solver = TreedepthSolver(memo_cap=0)
        for _ in range(150):
            g = random_graph(rng, rng.randint(1, 12))
            value = treedepth(g, solver).value
            for k in range(0, g.n + 1):
                assert td_at_most(g, k, solver) == (value <= k)


class TestOracle:
    def test_random_small_unmemoized(self):
        rng = random.Random(22)
        for _ in range(60):
            g = random_graph(rng, rng.randint(1, 6))
            assert _check(g) == td_by_definition(g)

    def test_all_connected_seven_vertex_graphs(self):
        from tdobs.graph import is_connected

        for g in graph_classes(7):
            if is_connected(g):
                assert _check(g) == td_by_definition(g, memo=True)


class TestProperties:
    def test_minor_monotone(self):
        rng = random.Random(23)
        solver = TreedepthSolver()
        for _ in range(40):
            g = random_graph(rng, rng.randint(2, 11), 0.35)
            td = treedepth(g, solver).value
            for v in range(g.n):
                assert treedepth(delete_vertex(g, v), solver).value <= td
            for e in g.edges():
                assert treedepth(delete_edge(g, e), solver).value <= td
                assert treedepth(contract_edge(g, e), solver).value <= td

    def test_component_rule(self):
        rng = random.Random(24)
        for _ in range(60):
            g = random_graph(rng, rng.randint(2, 14), 0.15)
            parts = [treedepth(g.induced(c)).value for c in components(g)]
            assert treedepth(g).value == max(parts)

    def test_memo_does_not_change_answers(self):
        rng = random.Random(25)
        graphs = [random_graph(rng, rng.randint(9, 14), 0.3) for _ in range(25)]
        plain = [treedepth(g, TreedepthSolver(memo_cap=0)).value for g in graphs]
        memo = TreedepthSolver(memo_min_size=4)
        tiny = TreedepthSolver(memo_cap=3, memo_min_size=4)
        for g, want in zip(graphs, plain):
            assert _check(g, memo) == want
            assert _check(g, tiny) == want
        assert tiny.resets > 0
        # a second pass is served partly from the memo and must not differ
        assert [_check(g, memo) for g in graphs] == plain

    def test_concurrent_use(self):
        rng = random.Random(26)
        graphs = [random_graph(rng, rng.randint(8, 13), 0.3) for _ in range(30)]
        want = [treedepth(g, TreedepthSolver(memo_cap=0)).value for g in graphs]
        shared = TreedepthSolver(memo_min_size=4)
        got: dict[int, list[int]] = {}

        def work(t: int) -> None:
            got[t] = [treedepth(g, shared).value for g in graphs]

        threads = [threading.Thread(target=work, args=(t,)) for t in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(v == want for v in got.values())

    def test_extension_family_matches_direct(self):
        from tdobs.graph import delete_vertex, extend

        rng = random.Random(27)
        solver = TreedepthSolver(memo_cap=0)
        for _ in range(30):
            g = random_graph(rng, rng.randint(2, 9), 0.4)
            family = solver.extensions(g)
            for _ in range(12):
                a = rng.randrange(1 << g.n)
                h = extend(g, a)
                td = treedepth(h, solver).value
                for k in range(1, g.n + 2):
                    assert family.at_most(a, k) == (td <= k)
                v = rng.randrange(g.n)
                k = rng.randint(1, g.n)
                assert family.deletion_at_most(a, v, k) == td_at_most(delete_vertex(h, v), k, solver)


class TestVerifyForest:
    def test_examples(self):
        k2 = Graph.complete(2)
        assert verify_forest(k2, EliminationForest((None, 0)))
        assert not verify_forest(k2, EliminationForest((None, None)))
        f = EliminationForest((1, None, 1))
        assert verify_forest(Graph.path(3), f) and f.height() == 2

    def test_cycle_rejected(self):
        assert not verify_forest(Graph.complete(2), EliminationForest((1, 0)))

    def test_wrong_length(self):
        assert not verify_forest(Graph.complete(2), EliminationForest((None,)))

    def test_parent_out_of_range(self):
        with pytest.raises(GraphError):
            verify_forest(Graph.complete(2), EliminationForest((None, 5)))


class TestLowerBound:
    def test_examples(self):
        assert lower_bound(Graph.complete(4)) >= 4
        assert lower_bound(Graph.empty(3)) == 1
        assert lower_bound(Graph.complete(2)) == 2

    def test_valid(self):
        rng = random.Random(28)
        for _ in range(150):
            g = random_graph(rng, rng.randint(1, 12))
            assert lower_bound(g) <= treedepth(g).value
