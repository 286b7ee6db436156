import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shuttleqec.gf2codes import build_golay, standard_form
from shuttleqec.schedule import (
    LatinRectangle,
    LogicalNetwork,
    balance,
    build_network,
    latin_rectangle,
    max_degree,
    schedule_to_network,
)

from .oracles import chromatic_index


def random_sparse(rng, max_rows=8, max_cols=12, max_edges=20):
    rows = int(rng.integers(1, max_rows + 1))
    cols = int(rng.integers(1, max_cols + 1))
    cells = rng.permutation(rows * cols)[: int(rng.integers(1, min(max_edges, rows * cols) + 1))]
    a = np.zeros(rows * cols, dtype=np.uint8)
    a[cells] = 1
    return a.reshape(rows, cols)


def assert_latin(lr: LatinRectangle, a):
    assert np.array_equal(lr.pattern, a)
    assert lr.is_latin()
    assert lr.symbols.max() <= lr.alphabet


class TestLatinRectangle:
    def test_all_ones_2x2(self):
        lr = latin_rectangle(np.ones((2, 2), dtype=np.uint8))
        assert lr.alphabet == 2
        assert sorted(lr.symbols.ravel().tolist()) == [1, 1, 2, 2]
        assert_latin(lr, np.ones((2, 2)))

    def test_identity(self):
        lr = latin_rectangle(np.eye(4, dtype=np.uint8))
        assert lr.alphabet == 1
        assert lr.occurrences().tolist() == [4]

    def test_zero_matrix(self):
        with pytest.raises(ValueError, match="no 1-entries"):
            latin_rectangle(np.zeros((2, 3), dtype=np.uint8))

    def test_degree_four_instances(self):
        rng = np.random.default_rng(11)
        done = 0
        while done < 30:
            a = random_sparse(rng, 6, 8, 20)
            if max_degree(a) != 4:
                continue
            lr = latin_rectangle(a)
            edges = list(zip(*map(list, np.nonzero(a))))
            assert lr.alphabet == chromatic_index(edges) == 4
            assert_latin(lr, a)
            done += 1

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.one_of(st.none(), st.integers(0, 100)))
    def test_alphabet_is_chromatic_index(self, seed, colour_seed):
        a = random_sparse(np.random.default_rng(seed))
        lr = latin_rectangle(a, seed=colour_seed)
        edges = list(zip(*map(list, np.nonzero(a))))
        assert lr.alphabet == chromatic_index(edges)
        assert_latin(lr, a)

    def test_seeded_is_reproducible(self):
        a = standard_form(build_golay().H).A
        assert np.array_equal(latin_rectangle(a, seed=3).symbols, latin_rectangle(a, seed=3).symbols)


class TestBalance:
    def test_fixed_point(self):
        lr = latin_rectangle(np.ones((2, 2), dtype=np.uint8))
        assert balance(lr) is lr
        assert balance(lr).max_occurrence() == 2

    def test_unbalanced_input(self):
        # 4 parallel gates in step 1 and one in each of steps 2, 3, 4
        sym = np.array([[1, 2, 0, 0], [0, 1, 3, 0], [0, 0, 1, 4], [0, 0, 0, 1]])
        lr = LatinRectangle(sym, 4)
        assert lr.is_latin() and lr.max_occurrence() == 4
        out = balance(lr)
        assert out.max_occurrence() == math.ceil(7 / 4)
        assert out.alphabet == 4 and out.is_latin()
        assert np.array_equal(out.pattern, lr.pattern)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_reaches_equitable_bound(self, seed):
        rng = np.random.default_rng(seed)
        a = (rng.random((int(rng.integers(2, 13)), int(rng.integers(2, 13)))) < rng.uniform(0.2, 0.9)).astype(np.uint8)
        if not a.any():
            return
        lr = latin_rectangle(a)
        out = balance(lr)
        assert out.alphabet == lr.alphabet
        assert out.max_occurrence() <= lr.max_occurrence()
        assert out.max_occurrence() == math.ceil(lr.n_gates / lr.alphabet)
        assert_latin(out, a)

    def test_golay_profile(self):
        A = standard_form(build_golay().H).A
        lr = balance(latin_rectangle(A))
        # 77 ones, all rows of weight 7: seven steps of exactly 11 gates
        assert lr.n_gates == 77 and lr.alphabet == 7
        assert lr.occurrences().tolist() == [11] * 7


class TestNetwork:
    def test_generation_2x2(self):
        net = schedule_to_network(latin_rectangle(np.ones((2, 2), dtype=np.uint8)), "generation")
        assert len(net) == 4 and net.depth == 2
        for t in (1, 2):
            touched = [b for g in net.gates if g[0] == t for b in g[1:]]
            assert len(touched) == len(set(touched))

    def test_identity_depth(self):
        lr = latin_rectangle(np.eye(3, dtype=np.uint8))
        assert schedule_to_network(lr, "generation").depth == 1
        ver = schedule_to_network(lr, "verification")
        assert ver.depth == 2 and ver.v == 3 and ver.n == 6

    def test_golay_verification(self):
        code = build_golay()
        sf = standard_form(code.H)
        net = build_network(code)
        ones = int(sf.A.sum())
        assert (net.n, net.v) == (23, 12)
        assert len(net) == ones + 12
        assert net.depth == 1 + 7
        assert net.parallelism()[0] == 12
        # every verification bit j checks row j of the generator matrix (A^T | I)
        G = code.generator_matrix()
        for j in range(net.v):
            support = np.zeros(23, dtype=np.uint8)
            for _, r, c in net.gates:
                if r == 23 + j:
                    support[c] = 1
            assert (code.H @ type(code.H)(support[:, None])).is_zero()
        assert G.rows == 12

    def test_golay_generation(self):
        net = build_network(build_golay(), "generation")
        assert len(net) == 77 and net.depth == 7 and net.v == 0

    @pytest.mark.parametrize("kind", ["verification", "generation"])
    def test_steps_disjoint(self, kind):
        net = build_network(build_golay(), kind)
        for t in range(1, net.depth + 1):
            touched = [b for g in net.gates if g[0] == t for b in g[1:]]
            assert len(touched) == len(set(touched))

    def test_network_validation(self):
        with pytest.raises(ValueError, match="twice"):
            LogicalNetwork(((1, 0, 1), (1, 1, 2)), n=3)
        with pytest.raises(ValueError, match="contiguous"):
            LogicalNetwork(((1, 0, 1), (3, 1, 2)), n=3)
        with pytest.raises(ValueError):
            schedule_to_network(latin_rectangle(np.eye(2, dtype=np.uint8)), "bogus")
