from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import bruteforce as bf
from dilates import (
    CapExceeded,
    ap,
    compress_full,
    dilate_sum,
    doubling_K,
    is_compressed,
    kl_grid,
    kl_upper_envelope,
    random_ideal,
)
from dilates.constructions import cube_like_ideal, kl_grid_dilate_size


class TestGrid:
    def test_trivial(self):
        assert kl_grid(1, 3).tuples() == [(0,)]

    def test_two_by_two(self):
        G = kl_grid(2, 2)
        assert len(G) == 4 and len(dilate_sum(G)) == 12

    def test_four_by_four(self):
        G = kl_grid(4, 2)
        assert len(G) == 16 and len(dilate_sum(G)) == 112

    @pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 7) for m in range(1, 5)])
    def test_closed_form_against_bruteforce(self, n, m):
        box = list(product(range(n), repeat=m))
        expected = len(bf.dilate(box))
        assert kl_grid_dilate_size(n, m) == expected
        G = kl_grid(n, m)
        assert len(G) == n**m and is_compressed(G)
        assert len(dilate_sum(G)) == expected

    def test_cap(self):
        with pytest.raises(CapExceeded):
            kl_grid(10, 7)


class TestEnvelope:
    def test_m1(self):
        r = kl_upper_envelope(1)
        assert r.inputs["|A|"] == 2 and r.lhs == 4 and r.rhs == 16 and r.passed

    def test_m2(self):
        r = kl_upper_envelope(2)
        assert r.inputs["|A|"] == 16 and r.lhs == 112 and r.rhs == 2**9 and r.passed

    def test_m3(self):
        r = kl_upper_envelope(3)
        assert r.inputs["|A|"] == 512 and r.rhs == 2**16 and r.passed
        assert r.inputs["method"] == "enumerated"

    def test_beyond_exact_limit_uses_formula(self):
        r = kl_upper_envelope(5)
        assert r.inputs["method"] == "closed_form" and r.passed


class TestProgression:
    @pytest.mark.parametrize("n", [1, 2, 5, 10])
    def test_square(self, n):
        A = ap(n)
        assert len(A) == n and len(dilate_sum(A)) == n * n
        assert doubling_K(A) == n

    def test_grids_beat_progressions(self):
        # same size 16: the 2-dimensional grid has a much smaller dilate sum
        assert len(dilate_sum(kl_grid(4, 2))) < len(dilate_sum(ap(16)))
        assert len(dilate_sum(kl_grid(2, 4))) < len(dilate_sum(ap(16)))


class TestRandomIdeal:
    def test_examples(self):
        assert random_ideal(1, 3, 7).tuples() == [(0,)]
        assert random_ideal(3, 1, 7).tuples() == [(0,), (1,), (2,)]
        A = random_ideal(5, 2, 7)
        assert len(A) == 5 and is_compressed(A)

    def test_deterministic(self):
        assert random_ideal(40, 3, 11) == random_ideal(40, 3, 11)
        assert any(random_ideal(40, 3, s) != random_ideal(40, 3, 11) for s in range(5))

    @given(st.integers(1, 80), st.integers(1, 4), st.integers(0, 10**6))
    def test_invariants(self, n, d, seed):
        A = random_ideal(n, d, seed)
        assert len(A) == n and A.dim <= d
        assert bf.downward_closed(A.tuples())
        assert compress_full(A) == A


@given(st.integers(1, 60), st.integers(1, 4))
def test_cube_like_prefix_is_ideal(n, d):
    A = cube_like_ideal(n, d)
    assert len(A) == n and is_compressed(A)
