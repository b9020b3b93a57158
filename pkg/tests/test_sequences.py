import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from substitution_spectra.sequences import (
    RS_RECODING,
    check_equivalence,
    generate,
    inv2,
    partial_sums,
    recode,
    recoded_fixed_point,
    rs_array,
    rs_direct,
    rsl_array,
    rsl_direct,
)


def inv2_bruteforce(n):
    bits = bin(n)[2:]
    return sum(1 for i in range(len(bits)) for j in range(i + 1, len(bits))
               if bits[i] == "1" and bits[j] == "0")


class TestInv2:
    @pytest.mark.parametrize("n, expected", [(0, 0), (3, 0), (2, 1), (6, 2), (5, 1)])
    def test_examples(self, n, expected):
        assert inv2(n) == expected

    def test_recurrences(self):
        for n in range(1 << 16):
            base = inv2(n)
            assert inv2(2 * n) == base + bin(n).count("1")
            assert inv2(2 * n + 1) == base

    @given(st.integers(0, 1 << 40))
    def test_bruteforce(self, n):
        assert inv2(n) == inv2_bruteforce(n)

    def test_negative(self):
        with pytest.raises(ValueError):
            inv2(-1)


class TestDirect:
    def test_rsl_prefix(self):
        assert [rsl_direct(n) for n in range(8)] == [1, 1, -1, 1, 1, -1, 1, 1]

    @pytest.mark.parametrize("n, expected", [(0, 1), (3, -1), (7, 1)])
    def test_rs_examples(self, n, expected):
        assert rs_direct(n) == expected

    def test_rs_prefix(self):
        # textbook prefix
        assert [rs_direct(n) for n in range(8)] == [1, 1, 1, -1, 1, 1, -1, 1]

    @pytest.mark.parametrize("start", [0, 1, 1000, (1 << 33) - 5])
    def test_arrays_match_scalars(self, start):
        n = 300
        assert rsl_array(n, start).tolist() == [rsl_direct(m) for m in range(start, start + n)]
        assert rs_array(n, start).tolist() == [rs_direct(m) for m in range(start, start + n)]


class TestRecode:
    def test_third_iterate_prefix(self):
        assert recode("01201301") == [1, 1, -1, 1, 1, -1, 1, 1]

    def test_empty(self):
        assert recode("") == []

    def test_single_class(self):
        assert recode("2333") == [-1, -1, -1, -1]

    def test_unknown_letter(self):
        with pytest.raises(ValueError, match="'7'"):
            recode("017")

    def test_rs_mapping(self, rs):
        assert recoded_fixed_point(rs, "a", 8, RS_RECODING).tolist() == [1, 1, 1, -1, 1, 1, -1, 1]


class TestEquivalence:
    @pytest.mark.parametrize("n_max", [1, 8, 1000])
    def test_small(self, n_max):
        assert check_equivalence(n_max) == (True, None)

    def test_rs(self):
        assert check_equivalence(1 << 20, "rs") == (True, None)

    def test_unknown(self):
        with pytest.raises(ValueError):
            check_equivalence(8, "tm")


class TestPartialSums:
    def test_zero(self):
        assert partial_sums("rsl", [0])[0].total == 1

    def test_exact_integers(self):
        seq = generate("rsl", 1001)
        rows = partial_sums(seq, [10, 100, 1000])
        assert [r.total for r in rows] == [int(seq[: n + 1].sum()) for n in (10, 100, 1000)]
        assert rows[1].ratio == rows[1].total / 10 and rows[1].log4N == pytest.approx(math.log(100, 4))

    def test_powers_of_four(self):
        # Sigma(4^k) = 2^k + 1 (hand: 4^k terms sum to 2^k, plus the +1 at n = 4^k)
        rows = partial_sums("rsl", [4**k for k in range(3, 11)])
        assert [r.total for r in rows] == [2**k + 1 for k in range(3, 11)]
        assert all(abs(r.ratio - 1) <= 2.0**-3 for r in rows)

    def test_envelope(self):
        rows = partial_sums("rsl", range(4**5, 4**10 + 1))
        ratios = [r.ratio for r in rows]
        assert abs(min(ratios) - math.sqrt(3) / 3) <= 0.05 * math.sqrt(3) / 3
        assert abs(max(ratios) - math.sqrt(2)) <= 0.05 * math.sqrt(2)

    def test_balance(self):
        seq = generate("rsl", 1 << 20)
        cums = np.cumsum(seq.astype(np.int64))
        n = np.arange(1, cums.size + 1)
        assert (np.abs(cums) <= math.sqrt(2) * np.sqrt(n) * 1.05).all()

    def test_descending(self):
        with pytest.raises(ValueError):
            partial_sums("rsl", [10, 5])

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            generate("nope", 4)
