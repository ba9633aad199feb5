"""Fock states, basis enumeration, state vectors and annotations."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonsim.errors import StateParseError
from photonsim.fock import (FockBasis, FockState, StateVector,
                            expand_polarization, fock_dim, format_state,
                            group_by_tag, parse_state, rank, sv_inner, unrank)

from conftest import binomial_pascal


class TestFockDim:
    def test_small_cases(self):
        assert fock_dim(2, 2) == 3
        assert fock_dim(5, 0) == 1
        assert fock_dim(1, 7) == 1

    def test_large_case_against_pascal_oracle(self):
        # 14 photons over 60 modes: C(73, 14), about 3.7e14 possible outputs
        expected = binomial_pascal(73, 14)
        assert fock_dim(60, 14) == expected == 369731787035040

    def test_pascal_recurrence(self):
        for m in range(2, 21):
            for n in range(1, 21):
                assert fock_dim(m, n) == fock_dim(m - 1, n) + fock_dim(m, n - 1)

    def test_validation(self):
        with pytest.raises(ValueError):
            fock_dim(0, 3)
        with pytest.raises(ValueError):
            fock_dim(3, -1)


class TestRanking:
    def test_ordering_convention(self):
        assert rank(FockState([2, 0])) == 0
        assert rank(FockState([1, 1])) == 1
        assert rank(FockState([0, 2])) == 2
        assert unrank(0, 3, 2) == FockState([2, 0, 0])

    def test_roundtrip_exhaustive(self):
        basis = FockBasis(4, 3)
        assert basis.size == 20
        seen = set()
        for i in range(basis.size):
            state = unrank(i, 4, 3)
            assert rank(state) == i
            seen.add(state.occupations)
        assert len(seen) == 20

    def test_no_duplicates_all_small_sizes(self):
        for m in range(1, 9):
            for n in range(0, 7):
                states = list(FockBasis(m, n).occupation_tuples)
                assert len(states) == len(set(states)) == fock_dim(m, n)

    def test_basis_matches_unrank(self):
        basis = FockBasis(5, 3)
        for i, occ in enumerate(basis.occupation_tuples):
            assert unrank(i, 5, 3).occupations == occ
            assert basis.index(occ) == i

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            unrank(fock_dim(3, 2), 3, 2)
        with pytest.raises(ValueError):
            rank(parse_state("|{a},0>"))

    @given(st.integers(1, 6), st.integers(0, 5), st.data())
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_property(self, m, n, data):
        i = data.draw(st.integers(0, fock_dim(m, n) - 1))
        assert rank(unrank(i, m, n)) == i


class TestStateText:
    def test_plain_roundtrip(self):
        s = FockState([1, 0, 2])
        assert format_state(s) == "|1,0,2>"
        assert parse_state("|1,0,2>") == s

    def test_annotated_roundtrip(self):
        s = parse_state("|{P:H},0>")
        assert s.occupations == (1, 0)
        assert s.annotations == (("P:H",), ())
        assert format_state(s) == "|{P:H},0>"
        two = parse_state("|{P:H,P:V},0>")
        assert two.occupations == (2, 0)
        assert format_state(parse_state(format_state(two))) == format_state(two)

    def test_tag_multiset_canonical(self):
        assert parse_state("|{b,a},0>") == parse_state("|{a,b},0>")

    def test_parse_errors(self):
        for bad in ("1,0", "|>", "|1,x>", "|{a},1>", "|{a,},0>", "|{a},{b>"):
            with pytest.raises(StateParseError):
                parse_state(bad)

    def test_mixing_plain_zero_is_fine(self):
        s = parse_state("|0,{a}>")
        assert s.occupations == (0, 1)

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
    @settings(max_examples=60, deadline=None)
    def test_roundtrip_property(self, occ):
        s = FockState(occ)
        assert parse_state(format_state(s)) == s


class TestFockState:
    def test_invariants(self):
        with pytest.raises(ValueError):
            FockState([1, -1])
        with pytest.raises(ValueError):
            FockState([1, 0], [("a", "b"), ()])
        with pytest.raises(ValueError):
            FockState([])

    def test_counts(self):
        s = FockState([2, 0, 1])
        assert s.n == 3 and s.m == 3
        assert s.photon_modes() == [0, 0, 2]

    def test_immutable_and_hashable(self):
        s = FockState([1, 1])
        with pytest.raises(AttributeError):
            s.occupations = (2, 0)
        assert len({s, FockState([1, 1]), FockState([0, 2])}) == 2


class TestPolarization:
    def test_table4_encodings(self):
        # spatial mode i splits into (2i, 2i+1) = (H, V)
        assert expand_polarization(parse_state("|{P:H},0>")) == \
            parse_state("|1,0,0,0>")
        assert expand_polarization(parse_state("|{P:V},0>")) == \
            parse_state("|0,1,0,0>")
        assert expand_polarization(parse_state("|0,{P:H}>")) == \
            parse_state("|0,0,1,0>")

    def test_preserves_photon_number(self):
        s = parse_state("|{P:H,P:V},{P:V}>")
        assert expand_polarization(s).n == s.n == 3

    def test_rejects_other_tags(self):
        with pytest.raises(ValueError):
            expand_polarization(parse_state("|{a},0>"))
        with pytest.raises(ValueError):
            expand_polarization(parse_state("|1,0>"))


class TestGroupByTag:
    def test_examples(self):
        assert group_by_tag(parse_state("|{a},{a}>")) == \
            [("a", FockState([1, 1]))]
        assert group_by_tag(parse_state("|{a},{b}>")) == \
            [("a", FockState([1, 0])), ("b", FockState([0, 1]))]
        assert group_by_tag(parse_state("|{a,b},0>")) == \
            [("a", FockState([1, 0])), ("b", FockState([1, 0]))]

    def test_partition_reconstructs(self):
        s = parse_state("|{a,b,a},{c},0,{a}>")
        groups = group_by_tag(s)
        totals = [0] * s.m
        for _, part in groups:
            for i, c in enumerate(part.occupations):
                totals[i] += c
        assert tuple(totals) == s.occupations


class TestStateVector:
    def test_inner_products(self):
        one = StateVector.basis(FockState([1, 0]))
        other = StateVector.basis(FockState([0, 1]))
        assert sv_inner(one, one) == 1
        assert sv_inner(one, other) == 0
        plus = (one + other) * (1 / math.sqrt(2))
        assert abs(sv_inner(plus, one) - 1 / math.sqrt(2)) < 1e-12

    def test_conjugate_linearity(self):
        a = StateVector({FockState([1, 0]): 1j})
        b = StateVector({FockState([1, 0]): 2.0})
        assert sv_inner(a, b) == -2j
        assert sv_inner(b, a) == 2j

    def test_mode_count_mismatch(self):
        with pytest.raises(ValueError):
            sv_inner(StateVector.basis(FockState([1])),
                     StateVector.basis(FockState([1, 0])))

    def test_normalized_prunes(self):
        sv = StateVector({FockState([1, 0]): 1.0, FockState([0, 1]): 1e-14})
        out = sv.normalized()
        assert len(out) == 1
        assert abs(out.norm_sq() - 1.0) < 1e-12

    def test_zero_norm(self):
        with pytest.raises(ValueError):
            StateVector({FockState([1]): 0.0}).normalized()

    def test_empty_needs_mode_count(self):
        with pytest.raises(ValueError):
            StateVector({})
        assert StateVector({}, m=3).norm_sq() == 0.0
