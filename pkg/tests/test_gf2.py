"""Bit-level linear algebra: conventions, echelon bookkeeping, duality."""

from __future__ import annotations

import random

import pytest

from theta3.gf2 import (
    MAX_DIM,
    DimensionError,
    Echelon,
    GF2Matrix,
    GF2Vector,
    InvalidBasisError,
    bits_from_str,
    bits_to_str,
    dual_representation,
    in_span,
    rank_bits,
    standard_form,
)

from oracles import span_of


# -- string convention: the leading character is row 1 ---------------------


def test_bits_from_str_row_one_first():
    assert bits_from_str("10") == 1
    assert bits_from_str("01") == 2
    assert bits_from_str("110000") == 3
    assert bits_from_str("000001") == 32


def test_bits_round_trip():
    for bits in range(64):
        assert bits_from_str(bits_to_str(bits, 6)) == bits


def test_bits_from_str_rejects_junk():
    with pytest.raises(ValueError):
        bits_from_str("10x1")


def test_vector_str_matches_convention():
    v = GF2Vector(3, 6)
    assert str(v) == "110000"
    assert v.weight() == 2


def test_vector_dim_guard():
    with pytest.raises(ValueError):
        GF2Vector(4, 2)
    with pytest.raises(DimensionError):
        GF2Vector(1, MAX_DIM + 1)


def test_vector_xor_requires_same_dim():
    assert (GF2Vector(3, 4) ^ GF2Vector(5, 4)).bits == 6
    with pytest.raises(ValueError):
        GF2Vector(1, 3) ^ GF2Vector(1, 4)


# -- echelon ---------------------------------------------------------------


def test_echelon_rank_and_membership_match_span_counting():
    rng = random.Random(11)
    for _ in range(50):
        dim = rng.randint(1, 8)
        cols = [rng.randrange(1 << dim) for _ in range(rng.randint(0, 10))]
        ech = Echelon()
        for c in cols:
            ech.insert(c)
        span = span_of(cols)
        assert (1 << ech.rank) == len(span)
        assert rank_bits(cols) == ech.rank
        for probe in range(1 << dim):
            assert (ech.residue(probe) == 0) == (probe in span)


def test_echelon_insert_reports_pivot_and_remove_undoes_it():
    ech = Echelon()
    assert ech.insert(0b110) != 0
    before = dict(ech.pivots)
    piv = ech.insert(0b011)
    assert piv != 0
    ech.remove(piv)
    assert ech.pivots == before
    assert ech.insert(0b110) == 0  # still dependent on the survivor


def test_echelon_tracked_residue_returns_witness_origin():
    ech = Echelon()
    ech.insert(0b001, origin=1)
    ech.insert(0b010, origin=2)
    res, orig = ech.tracked_residue(0b011)
    assert res == 0
    assert orig == 3  # both inserted vectors participate


def test_full_residue_is_canonical_under_insertion_order():
    rng = random.Random(5)
    cols = [rng.randrange(1 << 6) for _ in range(6)]
    reference = None
    for _ in range(10):
        rng.shuffle(cols)
        ech = Echelon()
        for c in cols:
            ech.insert(c)
        image = tuple(ech.full_residue(v) for v in range(64))
        if reference is None:
            reference = image
        # the canonical residue depends only on the span, not the order
        assert image == reference


def test_in_span_agrees_with_oracle():
    cols = [GF2Vector(c, 4) for c in (3, 5, 9)]
    span = span_of(c.bits for c in cols)
    for probe in range(16):
        assert in_span(GF2Vector(probe, 4), cols) == (probe in span)


# -- matrices, change of basis, duality ------------------------------------


def test_matrix_from_strs_and_dim():
    m = GF2Matrix.from_strs(["110", "011", "001"])
    assert m.dim == 3
    assert len(m) == 3
    assert m.columns[0].bits == 3


def test_matrix_rejects_mixed_dims():
    with pytest.raises(ValueError):
        GF2Matrix((GF2Vector(1, 2), GF2Vector(1, 3)))


def test_standard_form_rewrites_in_basis_coordinates():
    # basis {e1+e2, e2+e3, e3}: expressing e1 needs all three
    m = GF2Matrix.from_strs(["110", "011", "001", "100"])
    out = standard_form(m, [0, 1, 2])
    assert [c.bits for c in out.columns[:3]] == [1, 2, 4]
    assert out.columns[3].bits == 0b111


def test_standard_form_rejects_dependent_basis():
    # {e1+e2, e1+e3, e2+e3} sums to zero, so it spans only a plane
    m = GF2Matrix.from_strs(["110", "101", "011"])
    with pytest.raises(InvalidBasisError):
        standard_form(m, [0, 1, 2])


def test_dual_representation_is_orthogonal_complement():
    rng = random.Random(23)
    for _ in range(40):
        dim = rng.randint(1, 6)
        n = rng.randint(1, 8)
        cols = [rng.randrange(1 << dim) for _ in range(n)]
        r = rank_bits(cols)
        m = GF2Matrix(tuple(GF2Vector(c, dim) for c in cols))
        d = dual_representation(m)
        assert len(d) == n
        assert d.dim == n - r
        assert rank_bits(c.bits for c in d.columns) == n - r
        # every dual row is orthogonal to every primal row
        primal_rows = _rows(cols, dim, n)
        dual_rows = _rows([c.bits for c in d.columns], d.dim, n)
        for pr in primal_rows:
            for dr in dual_rows:
                assert bin(pr & dr).count("1") % 2 == 0


def _rows(cols: list[int], dim: int, n: int) -> list[int]:
    rows = []
    for r in range(dim):
        bits = 0
        for i, c in enumerate(cols):
            if c >> r & 1:
                bits |= 1 << i
        rows.append(bits)
    return rows
