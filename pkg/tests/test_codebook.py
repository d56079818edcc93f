"""Code construction: monomial basis, recursive generator, membership."""

import itertools
import math

import numpy as np
import pytest

from subrm import gf2
from subrm.codebook import (
    CodeSpec,
    blocks,
    build_code,
    build_generator_recursive,
    contains,
    dimension_formula,
    encode,
    eval_monomial,
    min_distance_formula,
    monomial_basis,
    rm_generator,
)
from subrm.gf2 import BitMatrix, BitVector


def test_spec_validation():
    with pytest.raises(ValueError):
        CodeSpec(0, 2)
    with pytest.raises(ValueError):
        CodeSpec(2, 2, r=3)
    with pytest.raises(ValueError):
        CodeSpec(2, 2, r_prime=0)
    spec = CodeSpec(3, 2)
    assert spec.v == 6 and spec.n == 64


def test_blocks():
    assert blocks(2, 3) == [frozenset({1, 2, 3}), frozenset({4, 5, 6})]


def test_eval_monomial_basics():
    # x1 varies fastest: coordinate p has x_j = bit j-1 of p
    assert list(eval_monomial((1,), 2)) == [0, 1, 0, 1]
    assert list(eval_monomial((2,), 2)) == [0, 0, 1, 1]
    assert list(eval_monomial((1, 2), 2)) == [0, 0, 0, 1]
    assert list(eval_monomial((), 2)) == [1, 1, 1, 1]


def test_eval_monomial_weight():
    # eval of a degree-t monomial has weight 2^(v-t)
    for v in (3, 4, 5):
        for t in range(v + 1):
            word = eval_monomial(tuple(range(1, t + 1)), v)
            assert word.weight() == 1 << (v - t)


def test_monomial_basis_block_filter():
    basis = monomial_basis(CodeSpec(2, 2))
    assert () in basis
    for j in (1, 2, 3, 4):
        assert (j,) in basis
    # same-block pairs excluded, cross-block pairs kept
    assert (1, 2) not in basis and (3, 4) not in basis
    for pair in [(1, 3), (1, 4), (2, 3), (2, 4)]:
        assert pair in basis
    assert len(basis) == 9


def test_dimension_and_distance_formulas():
    cases = {
        (2, 2): (9, 4),
        (3, 2): (19, 16),
        (2, 3): (16, 16),
        (4, 2): (33, 64),
        (3, 3): (37, 128),
        (5, 2): (51, 256),
    }
    for (m, mp), (k, d) in cases.items():
        spec = CodeSpec(m, mp)
        assert dimension_formula(spec) == k
        assert min_distance_formula(spec) == d
        code = build_code(spec)
        assert (code.n, code.k, code.dmin) == (spec.n, k, d)


def test_dimension_formula_general_orders():
    # r = 0 gives repetition, r = m the full product of the base code
    for m, mp, rp in [(3, 2, 1), (2, 3, 2)]:
        k0 = sum(math.comb(mp, i) for i in range(rp + 1))
        assert dimension_formula(CodeSpec(m, mp, r=0, r_prime=rp)) == 1
        assert dimension_formula(CodeSpec(m, mp, r=m, r_prime=rp)) == k0**m


def test_kron_evaluation_order():
    # eval over v = l' + l of f'(first l' vars) * f(remaining vars) equals
    # kron(eval f, eval f') with the second factor varying fastest
    for lp, l in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        for sp in itertools.chain([()], itertools.combinations(range(1, lp + 1), 1)):
            for s in itertools.chain([()], itertools.combinations(range(1, l + 1), 1)):
                fp = eval_monomial(sp, lp)
                f = eval_monomial(s, l)
                joint = eval_monomial(
                    tuple(sp) + tuple(x + lp for x in s), lp + l
                )
                kr = gf2.kron(BitMatrix((f.bits,), 1 << l), BitMatrix((fp.bits,), 1 << lp))
                assert kr.row(0) == joint


def test_recursive_generator_matches_monomial_basis():
    for m, mp in [(2, 2), (3, 2), (2, 3), (4, 2), (6, 2)]:
        spec = CodeSpec(m, mp)
        code = build_code(spec)
        rec = build_generator_recursive(spec)
        assert rec.nrows == code.k
        assert gf2.rref(rec)[0] == gf2.rref(code.generator)[0]


def test_sandwich_between_rm1_and_rm2():
    for m, mp in [(2, 2), (3, 2), (2, 3)]:
        spec = CodeSpec(m, mp)
        code = build_code(spec)
        v = spec.v
        # every RM(1,v) row is a codeword
        for row in rm_generator(1, v).rows:
            assert contains(code, BitVector(row, code.n))
        # every codeword generator row lies in RM(2,v)
        rm2_rows = rm_generator(2, v)
        red, _ = gf2.rref(rm2_rows)
        for row in code.generator.rows:
            acc = row
            for rrow in red.rows:
                if acc & (rrow & -rrow):
                    acc ^= rrow
            assert acc == 0


def test_translation_automorphism():
    # c(x + a) is a codeword for every codeword c and shift a
    rng = np.random.default_rng(5)
    for m, mp in [(2, 2), (3, 2)]:
        code = build_code(CodeSpec(m, mp))
        for _ in range(20):
            msg = rng.integers(0, 2, code.k)
            cw = encode(code, msg)
            a = int(rng.integers(1, code.n))
            arr = cw.to_array()
            shifted = arr[np.arange(code.n) ^ a]
            assert contains(code, gf2.vector_from_array(shifted))


def test_encode_contains_roundtrip():
    code = build_code(CodeSpec(2, 2))
    rng = np.random.default_rng(9)
    seen = set()
    for _ in range(50):
        msg = rng.integers(0, 2, code.k)
        cw = encode(code, msg)
        assert contains(code, cw)
        seen.add(cw.bits)
    # distinct messages map to distinct codewords
    assert len(seen) > 30
    assert not contains(code, BitVector(0b1, code.n))


def test_information_set_pivots():
    code = build_code(CodeSpec(2, 2))
    info = code.information_set
    assert len(info) == code.k
    assert list(info) == sorted(info)
    # prescribing values on the information set pins down one codeword
    ech, pivots = code._echelon()
    word = ech.rows[0] ^ ech.rows[3]
    assert code.reduce(word) == 0


def test_rm_generator_dims():
    for r, v in [(1, 4), (2, 4), (2, 8)]:
        gen = rm_generator(r, v)
        assert gen.nrows == sum(math.comb(v, i) for i in range(r + 1))
        assert gen.ncols == 1 << v
        assert gf2.rank(gen) == gen.nrows
