import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mvif.code import (
    BaseFieldWarning,
    ErrorPattern,
    build_code,
    encode,
    is_codeword,
    minimum_distance,
    parse_code_spec,
    syndrome,
    syndrome_tuple,
    verify_injectivity,
)
from mvif.errors import BadOrder, InjectivityViolated, OverlappingCosets
from mvif.field import make_field

from conftest import gf2_mul, gf2_pow


def _logs(field, values):
    return [field.log[v] for v in values]


def test_qr31_defining_set_and_generator(qr31):
    assert qr31.defining_set == (1, 2, 4, 5, 7, 8, 9, 10, 14, 16, 18, 19, 20, 25, 28)
    assert [k for k, c in enumerate(qr31.generator) if c] == [0, 3, 8, 9, 13, 14, 15]
    assert qr31.base_gcd == 1
    assert qr31.extension_degree == 5


def test_rs15_generator_is_product_of_linear_factors(rs15, gf16):
    # (x + alpha)(x + alpha^2)(x + alpha^3)(x + alpha^4)
    assert _logs(gf16, rs15.generator) == [10, 3, 6, 13, 0]
    for i in (1, 2, 3, 4):
        acc = 0
        for k, c in enumerate(rs15.generator):
            acc ^= gf2_mul(c, gf2_pow(2, i * k, 0x13), 0x13)
        assert acc == 0


def test_rs15_warns_about_base_field(gf16):
    with pytest.warns(BaseFieldWarning):
        build_code(gf16, 15, 16, [1, 2, 3, 4], 2)


def test_build_code_rejections(gf32, gf16):
    with pytest.raises(BadOrder):
        build_code(gf32, 15, 2, [1], 1)
    with pytest.raises(OverlappingCosets):
        build_code(gf32, 31, 2, [1, 2], 1)
    with pytest.raises(ValueError):
        build_code(gf32, 31, 4, [1], 1)
    with pytest.raises(ValueError):
        build_code(gf32, 31, 2, [1], 16)


def test_parse_code_spec_round_trip(qr31):
    assert parse_code_spec(qr31.spec_text()) == qr31
    with pytest.raises(ValueError):
        parse_code_spec("n: 31\nq: 2\n")


def test_qr31_example_syndromes(qr31, gf32):
    e = ErrorPattern((3, 7, 20), (1, 1, 1))
    got = [gf32.log[syndrome(qr31, e, r)] for r in range(1, 7)]
    assert got == [4, 8, 27, 16, 16, 23]
    assert syndrome(qr31, e, 7) == 0
    # independent evaluation with carry-less arithmetic
    for r in range(1, 8):
        direct = 0
        for l in (3, 7, 20):
            direct ^= gf2_pow(2, r * l % 31, 0x25)
        assert syndrome(qr31, e, r) == direct


def test_syndrome_of_word_equals_pattern(qr31):
    e = ErrorPattern((0, 30), (1, 1))
    assert syndrome(qr31, e.word(31), 3) == syndrome(qr31, e, 3)


def test_vectorized_syndromes_match_scalar(rs15):
    table = rs15.syndrome_table([1, 2, 3, 5])
    for i in range(0, len(rs15.patterns), 97):
        pat = rs15.patterns[i]
        assert list(table[i]) == [syndrome(rs15, pat, r) for r in (1, 2, 3, 5)]


def test_pattern_counts(qr31, rs15, golay23):
    assert qr31.pattern_count() == 31 + 465 + 4495 == len(qr31.patterns)
    assert rs15.pattern_count() == 15 * 15 + 105 * 225 == len(rs15.patterns)
    assert golay23.pattern_count() == 23 + 253 + 1771


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=16, max_size=16))
def test_encoded_words_are_codewords(message):
    gf32 = make_field(2, 5, 0x25)
    code = build_code(gf32, 31, 2, [1, 5, 7], 3)
    word = encode(code, message)
    assert is_codeword(code, word)
    for r in code.defining_set:
        assert syndrome(code, word, r) == 0


def test_error_pattern_operations():
    e = ErrorPattern((1, 29), (1, 5))
    assert e.shift(3, 31) == ErrorPattern((1, 4), (5, 1))
    assert e.frobenius(2, 31) == ErrorPattern((2, 27), (1, 5))
    assert ErrorPattern.from_word(e.word(31)) == e
    with pytest.raises(ValueError):
        ErrorPattern((3, 1), (1, 1))
    with pytest.raises(ValueError):
        ErrorPattern((1,), (0,))


def test_shift_multiplies_syndrome_by_beta_power(rs15, gf16):
    e = ErrorPattern((2, 9), (gf16.alpha(4), gf16.alpha(11)))
    for w in range(15):
        for r in (1, 2, 3, 4, 7):
            lhs = syndrome(rs15, e.shift(w, 15), r)
            rhs = gf16.mul(rs15.beta(r * w), syndrome(rs15, e, r))
            assert lhs == rhs


def test_frobenius_permutes_syndromes(qr31, gf32):
    e = ErrorPattern((0, 4, 17), (1, 1, 1))
    for r in range(31):
        assert syndrome(qr31, e.frobenius(2, 31), r) == syndrome(qr31, e, 2 * r % 31)
        assert syndrome(qr31, e, 2 * r % 31) == gf32.pow(syndrome(qr31, e, r), 2)


@pytest.mark.parametrize("name", ["qr31", "rs15", "golay23", "bch15", "bch15_2", "code7"])
def test_injectivity_holds(name, request):
    code = request.getfixturevalue(name)
    report = verify_injectivity(code)
    assert report.ok
    assert report.distinct == code.pattern_count()


def test_injectivity_violation_reported(gf32):
    # BCH-like code with capacity overstated
    code = build_code(gf32, 31, 2, [1], 2)
    with pytest.raises(InjectivityViolated):
        verify_injectivity(code)
    report = verify_injectivity(code, raise_on_failure=False)
    assert not report.ok
    a, b = report.collision
    assert syndrome_tuple(code, a) == syndrome_tuple(code, b)


def test_minimum_distances(qr31, golay23, bch15, code7):
    assert minimum_distance(qr31) == 7
    assert minimum_distance(golay23) == 7
    assert minimum_distance(bch15) == 7
    assert minimum_distance(code7) == 4


def test_minimum_distance_by_brute_force_oracle(code7):
    # every nonzero word with zero syndromes, enumerated directly
    weights = [
        sum(w) for w in itertools.product((0, 1), repeat=7)
        if any(w) and is_codeword(code7, list(w))
    ]
    assert min(weights) == 4
    assert len(weights) == 7


def test_non_primitive_length_code(gf16):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BaseFieldWarning)
        code = build_code(gf16, 5, 4, [1], 1)
    assert code.beta_exp == 3
    assert gf16.order_of(code.beta()) == 5
    assert np.all(code.syndrome_table().shape == (len(code.patterns), 1))
