import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mvif.code import ErrorPattern, encode, syndrome
from mvif.decoder import (
    CyclicCodeDecoder,
    assemble_syndromes,
    chien_search,
    decode_gelp,
    decode_one_step,
    evaluator_polynomial,
    forney,
    ifbma,
)
from mvif.errors import MissingArtifact
from mvif.poly import uni_eval, uni_from_roots

Z = None  # zero coefficient in log notation

# (k, delta, C, A, l, gamma) as alpha exponents, lowest degree first
QR31_TRACE = [
    (0, "n.a.", [0], [0], 0, 0),
    (1, 4, [0, 4], [0], 1, 4),
    (2, Z, [4, 8], [Z, 0], 1, 4),
    (3, 9, [8, 12, 9], [4, 8], 2, 9),
    (4, Z, [17, 21, 18], [Z, 4, 8], 2, 9),
    (5, 17, [26, 30, 17, 25], [17, 21, 18], 3, 17),
    (6, Z, [12, 16, 3, 11], [Z, 17, 21, 18], 3, 17),
]


def _logs(field, values):
    return [Z if v == 0 else field.log[v] for v in values]


def _qr31_received():
    return ErrorPattern((3, 7, 20), (1, 1, 1)).word(31)


def test_qr31_syndrome_assembly(qr31, qr31_s3, gf32):
    S, tags = assemble_syndromes(qr31, _qr31_received(), [qr31_s3])
    assert _logs(gf32, S) == [4, 8, 27, 16, 16, 23]
    assert tags == ["known", "known", "artifact", "known", "known", "conjugate"]


def test_qr31_ifbma_trace(qr31, qr31_s3, gf32):
    S, _ = assemble_syndromes(qr31, _qr31_received(), [qr31_s3])
    _, trace = ifbma(gf32, S)
    assert len(trace) == len(QR31_TRACE)
    for row, (k, delta, C, A, l, gamma) in zip(trace, QR31_TRACE):
        assert row.k == k
        if k == 0:
            assert row.delta is None
        else:
            assert _logs(gf32, [row.delta]) == [delta]
        assert _logs(gf32, row.C) == C
        assert _logs(gf32, row.A) == A
        assert row.l == l
        assert gf32.log[row.gamma] == gamma


def test_qr31_decode(qr31, qr31_s3):
    res = decode_one_step(qr31, _qr31_received(), [qr31_s3], trace=True)
    assert res.ok
    assert res.locations == [3, 7, 20]
    assert res.codeword == [0] * 31
    assert res.error == ErrorPattern((3, 7, 20), (1, 1, 1))
    assert len(res.trace) == 7


def test_rs15_decode(rs15, rs15_gelp, gf16):
    a = gf16.alpha
    received = ErrorPattern((2, 14), (a(6), a(5))).word(15)
    base = [syndrome(rs15, received, r) for r in rs15.base_set]
    assert _logs(gf16, base) == [5, 12, 7, 7]
    res = decode_gelp(rs15, received, rs15_gelp)
    assert res.ok
    assert _logs(gf16, res.locator) == [0, 13, 1]
    assert res.locations == [2, 14]
    assert _logs(gf16, res.magnitudes) == [6, 5]
    assert res.codeword == [0] * 15


def test_rs15_evaluator_polynomial(rs15, rs15_gelp, gf16):
    a = gf16.alpha
    e = ErrorPattern((2, 14), (a(6), a(5)))
    S = [syndrome(rs15, e, i) for i in range(1, 5)]
    locator = [1, a(13), a(1)]
    omega = evaluator_polynomial(rs15, locator, S, v=2)
    # oracle: sum_i e_i X_i prod_{j != i} (1 - X_j x)
    X = [rs15.beta(2), rs15.beta(14)]
    c = list(e.magnitudes)
    oracle = [
        gf16.add(gf16.mul(c[0], X[0]), gf16.mul(c[1], X[1])),
        gf16.add(gf16.mul(gf16.mul(c[0], X[0]), X[1]), gf16.mul(gf16.mul(c[1], X[1]), X[0])),
    ]
    assert omega == oracle
    assert _logs(gf16, omega) == [5, 10]


def test_rs15_one_step_pipeline_without_artifacts(rs15, gf16):
    # every S_1..S_4 is known for this code
    a = gf16.alpha
    received = ErrorPattern((2, 14), (a(6), a(5))).word(15)
    res = decode_one_step(rs15, received)
    assert res.ok and set(res.provenance) == {"known"}
    assert res.locations == [2, 14]


def test_single_error_forney(rs15, gf16):
    for c in range(1, 16):
        e = ErrorPattern((0,), (c,))
        S = [syndrome(rs15, e, i) for i in range(1, 5)]
        locator = uni_from_roots(gf16, [rs15.beta(0)])
        assert forney(rs15, locator, S, [0]) == [c]


def test_chien_search_roots(qr31):
    locator = uni_from_roots(qr31.field, [qr31.beta(l) for l in (0, 13, 30)])
    assert chien_search(qr31, locator) == [0, 13, 30]


def test_locator_scale_invariance(rs15, gf16):
    a = gf16.alpha
    e = ErrorPattern((4, 9), (a(2), a(11)))
    S = [syndrome(rs15, e, i) for i in range(1, 5)]
    locator = uni_from_roots(gf16, [rs15.beta(4), rs15.beta(9)])
    scaled = [gf16.mul(c, a(7)) for c in locator]
    assert forney(rs15, locator, S, [4, 9]) == forney(rs15, scaled, S, [4, 9]) == [a(2), a(11)]


def test_ifbma_output_proportional_to_locator(rs15, gf16):
    rng = np.random.default_rng(5)
    for _ in range(50):
        w = int(rng.integers(1, 3))
        pos = sorted(rng.choice(15, w, replace=False).tolist())
        mags = rng.integers(1, 16, w).tolist()
        e = ErrorPattern(tuple(pos), tuple(mags))
        S = [syndrome(rs15, e, i) for i in range(1, 5)]
        C, _ = ifbma(gf16, S)
        for l in range(15):
            root = uni_eval(gf16, C, rs15.beta(-l)) == 0
            assert root == (l in pos)


def test_codeword_decodes_to_empty_error(qr31, qr31_s3):
    word = encode(qr31, [1, 0, 1, 1])
    res = decode_one_step(qr31, word, [qr31_s3])
    assert res.ok and res.locations == [] and res.codeword == word


def test_missing_artifact(qr31):
    with pytest.raises(MissingArtifact):
        decode_one_step(qr31, _qr31_received())


def test_beyond_capacity_never_miscorrects_silently(qr31, qr31_s3):
    # weight 4: either a failure, or a genuine codeword within distance t
    rng = np.random.default_rng(11)
    for _ in range(200):
        pos = sorted(rng.choice(31, 4, replace=False).tolist())
        word = ErrorPattern(tuple(pos), (1,) * 4).word(31)
        res = decode_one_step(qr31, word, [qr31_s3])
        if res.ok:
            assert all(syndrome(qr31, res.codeword, r) == 0 for r in qr31.base_set)
            assert res.error.weight <= 3
        else:
            assert res.reason in ("root-count mismatch", "syndrome recheck failed")


def test_received_word_validation(qr31, qr31_s3):
    with pytest.raises(ValueError):
        decode_one_step(qr31, [0] * 30, [qr31_s3])
    with pytest.raises(ValueError):
        decode_one_step(qr31, [2] + [0] * 30, [qr31_s3])


def test_decoder_estimator(qr31, tmp_path):
    est = CyclicCodeDecoder(code=qr31, cache_dir=tmp_path)
    assert est.get_params() == {
        "code": qr31, "pipeline": "one-step", "builder": "orbit", "cache_dir": tmp_path,
    }
    with pytest.raises(NotFittedError):
        est.predict([[0] * 31])
    est.fit()
    assert [a.index for a in est.artifacts_] == [3]
    X = np.array([_qr31_received(), [0] * 31, ErrorPattern((1, 2, 3, 4), (1, 1, 1, 1)).word(31)])
    out = est.predict(X)
    assert out[0].tolist() == [0] * 31
    assert out[1].tolist() == [0] * 31
    assert out.shape == X.shape
    assert not hasattr(clone(est), "artifacts_")


def test_decoder_estimator_gelp(rs15, gf16):
    est = CyclicCodeDecoder(code=rs15, pipeline="gelp").fit()
    a = gf16.alpha
    word = ErrorPattern((2, 14), (a(6), a(5))).word(15)
    assert est.decode(word).locations == [2, 14]
    assert est.predict([word]).tolist() == [[0] * 15]


def test_decoder_estimator_validation(qr31):
    with pytest.raises(ValueError):
        CyclicCodeDecoder().fit()
    with pytest.raises(ValueError):
        CyclicCodeDecoder(code=qr31, pipeline="euclid").fit()
