"""One-step decoding of cyclic codes.

Two pipelines share the root-finding tail:

* ``decode_one_step``: known syndromes, unknown ones from artifacts (or by
  Frobenius from an earlier entry), inverse-free Berlekamp-Massey, then
  Chien search and Forney.
* ``decode_gelp``: known syndromes substituted into the locator-coefficient
  artifacts give the locator directly, then Chien search and Forney.

Every successful decode is re-checked: the recovered error must reproduce the
received word's known syndromes.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .code import ErrorPattern, syndrome
from .errors import MissingArtifact, ZeroDerivativeAtRoot
from .field import cyclotomic_coset
from .poly import uni_derivative, uni_eval, uni_mul_mod, uni_shift, uni_trim

SUCCESS = "success"
FAILURE = "failure"
ROOT_COUNT = "root-count mismatch"
RECHECK = "syndrome recheck failed"
ZERO_DERIVATIVE = "zero derivative"


@dataclass
class BMTraceRow:
    k: int
    delta: object  # None on row 0
    C: list
    A: list
    l: int
    gamma: int


@dataclass
class DecodeResult:
    status: str
    reason: str = None
    received: list = None
    error: ErrorPattern = None
    codeword: list = None
    syndromes: list = dc_field(default_factory=list)
    provenance: list = dc_field(default_factory=list)
    locator: list = dc_field(default_factory=list)
    locations: list = dc_field(default_factory=list)
    magnitudes: list = dc_field(default_factory=list)
    trace: list = None

    @property
    def ok(self):
        return self.status == SUCCESS


def ifbma(field, S):
    """Inverse-free Berlekamp-Massey over ``S = [S_1, ..., S_2t]``.

    Returns the final connection polynomial (a nonzero scalar multiple of the
    locator) and one trace row per iteration, row 0 being the initial state.
    """
    C, A, l, gamma = [1], [1], 0, 1
    trace = [BMTraceRow(0, None, list(C), list(A), l, gamma)]
    for k in range(len(S)):
        delta = 0
        for i, c in enumerate(C):
            if c and k - i >= 0:
                delta = field.add(delta, field.mul(c, S[k - i]))
        xA = uni_shift(A)
        new_C = uni_trim(
            [field.sub(field.mul(gamma, a), field.mul(delta, b))
             for a, b in _zip_pad(C, xA)]
        )
        if delta and 2 * l <= k:
            A, gamma, l = C, delta, k + 1 - l
        else:
            A = xA
        C = new_C
        trace.append(BMTraceRow(k + 1, delta, list(C), list(A), l, gamma))
    return C, trace


def _zip_pad(a, b):
    size = max(len(a), len(b))
    return zip(list(a) + [0] * (size - len(a)), list(b) + [0] * (size - len(b)))


def assemble_syndromes(code, received, artifacts=None):
    """``S_1..S_2t`` of a received word with provenance tags.

    Entries in the defining set are evaluated directly ("known"); stored
    artifact residues are evaluated from the base-set syndromes ("artifact");
    the rest come from an earlier entry of the same cyclotomic coset by
    Frobenius ("conjugate").
    """
    artifacts = _by_residue(artifacts)
    f = code.field
    base = tuple(syndrome(code, received, r) for r in code.base_set)
    known = set(code.defining_set)
    S, tags = [], []
    for i in range(1, 2 * code.t + 1):
        r = i % code.n
        if r in known:
            S.append(syndrome(code, received, r))
            tags.append("known")
        elif r in artifacts:
            S.append(artifacts[r].evaluate(f, base))
            tags.append("artifact")
        else:
            for j in range(1, i):
                if r in cyclotomic_coset(j, code.n, code.q):
                    power = _frobenius_power(j, r, code.n, code.q)
                    S.append(f.pow(S[j - 1], code.q ** power))
                    tags.append("conjugate")
                    break
            else:
                raise MissingArtifact(r)
    return S, tags


def _frobenius_power(j, r, n, q):
    w, x = 0, j % n
    while x != r:
        x = x * q % n
        w += 1
    return w


def _by_residue(artifacts):
    if artifacts is None:
        return {}
    if isinstance(artifacts, dict):
        return artifacts
    return {a.index: a for a in artifacts}


def chien_search(code, locator):
    """Positions ``i`` with ``locator(beta^-i) == 0``, ascending."""
    f = code.field
    return [i for i in range(code.n) if uni_eval(f, locator, code.beta(-i)) == 0]


def forney(code, locator, S, locations):
    """Error magnitudes ``-Omega(X^-1) / sigma'(X^-1)`` at each location,
    with ``Omega = S(x) sigma(x) mod x^v`` and ``v = len(locations)``."""
    f = code.field
    if code.q == 2:
        return [1] * len(locations)
    v = len(locations)
    omega = uni_mul_mod(f, list(S), list(locator), min(len(S), v))
    deriv = uni_derivative(f, locator)
    out = []
    for i in locations:
        x = code.beta(-i)
        d = uni_eval(f, deriv, x)
        if d == 0:
            raise ZeroDerivativeAtRoot(f"sigma' vanishes at the root for position {i}")
        out.append(f.neg(f.div(uni_eval(f, omega, x), d)))
    return out


def evaluator_polynomial(code, locator, S, v=None):
    """``Omega = S(x) sigma(x) mod x^2t``, optionally truncated below ``x^v``."""
    k = len(S) if v is None else min(len(S), v)
    return uni_mul_mod(code.field, list(S), list(locator), k)


def _finish(code, received, locator, S, tags, trace):
    f = code.field
    result = DecodeResult(
        FAILURE, received=list(received), syndromes=S, provenance=tags,
        locator=uni_trim(locator), trace=trace,
    )
    locator = result.locator
    if not locator:
        result.reason = ROOT_COUNT
        return result
    locs = chien_search(code, locator)
    result.locations = locs
    if len(locs) != len(locator) - 1:
        result.reason = ROOT_COUNT
        return result
    try:
        mags = forney(code, locator, S, locs)
    except ZeroDerivativeAtRoot:
        result.reason = ZERO_DERIVATIVE
        return result
    result.magnitudes = mags
    if any(m == 0 or not f.in_subfield(m, code.q) for m in mags):
        result.reason = RECHECK
        return result
    error = ErrorPattern(tuple(locs), tuple(mags))
    if any(syndrome(code, error, r) != syndrome(code, received, r) for r in code.base_set):
        result.reason = RECHECK
        return result
    ew = error.word(code.n)
    result.status = SUCCESS
    result.error = error
    result.codeword = [f.sub(a, b) for a, b in zip(received, ew)]
    return result


def _check_word(code, received):
    received = [int(x) for x in received]
    if len(received) != code.n:
        raise ValueError(f"received word has length {len(received)}, expected {code.n}")
    if any(not code.field.in_subfield(x, code.q) for x in received):
        raise ValueError("received word has symbols outside the code alphabet")
    return received


def decode_one_step(code, received, artifacts=None, trace=False):
    received = _check_word(code, received)
    S, tags = assemble_syndromes(code, received, artifacts)
    locator, rows = ifbma(code.field, S)
    return _finish(code, received, locator, S, tags, rows if trace else None)


def decode_gelp(code, received, gelp_artifacts):
    received = _check_word(code, received)
    f = code.field
    S = [syndrome(code, received, i) for i in range(1, 2 * code.t + 1)]
    known = set(code.defining_set)
    tags = ["known" if i % code.n in known else "unused" for i in range(1, 2 * code.t + 1)]
    base = tuple(syndrome(code, received, r) for r in code.base_set)
    coeffs = {a.index: a.evaluate(f, base) for a in gelp_artifacts}
    locator = [1] + [coeffs.get(i, 0) for i in range(1, code.t + 1)]
    return _finish(code, received, locator, S, tags, None)


PIPELINES = ("one-step", "gelp")


class CyclicCodeDecoder(BaseEstimator):
    """Estimator facade over both decoding pipelines.

    ``fit`` builds (or loads from ``cache_dir``) the artifacts the chosen
    pipeline needs; ``X`` is ignored.  ``predict`` maps an ``(m, n)`` array of
    received words to corrected codewords, passing failed rows through
    unchanged; use :meth:`decode` for the full report.
    """

    def __init__(self, code=None, pipeline="one-step", builder="orbit", cache_dir=None):
        self.code = code
        self.pipeline = pipeline
        self.builder = builder
        self.cache_dir = cache_dir

    def fit(self, X=None, y=None):
        from .representations import (
            ArtifactCache,
            build_gelp_coefficients,
            build_unknown_syndrome_rep,
            needed_unknown_residues,
        )

        if self.code is None:
            raise ValueError("code must be set before fitting")
        if self.pipeline not in PIPELINES:
            raise ValueError(f"pipeline must be one of {PIPELINES}")
        cache = ArtifactCache(self.cache_dir) if self.cache_dir is not None else None
        if self.pipeline == "one-step":
            residues = needed_unknown_residues(self.code)
            if cache is not None:
                arts = [cache.unknown_syndrome(self.code, r, builder=self.builder) for r in residues]
            else:
                arts = [build_unknown_syndrome_rep(self.code, r, builder=self.builder) for r in residues]
        else:
            if cache is not None:
                arts = cache.gelp(self.code, builder=self.builder)
            else:
                arts = build_gelp_coefficients(self.code, builder=self.builder)
        self.artifacts_ = arts
        self.n_features_in_ = self.code.n
        return self

    def decode(self, received, trace=False):
        check_is_fitted(self, "artifacts_")
        if self.pipeline == "one-step":
            return decode_one_step(self.code, received, self.artifacts_, trace=trace)
        return decode_gelp(self.code, received, self.artifacts_)

    def decode_batch(self, X):
        X = check_array(X, dtype=np.int64)
        return [self.decode(row) for row in X]

    def predict(self, X):
        X = check_array(X, dtype=np.int64)
        out = X.copy()
        for i, res in enumerate(self.decode_batch(X)):
            if res.ok:
                out[i] = res.codeword
        return out
