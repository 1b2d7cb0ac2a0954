"""Cyclic codes, correctable error patterns and syndromes."""

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property
from math import comb, gcd

import numpy as np

from .errors import (
    BadOrder,
    CoefficientOutsideSubfield,
    GeneratorNotOverSubfield,
    InjectivityViolated,
    OverlappingCosets,
)
from .field import cyclotomic_coset, minimal_polynomial, parse_field_triple
from .poly import uni_eval, uni_mul

MAX_ENUMERATION = 10 ** 7


class BaseFieldWarning(UserWarning):
    """gcd(n, q - 1) != 1: the base-field guarantees are only reported."""


@dataclass(frozen=True, order=True)
class ErrorPattern:
    """Nonzero positions (strictly increasing) and their magnitudes."""

    positions: tuple
    magnitudes: tuple

    def __post_init__(self):
        if len(self.positions) != len(self.magnitudes):
            raise ValueError("positions and magnitudes differ in length")
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError(f"positions {self.positions} not strictly increasing")
        if any(c == 0 for c in self.magnitudes):
            raise ValueError("zero magnitude in error pattern")

    @classmethod
    def from_entries(cls, entries):
        entries = sorted(entries)
        return cls(tuple(l for l, _ in entries), tuple(c for _, c in entries))

    @classmethod
    def from_word(cls, word):
        return cls.from_entries((l, c) for l, c in enumerate(word) if c)

    @property
    def weight(self):
        return len(self.positions)

    def entries(self):
        return list(zip(self.positions, self.magnitudes))

    def word(self, n):
        out = [0] * n
        for l, c in self.entries():
            out[l] = c
        return out

    def shift(self, w, n):
        """Pattern of ``x^w e(x) mod (x^n - 1)``."""
        return ErrorPattern.from_entries(((l + w) % n, c) for l, c in self.entries())

    def frobenius(self, q, n, power=1):
        """Positions multiplied by ``q^power`` mod n, magnitudes kept."""
        f = pow(q, power, n)
        return ErrorPattern.from_entries((l * f % n, c) for l, c in self.entries())

    def __str__(self):
        return " + ".join(f"{c:x}*x^{l}" for l, c in self.entries()) or "0"


@dataclass(frozen=True)
class CyclicCode:
    """A cyclic code of length n over GF(q), with all arithmetic in ``field``.

    ``beta = alpha^(N/n)`` is the primitive n-th root of unity; ``base_set``
    holds one representative per cyclotomic coset of the defining set.
    """

    field: object
    n: int
    q: int
    base_set: tuple
    t: int
    defining_set: tuple
    generator: tuple

    @property
    def beta_exp(self):
        return self.field.N // self.n

    def beta(self, i=1):
        return self.field.alpha(self.beta_exp * i)

    @property
    def base_gcd(self):
        return gcd(self.n, self.q - 1)

    @property
    def extension_degree(self):
        """Multiplicative order of q modulo n."""
        m, x = 1, self.q % self.n
        while x != 1 % self.n:
            x = x * self.q % self.n
            m += 1
        return m

    @cached_property
    def magnitudes(self):
        """Nonzero elements of GF(q) in ascending code order."""
        return [a for a in self.field.subfield_elements(self.q) if a]

    def pattern_count(self):
        k = len(self.magnitudes)
        return sum(comb(self.n, v) * k ** v for v in range(1, self.t + 1))

    @cached_property
    def patterns(self):
        return list(enumerate_correctable(self))

    @cached_property
    def pattern_arrays(self):
        """``(positions, magnitudes)`` integer arrays of shape (P, t), padded
        with position 0 and magnitude 0 past each pattern's weight."""
        P = len(self.patterns)
        pos = np.zeros((P, max(self.t, 1)), dtype=np.int64)
        mag = np.zeros((P, max(self.t, 1)), dtype=np.int64)
        for i, pat in enumerate(self.patterns):
            w = pat.weight
            pos[i, :w] = pat.positions
            mag[i, :w] = pat.magnitudes
        return pos, mag

    def syndrome_table(self, residues=None):
        """Syndromes of every correctable pattern, shape (P, len(residues))."""
        if residues is None:
            residues = self.base_set
        pos, mag = self.pattern_arrays
        return np.stack(
            [pattern_syndromes(self, pos, mag, r) for r in residues], axis=1
        ) if len(residues) else np.zeros((len(pos), 0), dtype=np.int64)

    def spec_text(self):
        p, e, poly = self.field.triple()
        return (
            f"n: {self.n}\n"
            f"q: {self.q}\n"
            f"field: {p}, {e}, {poly}\n"
            f"base_set: {', '.join(map(str, self.base_set))}\n"
            f"t: {self.t}\n"
        )


def build_code(field, n, q, base_set, t, warn=True):
    p = field.p
    k, x = 0, q
    while x % p == 0 and x > 1:
        x //= p
        k += 1
    if x != 1 or k == 0 or field.e % k:
        raise ValueError(f"q={q} is not the order of a subfield of GF({p}^{field.e})")
    if n <= 0 or field.N % n:
        raise BadOrder(f"n={n} does not divide N={field.N}")
    if t < 0 or 2 * t >= n:
        raise ValueError(f"capacity t={t} impossible for length {n}")
    if warn and gcd(n, q - 1) != 1:
        warnings.warn(
            f"gcd({n}, {q - 1}) != 1: coefficient-subfield and congruence "
            "guarantees are reported, not enforced",
            BaseFieldWarning,
            stacklevel=2,
        )
    base_set = tuple(r % n for r in base_set)
    covered = []
    for r in base_set:
        c = cyclotomic_coset(r, n, q)
        if set(c) & set(covered):
            raise OverlappingCosets(f"coset of {r} overlaps an earlier base residue")
        covered.extend(c)
    generator = [1]
    for r in base_set:
        try:
            m = minimal_polynomial(field, r, n, q)
        except CoefficientOutsideSubfield as exc:
            raise GeneratorNotOverSubfield(str(exc)) from exc
        generator = uni_mul(field, generator, m)
    return CyclicCode(
        field=field,
        n=n,
        q=q,
        base_set=base_set,
        t=t,
        defining_set=tuple(sorted(covered)),
        generator=tuple(generator),
    )


def parse_code_spec(text):
    """Parse the key-value code spec block (``n``, ``q``, ``field``,
    ``base_set``, ``t``)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key: value'")
        values[key.strip()] = value.strip()
    missing = {"n", "q", "field", "base_set", "t"} - values.keys()
    if missing:
        raise ValueError(f"code spec missing keys: {sorted(missing)}")
    field = parse_field_triple(values["field"])
    base = [int(x) for x in values["base_set"].replace(",", " ").split()]
    return build_code(field, int(values["n"]), int(values["q"]), base, int(values["t"]))


def enumerate_correctable(code):
    """Every error pattern of weight 1..t, ordered by (weight, positions,
    magnitudes)."""
    mags = code.magnitudes
    for v in range(1, code.t + 1):
        for positions in itertools.combinations(range(code.n), v):
            for values in itertools.product(mags, repeat=v):
                yield ErrorPattern(positions, values)


def pattern_syndromes(code, pos, mag, r):
    """Vectorized ``S_r`` over padded pattern arrays."""
    f = code.field
    lg = (f.log_arr[mag] + code.beta_exp * r * pos) % f.N
    terms = np.where(mag == 0, 0, f.exp_arr[lg])
    return f.vsum(terms, axis=1)


def syndrome(code, source, r):
    """``S_r`` of an :class:`ErrorPattern` or of a received word."""
    f = code.field
    if isinstance(source, ErrorPattern):
        acc = 0
        for l, c in source.entries():
            acc = f.add(acc, f.mul(c, code.beta(r * l)))
        return acc
    return uni_eval(f, list(source), code.beta(r))


def syndrome_tuple(code, source):
    return tuple(syndrome(code, source, r) for r in code.base_set)


def is_codeword(code, word):
    if len(word) != code.n:
        raise ValueError(f"word length {len(word)} != n={code.n}")
    return all(syndrome(code, word, r) == 0 for r in code.base_set)


def encode(code, message):
    """Non-systematic encoding ``m(x) g(x)``; used for test fixtures."""
    word = uni_mul(code.field, list(message), list(code.generator))
    if len(word) > code.n:
        raise ValueError("message too long")
    return word + [0] * (code.n - len(word))


@dataclass
class InjectivityReport:
    patterns: int
    distinct: int
    collision: tuple = None
    zero_tuple: object = None

    @property
    def ok(self):
        return self.collision is None and self.zero_tuple is None


def verify_injectivity(code, raise_on_failure=True):
    """Check that base-set syndrome tuples separate all correctable patterns.

    A pattern whose tuple is all zero is reported too, since it would be a
    nonzero codeword of weight <= t.
    """
    count = code.pattern_count()
    if count > MAX_ENUMERATION:
        raise ValueError(f"{count} patterns exceed the enumeration guard")
    if code.t == 0:
        return InjectivityReport(0, 0)
    table = code.syndrome_table()
    keys = np.zeros(len(table), dtype=object)
    for j in range(table.shape[1]):
        keys = keys * code.field.order + table[:, j].astype(object)
    seen = {}
    report = InjectivityReport(len(table), 0)
    for i, key in enumerate(keys):
        if key == 0 and report.zero_tuple is None:
            report.zero_tuple = code.patterns[i]
        if key in seen:
            if report.collision is None:
                report.collision = (code.patterns[seen[key]], code.patterns[i])
                collided = tuple(int(x) for x in table[i])
        else:
            seen[key] = i
    report.distinct = len(seen)
    if raise_on_failure:
        if report.collision is not None:
            a, b = report.collision
            raise InjectivityViolated(a, b, collided)
        if report.zero_tuple is not None:
            p = report.zero_tuple
            raise InjectivityViolated(p, None, (0,) * len(code.base_set))
    return report


def minimum_distance(code):
    """Brute-force minimum distance of a binary code with n <= 31."""
    if code.q != 2 or code.n > 31:
        raise ValueError("brute-force distance only for binary codes with n <= 31")
    g = 0
    for i, c in enumerate(code.generator):
        if c:
            g |= 1 << i
    k = code.n - (len(code.generator) - 1)
    rows = [g << i for i in range(k)]
    best = code.n
    word = 0
    # Gray-code walk over all 2^k - 1 nonzero codewords
    for i in range(1, 1 << k):
        word ^= rows[(i & -i).bit_length() - 1]
        w = bin(word).count("1")
        if w < best:
            best = w
    return best
