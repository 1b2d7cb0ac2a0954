"""Univariate and sparse multivariate polynomials over a :class:`GaloisField`.

Univariate polynomials are dense lists of element codes, index = degree, with
no trailing zeros (the zero polynomial is ``[]``).  Multivariate polynomials
are :class:`SparseMultiPoly` values whose exponents are kept in ``0..N``:
``x^k`` and ``x^normalize_exponent(k, N)`` agree on every element of the
field, zero included, so this is a canonical form for polynomial functions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch, TableParseError


def normalize_exponent(k, N):
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    if k == 0:
        return 0
    return (k - 1) % N + 1


# -- univariate ---------------------------------------------------------------

def uni_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def uni_degree(f):
    return len(uni_trim(f)) - 1


def uni_add(field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return uni_trim(out)


def uni_scale(field, f, c):
    return uni_trim([field.mul(x, c) for x in f])


def uni_shift(f, k=1):
    """Multiply by ``x^k``."""
    f = uni_trim(f)
    return [0] * k + f if f else []


def uni_mul(field, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = field.add(out[i + j], field.mul(x, y))
    return uni_trim(out)


def uni_mul_mod(field, a, b, k):
    """Product of ``a`` and ``b`` with every term of degree >= k dropped."""
    out = [0] * k
    for i, x in enumerate(a[:k]):
        if x:
            for j, y in enumerate(b[: k - i]):
                if y:
                    out[i + j] = field.add(out[i + j], field.mul(x, y))
    return uni_trim(out)


def uni_divmod(field, a, b):
    b = uni_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = uni_trim(a)
    quot = [0] * max(0, len(rem) - len(b) + 1)
    inv_lead = field.inv(b[-1])
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        factor = field.mul(rem[-1], inv_lead)
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(factor, c))
        rem = uni_trim(rem)
    return uni_trim(quot), rem


def uni_derivative(field, f):
    return uni_trim([field.smul(c, i) for i, c in enumerate(f)][1:])


def uni_eval(field, f, x):
    acc = 0
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


def uni_from_roots(field, roots):
    """``prod(1 - r x)`` for r in roots."""
    out = [1]
    for r in roots:
        out = uni_mul(field, out, [1, field.neg(r)])
    return out


# -- sparse multivariate -----------------------------------------------------

@dataclass(frozen=True)
class SparseMultiPoly:
    """Sparse polynomial in ``arity`` variables with exponents in ``0..N``.

    ``terms`` is a tuple of ``(exponents, coefficient)`` pairs, sorted
    ascending by exponent vector, with no zero coefficients.
    """

    arity: int
    N: int
    terms: tuple = ()

    def __post_init__(self):
        seen = set()
        for exps, c in self.terms:
            if len(exps) != self.arity:
                raise ArityMismatch(f"term {exps} has wrong arity")
            if c == 0:
                raise ValueError(f"zero coefficient stored for {exps}")
            if exps in seen:
                raise ValueError(f"duplicate exponent vector {exps}")
            if any(k < 0 or k > self.N for k in exps):
                raise ValueError(f"exponent out of range in {exps}")
            seen.add(exps)

    @classmethod
    def _trusted(cls, arity, N, terms):
        """Skip validation for terms already sorted, distinct and nonzero."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "arity", arity)
        object.__setattr__(obj, "N", N)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def from_dict(cls, arity, N, coeffs):
        terms = tuple(sorted((tuple(k), c) for k, c in coeffs.items() if c))
        return cls(arity, N, terms)

    def as_dict(self):
        return dict(self.terms)

    def __len__(self):
        return len(self.terms)

    def exponents(self):
        return [exps for exps, _ in self.terms]

    def coefficients(self):
        return [c for _, c in self.terms]

    def evaluate(self, field, point):
        return mp_eval(field, self, point)

    def evaluate_many(self, field, points):
        return mp_eval_many(field, self, points)


def mp_eval(field, poly, point):
    if len(point) != poly.arity:
        raise ArityMismatch(f"expected {poly.arity} coordinates, got {len(point)}")
    N = field.N
    logs = [field.log[x] if x else -1 for x in point]
    acc = 0
    for exps, c in poly.terms:
        total = field.log[c]
        for k, lg in zip(exps, logs):
            if k:
                if lg < 0:
                    break
                total += k * lg
        else:
            acc = field.add(acc, field.exp[total % N])
    return acc


def mp_eval_many(field, poly, points):
    """Evaluate at every row of an ``(M, arity)`` integer array."""
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != poly.arity:
        raise ArityMismatch(f"expected shape (M, {poly.arity}), got {pts.shape}")
    M = pts.shape[0]
    if not poly.terms:
        return np.zeros(M, dtype=np.int64)
    exps = np.array(poly.exponents(), dtype=np.int64)  # (T, s)
    clog = field.log_arr[np.array(poly.coefficients(), dtype=np.int64)]  # (T,)
    plog = field.log_arr[pts]  # (M, s), -1 where zero
    zero = pts == 0
    positive = exps > 0
    out = np.zeros(M, dtype=np.int64)
    chunk = max(1, 2_000_000 // max(1, len(exps)))
    for start in range(0, M, chunk):
        pl = plog[start:start + chunk]
        z = zero[start:start + chunk]
        total = np.broadcast_to(clog, (len(pl), len(clog))).copy()
        dead = np.zeros(total.shape, dtype=bool)
        for j in range(poly.arity):
            total += pl[:, j, None] * exps[None, :, j]
            dead |= z[:, j, None] & positive[None, :, j]
        total %= field.N
        vals = field.exp_arr[total]
        vals[dead] = 0
        out[start:start + chunk] = field.vsum(vals, axis=1)
    return out


def mp_accumulate(field, poly, exps, coeff):
    """Return ``poly + coeff * x^exps`` (exponents already normalized)."""
    d = poly.as_dict()
    exps = tuple(exps)
    new = field.add(d.get(exps, 0), coeff)
    if new:
        d[exps] = new
    else:
        d.pop(exps, None)
    return SparseMultiPoly.from_dict(poly.arity, poly.N, d)


class TermAccumulator:
    """Single-writer builder that sums contributions into exponent slots.

    Partial accumulators built in parallel combine with :meth:`merge`.
    """

    def __init__(self, field, arity):
        self.field = field
        self.arity = arity
        self.coeffs = {}

    def add(self, exps, coeff):
        if not coeff:
            return
        exps = tuple(exps)
        new = self.field.add(self.coeffs.get(exps, 0), coeff)
        if new:
            self.coeffs[exps] = new
        else:
            del self.coeffs[exps]

    def merge(self, other):
        for exps, c in other.coeffs.items():
            self.add(exps, c)
        return self

    def to_poly(self):
        return SparseMultiPoly.from_dict(self.arity, self.field.N, self.coeffs)


# -- term-table text format ---------------------------------------------------

def format_term(exps, coeff=1):
    body = ",".join(format(k, "X") for k in exps)
    if coeff != 1:
        body += "*" + format(coeff, "x")
    return body


def format_terms(poly):
    return "".join(format_term(exps, c) + "\n" for exps, c in poly.terms)


def parse_term(text, line=None):
    text = text.strip()
    coeff = 1
    if "*" in text:
        text, _, chex = text.partition("*")
        try:
            coeff = int(chex.strip(), 16)
        except ValueError:
            raise TableParseError(f"bad coefficient {chex!r}", line) from None
    try:
        exps = tuple(int(part.strip(), 16) for part in text.split(","))
    except ValueError:
        raise TableParseError(f"malformed exponent tuple {text!r}", line) from None
    return exps, coeff


def parse_terms(lines, N, arity=None, first_line=1):
    """Parse term-table lines into a list of ``(exps, coeff)`` rows.

    Blank lines and ``#`` comments are skipped.  Rows are returned in file
    order and are *not* merged, so duplicates in a printed table stay visible.
    """
    rows = []
    for lineno, raw in enumerate(lines, start=first_line):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        exps, coeff = parse_term(text, lineno)
        if arity is None:
            arity = len(exps)
        elif len(exps) != arity:
            raise TableParseError(f"expected {arity} exponents, got {len(exps)}", lineno)
        if any(k > N for k in exps):
            raise TableParseError(f"exponent above N={N} in {text!r}", lineno)
        rows.append((exps, coeff))
    return rows


def poly_from_rows(field, rows, arity):
    acc = TermAccumulator(field, arity)
    for exps, coeff in rows:
        acc.add(exps, coeff)
    return acc.to_poly()
