"""Table-driven arithmetic in GF(p^e).

Elements are plain integers: the radix-p, little-endian polynomial-basis
coordinates of the element in powers of the primitive root ``alpha``.  For
``p = 2`` and ``p(x) = 1 + x^2 + x^5`` the element ``alpha^5 = 1 + alpha^2``
is therefore the integer ``0b00101 == 5``.

A subfield GF(q) is never given its own tables; membership is the predicate
``a**q == a`` evaluated inside the big field.
"""

from math import gcd

import numpy as np

from .errors import (
    CoefficientOutsideSubfield,
    DivisionByZero,
    NonPrimitivePolynomial,
    NotFixedByFrobeniusPower,
    ReduciblePolynomial,
)

MAX_ORDER = 1 << 20


def _is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


# -- helpers over the prime field, used only while validating a modulus ----

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = list(f)
    inv_lead = pow(g[-1], p - 2, p)
    while len(_trim(f)) >= len(g):
        shift = len(f) - len(g)
        factor = f[-1] * inv_lead % p
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - factor * c) % p
    return f


def _pmulmod(a, b, g, p):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, g, p)


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(poly, p):
    """Ben-Or test: no factor of degree <= e/2 divides ``poly``."""
    e = len(poly) - 1
    xp = [0, 1]
    for i in range(1, e // 2 + 1):
        # xp <- xp^p mod poly, so after step i it holds x^(p^i)
        power = [1]
        base = xp
        k = p
        while k:
            if k & 1:
                power = _pmulmod(power, base, poly, p)
            base = _pmulmod(base, base, poly, p)
            k >>= 1
        xp = power
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(poly, diff, p)) > 1:
            return False
    return True


def _poly_from_code(code, p):
    out = []
    while code:
        out.append(code % p)
        code //= p
    return out


def _poly_to_code(coeffs, p):
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


class GaloisField:
    """The extension field GF(p^e) with log/antilog tables.

    Construct through :func:`make_field`; instances are immutable and may be
    shared freely between threads or pickled to worker processes.
    """

    def __init__(self, p, e, primitive_poly, exp, log):
        self.p = p
        self.e = e
        self.primitive_poly = tuple(primitive_poly)
        self.order = p ** e
        self.N = self.order - 1
        # exp has length 2N so that exp[i + j] needs no reduction for i, j < N
        self.exp = exp
        self.log = log
        self._radix = [p ** i for i in range(e)]
        digits = np.zeros((self.order, e), dtype=np.int64)
        codes = np.arange(self.order)
        for i in range(e):
            digits[:, i] = (codes // self._radix[i]) % p
        self.digits = digits
        self.radix = np.array(self._radix, dtype=np.int64)
        self.exp_arr = np.array(exp, dtype=np.int64)
        self.log_arr = np.array(log, dtype=np.int64)
        # log of -1: 0 in characteristic 2, N/2 otherwise
        self.neg_one_log = 0 if p == 2 else self.N // 2

    def __repr__(self):
        return f"GaloisField({self.p}, {self.e}, {self.poly_hex()})"

    def __eq__(self, other):
        return (
            isinstance(other, GaloisField)
            and (self.p, self.e, self.primitive_poly)
            == (other.p, other.e, other.primitive_poly)
        )

    def __hash__(self):
        return hash((self.p, self.e, self.primitive_poly))

    def __reduce__(self):
        return make_field, (self.p, self.e, list(self.primitive_poly))

    # -- serialization --------------------------------------------------

    def poly_code(self):
        return _poly_to_code(self.primitive_poly, self.p)

    def poly_hex(self):
        return hex(self.poly_code())

    def triple(self):
        """``(p, e, primitive polynomial as hex)``, e.g. ``(2, 5, '0x25')``."""
        return (self.p, self.e, self.poly_hex())

    # -- scalar arithmetic ----------------------------------------------

    def alpha(self, k=1):
        return self.exp[k % self.N]

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        for w in self._radix:
            out += ((a // w + b // w) % p) * w
        return out

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        p = self.p
        out = 0
        for w in self._radix:
            out += ((-(a // w)) % p) * w
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def smul(self, a, k):
        """Integer multiple ``k * a`` (k-fold repeated addition)."""
        k %= self.p
        if k == 0 or a == 0:
            return 0
        if k == 1:
            return a
        p = self.p
        out = 0
        for w in self._radix:
            out += ((a // w) * k % p) * w
        return out

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.exp[(self.N - self.log[a]) % self.N]

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by zero")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.N]

    def pow(self, a, k):
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        return self.exp[(self.log[a] * k) % self.N]

    def frobenius(self, a, q):
        """``a ** q``; q must be a power of p whose exponent divides e."""
        return self.pow(a, q)

    def in_subfield(self, a, q):
        return self.pow(a, q) == a

    def subfield_elements(self, q):
        return [a for a in range(self.order) if self.in_subfield(a, q)]

    def order_of(self, a):
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        return self.N // gcd(self.N, self.log[a])

    def sum(self, values):
        out = 0
        for v in values:
            out = self.add(out, v)
        return out

    # -- vectorized arithmetic on integer arrays ------------------------

    def vmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp_arr[(self.log_arr[a] + self.log_arr[b]) % self.N]
        return np.where((a == 0) | (b == 0), 0, out)

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self.radix

    def vsum(self, a, axis=-1):
        a = np.asarray(a)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        d = self.digits[a].sum(axis=axis if axis >= 0 else axis - 1) % self.p
        return d @ self.radix

    def from_digits(self, digits):
        """Reduce integer digit accumulators mod p and convert to codes."""
        return (np.asarray(digits) % self.p) @ self.radix


def make_field(p, e, primitive_poly):
    """Build GF(p^e) from a primitive polynomial.

    ``primitive_poly`` is a coefficient list, lowest degree first, or an
    integer giving those coefficients as radix-p digits (for p = 2 the usual
    bitmask, so ``0x25`` is ``1 + x^2 + x^5``).
    """
    if not _is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if isinstance(primitive_poly, int):
        primitive_poly = _poly_from_code(primitive_poly, p)
    poly = [c % p for c in primitive_poly]
    _trim(poly)
    if len(poly) - 1 != e:
        raise ValueError(f"polynomial degree {len(poly) - 1} does not match e={e}")
    if p ** e > MAX_ORDER:
        raise ValueError(f"field order {p}^{e} exceeds the table cap")
    if poly[0] == 0:
        raise ReduciblePolynomial("constant coefficient is zero; x divides the modulus")

    order = p ** e
    N = order - 1
    inv_lead = pow(poly[-1], p - 2, p)
    monic = [c * inv_lead % p for c in poly]
    radix = [p ** i for i in range(e)]

    exp = [0] * (2 * N)
    log = [-1] * order
    digits = [1] + [0] * (e - 1)
    k = 0
    while True:
        code = sum(d * w for d, w in zip(digits, radix))
        if code == 0:
            raise ReduciblePolynomial("zero divisor appeared while building tables")
        if log[code] != -1:
            break
        if k >= N:
            break
        log[code] = k
        exp[k] = code
        k += 1
        # multiply by x and reduce by the monic modulus
        top = digits[-1]
        digits = [0] + digits[:-1]
        if top:
            digits = [(d - top * c) % p for d, c in zip(digits, monic[:e])]

    if k != N:
        if not _is_irreducible(poly, p):
            raise ReduciblePolynomial(f"{poly} factors over GF({p})")
        raise NonPrimitivePolynomial(f"alpha has order {k}, not {N}")
    for i in range(N):
        exp[N + i] = exp[i]
    return GaloisField(p, e, poly, exp, log)


def parse_field_triple(text):
    """Parse ``"2, 5, 0x25"`` into a field."""
    parts = [s.strip() for s in text.strip().strip("()").split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'p, e, poly' but got {text!r}")
    p, e = int(parts[0]), int(parts[1])
    return make_field(p, e, int(parts[2], 0))


def element_hex(a):
    return format(a, "x")


def cyclotomic_coset(i, n, q):
    """Orbit of ``i`` under multiplication by ``q`` modulo ``n``, sorted."""
    i %= n
    out = {i}
    j = i * q % n
    while j not in out:
        out.add(j)
        j = j * q % n
    return sorted(out)


def cyclotomic_cosets(n, q):
    seen = set()
    cosets = []
    for i in range(n):
        if i not in seen:
            c = cyclotomic_coset(i, n, q)
            seen.update(c)
            cosets.append(c)
    return cosets


def minimal_polynomial(field, i, n, q):
    """Minimal polynomial of ``beta^i`` over GF(q), beta = alpha^(N/n).

    Returned as a dense coefficient list (lowest degree first) of elements
    that all lie in GF(q).
    """
    if field.N % n:
        raise ValueError(f"{n} does not divide {field.N}")
    b = field.N // n
    poly = [1]
    for j in cyclotomic_coset(i, n, q):
        root = field.alpha(b * j)
        # poly *= (x - root)
        nxt = [0] * (len(poly) + 1)
        for k, c in enumerate(poly):
            nxt[k + 1] = field.add(nxt[k + 1], c)
            nxt[k] = field.sub(nxt[k], field.mul(c, root))
        poly = nxt
    for c in poly:
        if not field.in_subfield(c, q):
            raise CoefficientOutsideSubfield(
                f"minimal polynomial of beta^{i} has coefficient {c:x} outside GF({q})"
            )
    return poly


def conjugacy_trace_sum(field, gamma, q, d):
    """``sum(gamma ** (q ** w) for w < d)``, which lies in GF(q)."""
    if field.pow(gamma, q ** d) != gamma:
        raise NotFixedByFrobeniusPower(f"{gamma:x} is not fixed by x -> x^(q^{d})")
    total = 0
    g = gamma
    for _ in range(d):
        total = field.add(total, g)
        g = field.pow(g, q)
    return total
