"""Kronecker-delta interpolation over finite fields.

Two builders share one contract.  :func:`mvif_naive` expands
``sum_i y_i prod_j delta_{x_ij}(x_j)`` literally and is the correctness
oracle.  :func:`mvif_orbit` builds the same polynomial for functions on the
correctable error patterns of a cyclic code by working one cyclic-shift orbit
at a time: exponent tuples whose weighted degree misses the target residue are
never generated, and every surviving coefficient of an orbit collapses to
``orbit_size * f(theta) / prod h_i(theta)^k_i``.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import BudgetExceeded, DuplicatePoints, HypothesisViolated
from .poly import SparseMultiPoly, mp_eval_many

MAX_POINTS = 10_000
MAX_ARITY = 4
MAX_DENSE = 1 << 22


def delta_poly(field, a):
    """Univariate polynomial equal to 1 at ``a`` and 0 elsewhere on the field.

    ``1 - x^N`` for ``a == 0``; otherwise the coefficient of ``x^k`` is
    ``-a^(-k)`` for ``k = 1..N``.
    """
    N = field.N
    out = [0] * (N + 1)
    if a == 0:
        out[0] = 1
        out[N] = field.neg(1)
        return out
    la = field.log[a]
    for k in range(1, N + 1):
        out[k] = field.exp[(field.neg_one_log - k * la) % N]
    return out


def _delta_logs(field, a):
    """Log-domain coefficients of ``delta_a`` (-1 marks a zero coefficient)."""
    N = field.N
    out = np.full(N + 1, -1, dtype=np.int64)
    if a == 0:
        out[0] = 0
        out[N] = field.neg_one_log
    else:
        k = np.arange(1, N + 1)
        out[1:] = (field.neg_one_log - k * field.log[a]) % N
    return out


def _dense_to_poly(field, arity, acc):
    """``acc`` is the (N+1)^arity flat array of element codes."""
    N = field.N
    nz = np.flatnonzero(acc)
    exps = np.array(np.unravel_index(nz, (N + 1,) * arity)).T
    # flat indices ascend, so the exponent vectors come out sorted
    terms = tuple(zip(map(tuple, exps.tolist()), acc[nz].tolist()))
    return SparseMultiPoly._trusted(arity, N, terms)


class _DenseAccumulator:
    """Sums element codes into a dense (N+1)^arity grid.

    Characteristic 2 accumulates by XOR; otherwise radix-p digits are summed
    as integers and reduced at the end.
    """

    def __init__(self, field, arity):
        size = (field.N + 1) ** arity
        if size > MAX_DENSE:
            raise BudgetExceeded(f"dense grid of {size} slots exceeds {MAX_DENSE}")
        self.field = field
        self.arity = arity
        self.size = size
        if field.p == 2:
            self.acc = np.zeros(size, dtype=np.int64)
        else:
            self.acc = np.zeros((size, field.e), dtype=np.int64)

    def add_grid(self, codes):
        """Add a full grid of codes (flattened to ``size``)."""
        if self.field.p == 2:
            self.acc ^= codes
        else:
            self.acc += self.field.digits[codes]

    def add_at(self, index, codes, scale=1):
        """Add ``scale * codes`` at flat ``index`` (repeats allowed)."""
        f = self.field
        scale %= f.p
        if scale == 0 or index.size == 0:
            return
        if f.p == 2:
            for b in range(f.e):
                bits = np.bincount(index, weights=(codes >> b) & 1, minlength=self.size)
                self.acc ^= (bits.astype(np.int64) & 1) << b
        else:
            digits = f.digits[codes] * scale
            for d in range(f.e):
                self.acc[:, d] += np.bincount(
                    index, weights=digits[:, d], minlength=self.size
                ).astype(np.int64)

    def to_poly(self):
        acc = self.acc if self.field.p == 2 else self.field.from_digits(self.acc)
        return _dense_to_poly(self.field, self.arity, acc)


def _check_points(field, points, values, budget):
    pts = np.asarray(points, dtype=np.int64)
    vals = np.asarray(values, dtype=np.int64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array")
    M, s = pts.shape
    if len(vals) != M:
        raise ValueError(f"{M} points but {len(vals)} values")
    if M > budget:
        raise BudgetExceeded(f"{M} points exceed the naive budget of {budget}")
    if s > MAX_ARITY or s < 1:
        raise BudgetExceeded(f"arity {s} outside 1..{MAX_ARITY}")
    if pts.size and (pts.min() < 0 or pts.max() >= field.order):
        raise ValueError("point coordinate outside the field")
    if vals.size and (vals.min() < 0 or vals.max() >= field.order):
        raise ValueError("value outside the field")
    if len(np.unique(pts, axis=0)) != M:
        raise DuplicatePoints("interpolation points are not pairwise distinct")
    return pts, vals


def mvif_naive(field, points, values, budget=MAX_POINTS):
    """Interpolating polynomial through ``(points[i], values[i])``.

    Each point contributes ``values[i] * prod_j delta_{points[i][j]}(x_j)``,
    expanded in full on the dense exponent grid ``{0..N}^s``.
    """
    pts, vals = _check_points(field, points, values, budget)
    M, s = pts.shape
    N = field.N
    acc = _DenseAccumulator(field, s)
    cache = {}
    for point, y in zip(pts, vals):
        if y == 0:
            continue
        logs = np.full((N + 1,) * 0, field.log[int(y)], dtype=np.int64)
        dead = np.zeros((), dtype=bool)
        for a in point:
            a = int(a)
            if a not in cache:
                cache[a] = _delta_logs(field, a)
            dl = cache[a]
            logs = logs[..., None] + dl
            dead = dead[..., None] | (dl < 0)
        codes = np.where(dead, 0, field.exp_arr[logs % N]).ravel()
        acc.add_grid(codes)
    return acc.to_poly()


# -- orbit-accelerated builder ------------------------------------------------

@dataclass
class OrbitStructure:
    """Partition of the correctable patterns into shift or Frobenius orbits.

    ``degrees`` is only meaningful for Frobenius orbits: the smallest d with
    ``theta^(q^d) == theta``, which equals the orbit size.
    """

    kind: str
    representatives: list
    sizes: list
    degrees: list
    members: list


def orbit_structure(code, kind="shift"):
    if kind == "shift":
        step = lambda pat: pat.shift(1, code.n)  # noqa: E731
    elif kind == "frobenius":
        step = lambda pat: pat.frobenius(code.q, code.n)  # noqa: E731
    else:
        raise ValueError(f"unknown orbit kind {kind!r}")
    seen = set()
    reps, sizes, degrees, members = [], [], [], []
    for pat in code.patterns:
        if pat in seen:
            continue
        orbit = [pat]
        nxt = step(pat)
        while nxt != pat:
            orbit.append(nxt)
            nxt = step(nxt)
        seen.update(orbit)
        reps.append(pat)
        sizes.append(len(orbit))
        degrees.append(len(orbit) if kind == "frobenius" else None)
        members.append(orbit)
    return OrbitStructure(kind, reps, sizes, degrees, members)


def _congruent_tuples(N, degrees, r, n):
    """All k in {1..N}^len(degrees) with sum(d_i k_i) == r (mod n)."""
    u = len(degrees)
    if u == 0:
        return np.zeros((1 if r % n == 0 else 0, 0), dtype=np.int64)
    if N ** u > MAX_DENSE * 4:
        raise BudgetExceeded(f"{N}^{u} exponent tuples exceed the budget")
    grids = np.meshgrid(*([np.arange(1, N + 1)] * u), indexing="ij")
    K = np.stack([g.ravel() for g in grids], axis=1)
    weight = K @ np.array(degrees, dtype=np.int64)
    return K[(weight - r) % n == 0]


def _spot_check(code, coords, target, coord_degrees, r, reps, samples=8):
    f = code.field
    for pat in reps[:samples]:
        h = coords(pat)
        v = target(pat)
        for w in (1, code.n // 2 + 1):
            moved = pat.shift(w, code.n)
            h2 = coords(moved)
            for hi, hj, d in zip(h, h2, coord_degrees):
                if hj != f.mul(code.beta(w * d), hi):
                    raise HypothesisViolated(
                        f"coordinate map of degree {d} is not shift-homogeneous at {pat}"
                    )
            if target(moved) != f.mul(code.beta(w * r), v):
                raise HypothesisViolated(f"target is not homogeneous of degree {r} at {pat}")


def mvif_orbit(code, target, target_degree, coords=None, coord_degrees=None, check=True):
    """Interpolate ``target`` as a polynomial in the coordinate maps.

    ``target`` and ``coords`` are callables on :class:`ErrorPattern`; the
    coordinates default to the syndromes at the code's base set, with degrees
    equal to the base residues.  Both must be shift-homogeneous of the given
    degrees; a few shifts are spot-checked when ``check`` is set.
    """
    from .code import syndrome  # local import keeps module layering flat

    if coords is None:
        coord_degrees = code.base_set
        coords = lambda pat: tuple(syndrome(code, pat, rr) for rr in code.base_set)  # noqa: E731
    elif coord_degrees is None:
        raise ValueError("coord_degrees required with custom coordinate maps")
    coord_degrees = tuple(coord_degrees)
    s = len(coord_degrees)
    f = code.field
    N, n = f.N, code.n

    orbits = orbit_structure(code, "shift")
    if check:
        _spot_check(code, coords, target, coord_degrees, target_degree, orbits.representatives)

    # group representatives by which coordinates are nonzero
    groups = {}
    for pat, size in zip(orbits.representatives, orbits.sizes):
        v = target(pat)
        if v == 0:
            continue
        h = coords(pat)
        u1 = tuple(i for i in range(s) if h[i])
        groups.setdefault(u1, []).append((f.log[v], [f.log[h[i]] for i in u1], size))

    acc = _DenseAccumulator(f, s)
    strides = np.array([(N + 1) ** (s - 1 - i) for i in range(s)], dtype=np.int64)
    for u1, members in groups.items():
        u0 = [i for i in range(s) if i not in u1]
        K = _congruent_tuples(N, [coord_degrees[i] for i in u1], target_degree, n)
        if len(K) == 0:
            continue
        base_index = K @ strides[list(u1)] if u1 else np.zeros(len(K), dtype=np.int64)
        sign_log = (len(u1) * f.neg_one_log) % N
        by_size = {}
        for lv, lh, size in members:
            by_size.setdefault(size, []).append((lv, lh))
        for size, rows in by_size.items():
            lv = np.array([r_[0] for r_ in rows], dtype=np.int64)
            lh = np.array([r_[1] for r_ in rows], dtype=np.int64).reshape(len(rows), len(u1))
            chunk = max(1, 4_000_000 // len(K))
            for start in range(0, len(rows), chunk):
                lvc = lv[start:start + chunk]
                lhc = lh[start:start + chunk]
                logs = (lvc[:, None] + sign_log - lhc @ K.T) % N
                codes = f.exp_arr[logs].ravel()
                index = np.tile(base_index, len(lvc))
                # the U0 coordinates contribute (1 - x^N): exponent 0 or N
                for choice in itertools.product((0, 1), repeat=len(u0)):
                    offset = sum(N * strides[i] for i, c in zip(u0, choice) if c)
                    sign = -1 if sum(choice) % 2 else 1
                    acc.add_at(index + offset, codes, scale=sign * size)
    return acc.to_poly()


def congruence_filter(poly, degrees, r, n):
    """Split terms by whether ``sum(degrees[i] * exps[i]) == r (mod n)``."""
    kept, violating = [], []
    for exps, c in poly.terms:
        weight = sum(d * k for d, k in zip(degrees, exps))
        (kept if (weight - r) % n == 0 else violating).append((exps, c))
    return kept, violating


def coefficients_in_subfield(field, poly, q):
    return all(field.in_subfield(c, q) for c in poly.coefficients())


class MVIFInterpolator(BaseEstimator):
    """Estimator wrapper around :func:`mvif_naive`.

    ``fit(X, y)`` takes an ``(M, s)`` array of field-element codes and the
    ``M`` target codes; ``predict`` evaluates the fitted polynomial anywhere
    on ``field^s``.
    """

    def __init__(self, field=None, max_points=MAX_POINTS):
        self.field = field
        self.max_points = max_points

    def fit(self, X, y):
        if self.field is None:
            raise ValueError("field must be set before fitting")
        X = check_array(X, dtype=np.int64, ensure_min_samples=1)
        y = np.asarray(y, dtype=np.int64).ravel()
        self.poly_ = mvif_naive(self.field, X, y, budget=self.max_points)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "poly_")
        X = check_array(X, dtype=np.int64)
        return mp_eval_many(self.field, self.poly_, X)
