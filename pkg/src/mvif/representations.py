"""Unknown-syndrome and locator-coefficient representations of a cyclic code.

An artifact is a polynomial in the base-set syndromes ``S_{r_1}..S_{r_s}``
that reproduces some function of the error pattern (an unknown syndrome, or
one coefficient of the error locator) on every correctable pattern.

Locator convention: ``sigma(x) = prod_j (1 - beta^{l_j} x)``, constant term 1.
The artifact of index ``i`` targets the coefficient of ``x^i``, which is
``(-1)^i`` times the i-th elementary symmetric function of the locators and
is zero for patterns of weight below ``i``.  Reversing the coefficient list
gives the monic form ``prod (z - beta^{l_j})``.
"""

import hashlib
import os
from dataclasses import dataclass, replace
from itertools import combinations
from pathlib import Path

import numpy as np

from .code import parse_code_spec, syndrome, verify_injectivity
from .errors import StructureTheoremViolated, TargetInDefiningSet, TableParseError
from .interpolation import (
    coefficients_in_subfield,
    congruence_filter,
    mvif_naive,
    mvif_orbit,
)
from .poly import SparseMultiPoly, format_terms, mp_eval, parse_terms, poly_from_rows

UNKNOWN_SYNDROME = "unknown-syndrome"
GELP = "gelp-coefficient"


@dataclass(frozen=True)
class RepresentationArtifact:
    kind: str
    index: int
    base_set: tuple
    target_degree: int
    poly: SparseMultiPoly
    coefficients_in_base_field: bool = False
    congruence_clean: bool = False
    builder: str = "orbit"
    pattern_count: int = 0

    @property
    def degrees(self):
        return self.base_set

    @property
    def name(self):
        if self.kind == UNKNOWN_SYNDROME:
            return f"S{self.index}"
        return f"sigma{self.index}"

    def evaluate(self, field, syndromes):
        return mp_eval(field, self.poly, syndromes)


def locator_coefficient(code, pattern, i):
    """Coefficient of ``x^i`` in ``prod (1 - beta^l x)`` over the pattern."""
    f = code.field
    acc = 0
    for subset in combinations(pattern.positions, i):
        term = 1
        for l in subset:
            term = f.mul(term, code.beta(l))
        acc = f.add(acc, term)
    return f.neg(acc) if i % 2 else acc


def needed_unknown_residues(code):
    """Residues in 1..2t outside the defining set that must come from
    artifacts: the first member of each cyclotomic coset met in that range
    (later members follow by Frobenius)."""
    from .field import cyclotomic_coset

    known = set(code.defining_set)
    covered = set()
    out = []
    for i in range(1, 2 * code.t + 1):
        r = i % code.n
        if r in known or r in covered:
            continue
        out.append(r)
        covered.update(cyclotomic_coset(r, code.n, code.q))
    return out


def _build(code, target, degree, builder):
    verify_injectivity(code)
    if builder == "orbit":
        return mvif_orbit(code, target, degree)
    if builder == "naive":
        points = code.syndrome_table()
        values = np.array([target(p) for p in code.patterns], dtype=np.int64)
        return mvif_naive(code.field, points, values)
    raise ValueError(f"unknown builder {builder!r}")


def build_unknown_syndrome_rep(code, r, builder="orbit", strict=True, allow_known=False):
    """Polynomial ``L`` with ``S_r = L(S_{r_1}, ..., S_{r_s})`` on every
    correctable pattern.  ``allow_known`` permits a residue of the defining
    set, which is useful for structural checks only."""
    r %= code.n
    if r in code.defining_set and not allow_known:
        raise TargetInDefiningSet(f"S_{r} is a known syndrome")
    poly = _build(code, lambda p: syndrome(code, p, r), r, builder)
    art = RepresentationArtifact(
        UNKNOWN_SYNDROME, r, code.base_set, r, poly,
        builder=builder, pattern_count=code.pattern_count(),
    )
    return with_flags(art, code, strict)


def build_gelp_coefficients(code, builder="orbit", strict=True):
    """Artifacts for the locator coefficients of ``x^1 .. x^t``."""
    out = []
    for i in range(1, code.t + 1):
        poly = _build(code, lambda p, i=i: locator_coefficient(code, p, i), i, builder)
        art = RepresentationArtifact(
            GELP, i, code.base_set, i, poly,
            builder=builder, pattern_count=code.pattern_count(),
        )
        out.append(with_flags(art, code, strict))
    return out


@dataclass
class StructureReport:
    terms: int
    coefficients_in_base_field: bool
    violations: list
    residues: list

    @property
    def congruence_clean(self):
        return not self.violations


def check_structure(artifact, code, strict=True):
    """Recompute the base-field and congruence properties of an artifact.

    With ``gcd(n, q - 1) == 1`` a failure is a bug and raises
    :class:`StructureTheoremViolated` (when ``strict``); otherwise the
    findings are only reported.
    """
    poly = artifact.poly
    in_base = coefficients_in_subfield(code.field, poly, code.q)
    _, bad = congruence_filter(poly, artifact.base_set, artifact.target_degree, code.n)
    residues = sorted({
        sum(d * k for d, k in zip(artifact.base_set, exps)) % code.n
        for exps in poly.exponents()
    })
    report = StructureReport(len(poly), in_base, bad, residues)
    if strict and code.base_gcd == 1 and not (in_base and not bad):
        raise StructureTheoremViolated(
            f"{artifact.name}: base-field={in_base}, {len(bad)} congruence violations"
        )
    return report


def with_flags(artifact, code, strict=True):
    report = check_structure(artifact, code, strict)
    return replace(
        artifact,
        coefficients_in_base_field=report.coefficients_in_base_field,
        congruence_clean=report.congruence_clean,
    )


def artifact_targets(code, artifact):
    """Directly computed target value for every correctable pattern."""
    if artifact.kind == UNKNOWN_SYNDROME:
        return code.syndrome_table([artifact.index])[:, 0]
    return np.array(
        [locator_coefficient(code, p, artifact.index) for p in code.patterns],
        dtype=np.int64,
    )


def universality(code, artifact):
    """Number of correctable patterns on which the artifact is exact."""
    got = artifact.poly.evaluate_many(code.field, code.syndrome_table())
    return int((got == artifact_targets(code, artifact)).sum()), len(got)


# -- printed tables -----------------------------------------------------------

@dataclass
class TableComparison:
    rows: int
    duplicate_rows: list
    missing: list
    extra: list
    coefficient_mismatches: list
    agree: int
    total: int
    offending: list

    @property
    def agreement(self):
        return self.agree / self.total if self.total else 1.0

    @property
    def identical(self):
        return not (self.missing or self.extra or self.coefficient_mismatches)


def load_table(text, N, arity=None):
    """Parse a term table; returns the raw rows (duplicates preserved)."""
    return parse_terms(text.splitlines(), N, arity)


def compare_with_table(artifact, rows, code, max_offending=20):
    """Diff a parsed table against an artifact, structurally and as functions.

    The artifact is the reference; functional agreement is measured on every
    correctable pattern's syndrome tuple.
    """
    f = code.field
    s = len(artifact.base_set)
    if rows and len(rows[0][0]) != s:
        raise TableParseError(f"table arity {len(rows[0][0])} != {s}")
    seen, dups = set(), []
    for exps, _ in rows:
        if exps in seen:
            dups.append(exps)
        seen.add(exps)
    table = poly_from_rows(f, rows, s)
    mine = artifact.poly.as_dict()
    theirs = table.as_dict()
    missing = sorted(set(mine) - set(theirs))
    extra = sorted(set(theirs) - set(mine))
    mismatched = sorted(k for k in set(mine) & set(theirs) if mine[k] != theirs[k])
    points = code.syndrome_table()
    ref = artifact.poly.evaluate_many(f, points)
    got = table.evaluate_many(f, points)
    bad = np.flatnonzero(ref != got)
    offending = [
        (code.patterns[i], tuple(int(x) for x in points[i]), int(ref[i]), int(got[i]))
        for i in bad[:max_offending]
    ]
    return TableComparison(
        rows=len(rows),
        duplicate_rows=dups,
        missing=missing,
        extra=extra,
        coefficient_mismatches=mismatched,
        agree=int(len(points) - len(bad)),
        total=int(len(points)),
        offending=offending,
    )


# -- artifact files -----------------------------------------------------------

def _bool(text):
    return text.strip().lower() == "true"


def format_artifact(artifact, code):
    p, e, poly_hex = code.field.triple()
    header = [
        "# mvif artifact",
        f"kind: {artifact.kind}",
        f"index: {artifact.index}",
        f"n: {code.n}",
        f"q: {code.q}",
        f"field: {p}, {e}, {poly_hex}",
        f"base_set: {', '.join(map(str, code.base_set))}",
        f"t: {code.t}",
        f"degrees: {', '.join(map(str, artifact.base_set))}",
        f"target_degree: {artifact.target_degree}",
        f"builder: {artifact.builder}",
        f"patterns: {artifact.pattern_count}",
        f"coefficients_in_base_field: {str(artifact.coefficients_in_base_field).lower()}",
        f"congruence_clean: {str(artifact.congruence_clean).lower()}",
        f"terms: {len(artifact.poly)}",
        "---",
    ]
    return "\n".join(header) + "\n" + format_terms(artifact.poly)


def parse_artifact(text, code=None, strict=True):
    """Read an artifact file.  Stored flags are ignored and recomputed."""
    lines = text.splitlines()
    try:
        split = lines.index("---")
    except ValueError:
        raise TableParseError("artifact header not terminated by '---'") from None
    header = {}
    for raw in lines[:split]:
        line = raw.split("#", 1)[0].strip()
        if line:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
    if code is None:
        code = parse_code_spec("\n".join(f"{k}: {header[k]}" for k in ("n", "q", "field", "base_set", "t")))
    degrees = tuple(int(x) for x in header["degrees"].replace(",", " ").split())
    rows = parse_terms(lines[split + 1:], code.field.N, len(degrees), first_line=split + 2)
    if "terms" in header and int(header["terms"]) != len(rows):
        raise TableParseError(f"header promises {header['terms']} terms, found {len(rows)}")
    art = RepresentationArtifact(
        kind=header["kind"],
        index=int(header["index"]),
        base_set=degrees,
        target_degree=int(header["target_degree"]),
        poly=poly_from_rows(code.field, rows, len(degrees)),
        builder=header.get("builder", "orbit"),
        pattern_count=int(header.get("patterns", 0)),
    )
    return with_flags(art, code, strict)


def code_key(code):
    return hashlib.sha256(code.spec_text().encode()).hexdigest()[:16]


def default_cache_dir():
    env = os.environ.get("MVIF_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "mvif"


class ArtifactCache:
    """On-disk store of built artifacts keyed by code-spec hash, kind, index."""

    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def path(self, code, kind, index):
        return self.root / code_key(code) / f"{kind}-{index}.txt"

    def load(self, code, kind, index):
        path = self.path(code, kind, index)
        if not path.exists():
            return None
        return parse_artifact(path.read_text(), code)

    def store(self, code, artifact):
        path = self.path(code, artifact.kind, artifact.index)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_artifact(artifact, code))
        return path

    def unknown_syndrome(self, code, r, force=False, builder="orbit"):
        art = None if force else self.load(code, UNKNOWN_SYNDROME, r)
        if art is None:
            art = build_unknown_syndrome_rep(code, r, builder=builder)
            self.store(code, art)
        return art

    def gelp(self, code, force=False, builder="orbit"):
        arts = [] if force else [self.load(code, GELP, i) for i in range(1, code.t + 1)]
        if force or any(a is None for a in arts):
            arts = build_gelp_coefficients(code, builder=builder)
            for a in arts:
                self.store(code, a)
        return arts
