"""Command-line front end.

Exit codes: 0 success, 1 decode failure, 2 usage or parse error,
3 internal invariant violation.
"""

import argparse
import os
import random
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from importlib.resources import files
from pathlib import Path

from .code import BaseFieldWarning, ErrorPattern, encode, parse_code_spec, verify_injectivity
from .decoder import decode_gelp, decode_one_step
from .errors import InvariantViolation, MVIFError, TableParseError
from .field import parse_field_triple
from .representations import (
    UNKNOWN_SYNDROME,
    ArtifactCache,
    compare_with_table,
    check_structure,
    load_table,
    needed_unknown_residues,
    universality,
)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
BUILTIN_SPECS = {"qr31": "qr31.spec", "rs15": "rs15.spec", "golay23": "golay23.spec"}
BUILTIN_TABLES = {"table1": "table1.txt", "table3": "table3.txt", "table4": "table4.txt"}
DEFAULT_SEED = 20120101


class UsageError(Exception):
    pass


# -- key-value reports --------------------------------------------------------

def format_report(pairs):
    return "".join(f"{k}: {v}\n" for k, v in pairs)


def parse_report(text):
    pairs = []
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(": ")
        if not sep:
            raise ValueError(f"malformed report line {line!r}")
        pairs.append((key, value))
    return pairs


def _emit(pairs, fmt):
    if fmt == "kv":
        sys.stdout.write(format_report(pairs))
    else:
        width = max((len(k) for k, _ in pairs), default=0)
        for k, v in pairs:
            print(f"{k.ljust(width)}  {v}")


def _hexlist(values):
    return ",".join(format(v, "x") for v in values) or "-"


# -- input resolution ---------------------------------------------------------

def _read_source(name, builtins, kind):
    path = Path(name)
    if path.exists():
        return path.read_text()
    if name in builtins:
        return files("mvif.data").joinpath(builtins[name]).read_text()
    raise UsageError(f"{kind} file not found: {name}")


def load_code(name):
    text = _read_source(name, BUILTIN_SPECS, "code spec")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BaseFieldWarning)
        try:
            return parse_code_spec(text)
        except (ValueError, KeyError) as exc:
            raise UsageError(f"bad code spec {name}: {exc}") from exc


def parse_word(text, code):
    try:
        word = [int(x, 16) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"received word is not comma-separated hex: {exc}") from exc
    if len(word) != code.n:
        raise UsageError(f"received word has {len(word)} symbols, expected {code.n}")
    return word


def _cache(args):
    return ArtifactCache(args.cache_dir)


def _artifacts(args, code, pipeline):
    cache = _cache(args)
    if pipeline == "gelp":
        return cache.gelp(code, force=getattr(args, "force", False))
    return [cache.unknown_syndrome(code, r) for r in needed_unknown_residues(code)]


# -- commands -----------------------------------------------------------------

def cmd_field_info(args):
    if args.field:
        field = parse_field_triple(args.field)
    elif args.code:
        field = load_code(args.code).field
    else:
        raise UsageError("field-info needs --field or --code")
    pairs = [
        ("p", field.p),
        ("e", field.e),
        ("primitive_poly", field.poly_hex()),
        ("N", field.N),
    ]
    if args.table:
        pairs += [(f"alpha^{i}", format(field.alpha(i), "x")) for i in range(field.N)]
    _emit(pairs, args.format)
    return EXIT_OK


def cmd_code_info(args):
    code = load_code(args.code)
    p, e, poly = code.field.triple()
    _emit([
        ("n", code.n),
        ("q", code.q),
        ("field", f"{p}, {e}, {poly}"),
        ("base_set", ",".join(map(str, code.base_set))),
        ("t", code.t),
        ("defining_set", ",".join(map(str, code.defining_set))),
        ("generator", _hexlist(code.generator)),
        ("gcd_n_q_minus_1", code.base_gcd),
        ("correctable_patterns", code.pattern_count()),
        ("unknown_residues", ",".join(map(str, needed_unknown_residues(code))) or "-"),
    ], args.format)
    return EXIT_OK


def cmd_build(args):
    code = load_code(args.code)
    cache = _cache(args)
    verify_injectivity(code)
    if args.kind == UNKNOWN_SYNDROME:
        targets = [args.target] if args.target is not None else needed_unknown_residues(code)
        arts = [cache.unknown_syndrome(code, r, force=args.force) for r in targets]
    else:
        arts = cache.gelp(code, force=args.force)
    pairs = []
    for art in arts:
        report = check_structure(art, code)
        pairs += [
            (f"{art.name}.path", cache.path(code, art.kind, art.index)),
            (f"{art.name}.terms", report.terms),
            (f"{art.name}.coefficients_in_base_field", str(report.coefficients_in_base_field).lower()),
            (f"{art.name}.congruence_clean", str(report.congruence_clean).lower()),
            (f"{art.name}.residues", ",".join(map(str, report.residues)) or "-"),
        ]
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            from .representations import format_artifact
            (out / f"{art.kind}-{art.index}.txt").write_text(format_artifact(art, code))
    _emit(pairs, args.format)
    return EXIT_OK


def cmd_verify_table(args):
    code = load_code(args.code)
    text = _read_source(args.table, BUILTIN_TABLES, "table")
    rows = load_table(text, code.field.N)
    cache = _cache(args)
    if args.kind == UNKNOWN_SYNDROME:
        if args.index is None:
            raise UsageError("--index (target residue) required for unknown-syndrome tables")
        art = cache.unknown_syndrome(code, args.index)
    else:
        if args.index is None:
            raise UsageError("--index (locator coefficient) required for gelp tables")
        art = {a.index: a for a in cache.gelp(code)}[args.index]
    violations = [
        exps for exps, _ in rows
        if (sum(d * k for d, k in zip(art.base_set, exps)) - art.target_degree) % code.n
    ]
    cmp_ = compare_with_table(art, rows, code)
    good, total = universality(code, art)
    pairs = [
        ("rows", cmp_.rows),
        ("congruence_residue", art.target_degree),
        ("congruence_violations", len(violations)),
        ("duplicate_rows", len(cmp_.duplicate_rows)),
        ("missing_terms", len(cmp_.missing)),
        ("extra_terms", len(cmp_.extra)),
        ("identical_terms", str(cmp_.identical).lower()),
        ("agreement", f"{cmp_.agree}/{cmp_.total}"),
        ("artifact_exact", f"{good}/{total}"),
    ]
    for pat, point, want, got in cmp_.offending:
        pairs.append(("offending", f"{pat} at ({_hexlist(point)}) artifact={want:x} table={got:x}"))
    _emit(pairs, args.format)
    return EXIT_OK


def decode_report(result, code, trace=False):
    pairs = [
        ("status", result.status),
        ("reason", result.reason or "-"),
        ("syndromes", _hexlist(result.syndromes)),
        ("provenance", ",".join(result.provenance) or "-"),
        ("locator", _hexlist(result.locator)),
        ("locations", ",".join(map(str, result.locations)) or "-"),
        ("magnitudes", _hexlist(result.magnitudes)),
        ("error", _hexlist(result.error.word(code.n)) if result.error else "-"),
        ("corrected", _hexlist(result.codeword) if result.codeword else "-"),
    ]
    if trace and result.trace:
        for row in result.trace:
            delta = "-" if row.delta is None else format(row.delta, "x")
            pairs.append((
                f"trace.{row.k}",
                f"delta={delta} C={_hexlist(row.C)} A={_hexlist(row.A)} "
                f"l={row.l} gamma={row.gamma:x}",
            ))
    return pairs


def cmd_decode(args):
    code = load_code(args.code)
    word = parse_word(args.received, code)
    arts = _artifacts(args, code, args.pipeline)
    if args.pipeline == "gelp":
        result = decode_gelp(code, word, arts)
    else:
        result = decode_one_step(code, word, arts, trace=args.trace)
    _emit(decode_report(result, code, trace=args.trace), args.format)
    return EXIT_OK if result.ok else EXIT_FAILURE


def _sweep_weight(payload):
    code, arts, pipeline, weight = payload
    passed = failed = 0
    first = None
    for pat in code.patterns:
        if pat.weight != weight:
            continue
        word = pat.word(code.n)
        if pipeline == "gelp":
            res = decode_gelp(code, word, arts)
        else:
            res = decode_one_step(code, word, arts)
        if res.ok and res.error == pat:
            passed += 1
        else:
            failed += 1
            if first is None:
                first = str(pat)
    return weight, passed, failed, first


def cmd_sweep(args):
    code = load_code(args.code)
    arts = _artifacts(args, code, args.pipeline)
    start = time.perf_counter()
    jobs = [(code, arts, args.pipeline, w) for w in range(1, code.t + 1)]
    workers = args.workers or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_weight, jobs))
    else:
        results = [_sweep_weight(j) for j in jobs]
    pairs = [("seed", args.seed)]
    total_pass = total_fail = 0
    for weight, passed, failed, first in results:
        total_pass += passed
        total_fail += failed
        pairs.append((f"weight.{weight}", f"{passed}/{passed + failed}"))
        if first:
            pairs.append((f"weight.{weight}.first_failure", first))
    rng = random.Random(args.seed)
    rand_fail = 0
    k = code.n - (len(code.generator) - 1)
    for _ in range(args.random):
        msg = [rng.choice(code.magnitudes + [0]) for _ in range(k)]
        cw = encode(code, msg)
        pat = rng.choice(code.patterns)
        word = [code.field.add(a, b) for a, b in zip(cw, pat.word(code.n))]
        if args.pipeline == "gelp":
            res = decode_gelp(code, word, arts)
        else:
            res = decode_one_step(code, word, arts)
        if not (res.ok and res.codeword == cw):
            rand_fail += 1
    pairs += [
        ("random_codewords", f"{args.random - rand_fail}/{args.random}"),
        ("total", f"{total_pass}/{total_pass + total_fail}"),
        ("seconds", f"{time.perf_counter() - start:.2f}"),
    ]
    _emit(pairs, args.format)
    return EXIT_OK if total_fail == 0 and rand_fail == 0 else EXIT_FAILURE


def cmd_selftest(args):
    """Reproduce both worked examples end to end."""
    checks = []
    qr = load_code("qr31")
    f = qr.field
    art = _cache(args).unknown_syndrome(qr, 3)
    word = ErrorPattern((3, 7, 20), (1, 1, 1)).word(31)
    res = decode_one_step(qr, word, [art], trace=True)
    checks.append(("qr31.syndromes", [f.log[s] for s in res.syndromes] == [4, 8, 27, 16, 16, 23]))
    checks.append(("qr31.locations", res.locations == [3, 7, 20]))
    checks.append(("qr31.corrected", res.ok and not any(res.codeword)))
    final = res.trace[-1]
    checks.append(("qr31.ifbma_row6", [f.log[c] for c in final.C] == [12, 16, 3, 11]))
    rs = load_code("rs15")
    g = rs.field
    arts = _cache(args).gelp(rs)
    word = ErrorPattern((2, 14), (g.alpha(6), g.alpha(5))).word(15)
    res = decode_gelp(rs, word, arts)
    checks.append(("rs15.locator", [g.log[c] for c in res.locator] == [0, 13, 1]))
    checks.append(("rs15.magnitudes", [g.log[m] for m in res.magnitudes] == [6, 5]))
    checks.append(("rs15.corrected", res.ok and not any(res.codeword)))
    _emit([(name, "pass" if ok else "FAIL") for name, ok in checks], args.format)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_INTERNAL


def build_parser():
    parser = argparse.ArgumentParser(prog="mvif", description=__doc__.splitlines()[0])
    parser.add_argument("--cache-dir", default=os.environ.get("MVIF_CACHE_DIR"),
                        help="artifact cache directory (env MVIF_CACHE_DIR)")
    parser.add_argument("--format", choices=("text", "kv"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="describe a field")
    p.add_argument("--field", help="'p, e, poly-hex', e.g. '2, 5, 0x25'")
    p.add_argument("--code")
    p.add_argument("--table", action="store_true", help="list every power of alpha")
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("code-info", help="describe a cyclic code")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("build", help="build and cache representation artifacts")
    p.add_argument("--code", required=True)
    p.add_argument("--kind", choices=(UNKNOWN_SYNDROME, "gelp"), default=UNKNOWN_SYNDROME)
    p.add_argument("--target", type=int, help="unknown-syndrome residue")
    p.add_argument("--force", action="store_true", help="rebuild even if cached")
    p.add_argument("--out", help="also write artifact files to this directory")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify-table", help="check a printed term table")
    p.add_argument("--code", required=True)
    p.add_argument("--table", required=True, help="file or table1/table3/table4")
    p.add_argument("--kind", choices=(UNKNOWN_SYNDROME, "gelp"), default=UNKNOWN_SYNDROME)
    p.add_argument("--index", type=int, help="target residue or locator index")
    p.set_defaults(func=cmd_verify_table)

    p = sub.add_parser("decode", help="decode one received word")
    p.add_argument("--code", required=True)
    p.add_argument("--received", required=True, help="comma-separated hex symbols")
    p.add_argument("--pipeline", choices=("one-step", "gelp"), default="one-step")
    p.add_argument("--trace", action="store_true", help="append IFBMA rows")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sweep", help="decode every correctable pattern")
    p.add_argument("--code", required=True)
    p.add_argument("--pipeline", choices=("one-step", "gelp"), default="one-step")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--random", type=int, default=100, help="random codeword trials")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="reproduce the QR(31) and RS(15) examples")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None:
        print(f"# seed {args.seed}", file=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, TableParseError) as exc:
        print(f"mvif: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"mvif: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except MVIFError as exc:
        print(f"mvif: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
