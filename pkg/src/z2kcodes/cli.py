"""Command-line interface: file-based code manipulation and checks.

Every subcommand reads a code file (or ``-`` for stdin), prints either a
human-readable summary or, with ``--json``, a versioned machine-readable
report, and exits 0 on success, 1 on a failed check, 2 on usage or parse
errors.  Output ordering is canonical regardless of ``--threads``.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

from .certify import certify_type_II, extremal_bound, is_self_dual
from .doubling import double_code, undouble
from .fileio import CodeFileError, parse_code_file, serialize_code_file
from .golden import golden_check
from .model import (CapacityError, GeneratorMatrix, StandardForm, TypeProfile,
                    residue_code, standardize)
from .rings import DomainError, ZVector
from .search import (CandidateSet, algorithmC_exclusions, recover_source)
from .weights import (merge_distributions, min_euclidean_weight,
                      sample_weights, weight_distribution)

REPORT_VERSION = "report_v1"


def _positions(raw: str):
    try:
        parts = tuple(int(p) for p in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers")
    if any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError("positions are 1-based")
    return parts


def _profile_arg(raw: str):
    try:
        return tuple(int(p) for p in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated block sizes")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="z2kcodes",
        description="linear codes over Z_2k: certificates, weights, doubling")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_file=True):
        p = sub.add_parser(name, help=help_text)
        if needs_file:
            p.add_argument("file", help="code file path, or - for stdin")
        p.add_argument("--json", action="store_true",
                       help="emit a machine-readable report")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads for sliced scans")
        return p

    add("standardize", "rewrite a code file in standard form")
    add("info", "profile, self-duality and Type II certificate")

    p = add("residue", "emit a residue code")
    p.add_argument("--mod", type=int, choices=(2, 4), required=True)

    p = add("weightdist", "exact weight distribution")
    p.add_argument("--kind", choices=("euclidean", "hamming"),
                   default="euclidean")
    p.add_argument("--slices", type=int, default=1,
                   help="partition the scan into this many slices")
    p.add_argument("--slice", type=int, default=None,
                   help="compute only this slice (0-based) of --slices")

    p = add("minweight", "minimum Euclidean weight")
    p.add_argument("--cap", type=int, default=None,
                   help="stop at the first weight below this cap")

    p = add("double", "double the code with a scale-k vector")
    p.add_argument("--u", type=_positions, required=True,
                   help="1-based support of the doubling vector")

    p = add("undouble", "reconstruct source codes of a doubled code")
    p.add_argument("--u", type=_positions, required=True)
    p.add_argument("--target-type", type=_profile_arg, required=True,
                   help="profile of the source, e.g. 16,0,0")
    p.add_argument("--expected-count", type=int, default=None,
                   help="pick the extremal free source with this many "
                        "surviving candidate supports")

    p = add("candidates", "surviving doubling supports (exclusion scan)")
    p.add_argument("--sets", action="store_true",
                   help="print every surviving support")
    p.add_argument("--slices", type=int, default=None,
                   help="scan slices (default: max(threads, 1))")

    p = add("verify-extremal", "random-codeword weight smoke test")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    add("golden-check", "re-certify the shipped golden codes",
        needs_file=False)
    return parser


def _load(path: str) -> GeneratorMatrix:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise CodeFileError(str(err), 0)
    return parse_code_file(text)


def _matrix_payload(matrix: GeneratorMatrix) -> Dict[str, object]:
    return {
        "modulus": matrix.modulus.two_k,
        "length": matrix.n,
        "rows": [[int(x) for x in row] for row in matrix.array],
    }


def _emit(args, payload: Dict[str, object], ok: bool,
          text_lines: Sequence[str]) -> int:
    if args.json:
        report = {"report": REPORT_VERSION, "command": args.command,
                  "ok": ok}
        report.update(payload)
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        for line in text_lines:
            print(line)
    return 0 if ok else 1


def _emit_code(args, matrix: GeneratorMatrix, comments: Sequence[str],
               extra: Optional[Dict[str, object]] = None) -> int:
    if args.json:
        payload: Dict[str, object] = {"matrix": _matrix_payload(matrix)}
        if extra:
            payload.update(extra)
        return _emit(args, payload, True, ())
    sys.stdout.write(serialize_code_file(matrix, comments=comments))
    return 0


def _cmd_standardize(args) -> int:
    sf = standardize(_load(args.file))
    comments = ["standard form, profile %s" % (sf.profile.ks,),
                "column order %s" % (sf.perm,)]
    return _emit_code(args, sf.matrix, comments,
                      {"profile": list(sf.profile.ks),
                       "perm": list(sf.perm)})


def _cmd_info(args) -> int:
    sf = standardize(_load(args.file))
    cert = certify_type_II(sf)
    payload = {
        "length": sf.n,
        "modulus": sf.modulus.two_k,
        "profile": list(sf.profile.ks),
        "size": str(sf.size()),
        "self_dual": is_self_dual(sf),
        "certificate": {
            "pairwise_inner_products_zero": cert.pairwise_inner_products_zero,
            "row_weights_div_4k": cert.row_weights_div_4k,
            "self_dual_size": cert.self_dual_size,
            "valid": cert.valid,
            "is_type_ii": cert.is_type_ii,
            "witness_row": cert.witness_row,
            "witness_pair": cert.witness_pair,
        },
    }
    lines = [
        "length: %d over Z%d" % (sf.n, sf.modulus.two_k),
        "profile: %s" % (sf.profile.ks,),
        "size: %s" % sf.size(),
        "self-dual: %s" % payload["self_dual"],
        "type II: %s" % cert.is_type_ii,
    ]
    return _emit(args, payload, True, lines)


def _cmd_residue(args) -> int:
    sf = standardize(_load(args.file))
    j = 1 if args.mod == 2 else 2
    res = residue_code(sf, j)
    return _emit_code(args, res.matrix,
                      ["mod-%d residue, profile %s" % (args.mod,
                                                       res.profile.ks)],
                      {"profile": list(res.profile.ks)})


def _cmd_weightdist(args) -> int:
    sf = standardize(_load(args.file))
    slices = max(1, args.slices)
    layout: Dict[str, object] = {"slices": slices, "slice": args.slice}
    if args.slice is not None:
        if not 0 <= args.slice < slices:
            raise DomainError("--slice must lie in [0, --slices)")
        dist = weight_distribution(sf, kind=args.kind,
                                   partition=(args.slice, slices))
    elif slices == 1:
        dist = weight_distribution(sf, kind=args.kind)
    else:
        def run(i):
            return weight_distribution(sf, kind=args.kind,
                                       partition=(i, slices))
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                parts = list(pool.map(run, range(slices)))
        else:
            parts = [run(i) for i in range(slices)]
        dist = merge_distributions(parts)
    counts = {w: dist.counts[w] for w in sorted(dist.counts)}
    payload = {"kind": args.kind, "layout": layout,
               "counts": {str(w): c for w, c in counts.items()}}
    lines = ["%s weight distribution%s:" %
             (args.kind,
              "" if args.slice is None else " (slice %d/%d)"
              % (args.slice, slices))]
    lines += ["  %d: %d" % (w, c) for w, c in counts.items()]
    return _emit(args, payload, True, lines)


def _cmd_minweight(args) -> int:
    sf = standardize(_load(args.file))
    result = min_euclidean_weight(sf, cap=args.cap)
    payload = {"value": result.value, "exact": result.exact}
    qual = "exact" if result.exact else "upper bound (cap hit)"
    return _emit(args, payload, True,
                 ["minimum euclidean weight: %d (%s)" % (result.value, qual)])


def _doubling_vector(sf: StandardForm, positions) -> ZVector:
    k = sf.modulus.two_k // 2
    coords = [0] * sf.n
    for p in positions:
        if p > sf.n:
            raise DomainError("position %d exceeds length %d" % (p, sf.n))
        coords[p - 1] = k
    return ZVector(sf.modulus, coords)


def _cmd_double(args) -> int:
    sf = standardize(_load(args.file))
    result = double_code(sf, _doubling_vector(sf, args.u))
    doubled = result.doubled
    comments = ["double with scale-%d vector on %s" %
                (sf.modulus.two_k // 2, sorted(args.u)),
                "profile %s" % (doubled.profile.ks,)]
    return _emit_code(args, doubled.matrix, comments,
                      {"profile": list(doubled.profile.ks),
                       "u": sorted(args.u)})


def _cmd_undouble(args) -> int:
    sf = standardize(_load(args.file))
    dv = _doubling_vector(sf, args.u)
    if args.expected_count is not None:
        source = recover_source(sf, dv, args.expected_count,
                                threads=max(1, args.threads))
        return _emit_code(
            args, source.matrix,
            ["free source with %d surviving supports" % args.expected_count],
            {"profile": list(source.profile.ks),
             "expected_count": args.expected_count})
    sources = undouble(sf, dv, TypeProfile(args.target_type))
    if not sources:
        return _emit(args, {"sources": []}, False,
                     ["no source of type %s found" % (args.target_type,)])
    picked = sorted(sources, key=lambda s: s.matrix.array.tobytes())
    extra = {"count": len(picked),
             "sources": [_matrix_payload(s.matrix) for s in picked]}
    return _emit_code(args, picked[0].matrix,
                      ["source 1 of %d with type %s"
                       % (len(picked), (args.target_type,))], extra)


def _witness_payload(ledger, mask: int) -> Dict[str, object]:
    s = ledger.positions_of(mask)
    w = ledger.witness(s)
    return {
        "support": list(s.sorted()),
        "step": w.step,
        "row": w.row,
        "toggled_rows": sorted(w.toggled_rows),
        "scan_index": w.scan_index,
        "codeword": list(w.codeword.coords),
    }


def _cmd_candidates(args) -> int:
    sf = standardize(_load(args.file))
    threads = max(1, args.threads)
    slices = args.slices if args.slices is not None else threads
    ledger = algorithmC_exclusions(sf, slices=slices, threads=threads)
    step1, step2 = ledger.provenance_counts()
    payload: Dict[str, object] = {
        "count": ledger.candidate_count(),
        "excluded": ledger.excluded_count(),
        "universe": ledger.universe_size(),
        "weight16_words": ledger.n_weight16,
        "provenance": {"step1": step1, "step2": step2},
        "layout": {"slices": slices, "threads": threads},
        "witness_sample": [
            _witness_payload(ledger, int(m))
            for m in ledger.excluded_masks()[:8]],
    }
    lines = [str(ledger.candidate_count())]
    if args.sets:
        sets = sorted(tuple(ledger.positions_of(int(m)).sorted())
                      for m in ledger.candidate_masks())
        if args.json:
            payload["sets"] = [list(s) for s in sets]
        lines += [" ".join(str(p) for p in s) for s in sets]
    return _emit(args, payload, True, lines)


def _cmd_verify_extremal(args) -> int:
    sf = standardize(_load(args.file))
    dist = sample_weights(sf, args.samples, args.seed)
    k = sf.modulus.two_k // 2
    bound = extremal_bound(sf.n, k)
    divisor = 4 * k
    nonzero = [w for w in dist.counts if w > 0]
    min_seen = min(nonzero) if nonzero else None
    all_div = all(w % divisor == 0 for w in dist.counts)
    ok = all_div and (min_seen is None or min_seen >= bound)
    payload = {
        "samples": args.samples,
        "seed": args.seed,
        "bound": bound,
        "divisor": divisor,
        "min_sampled_weight": min_seen,
        "all_divisible": all_div,
    }
    lines = ["sampled %d codewords (seed %d)" % (args.samples, args.seed),
             "min nonzero weight seen: %s (bound %d)" % (min_seen, bound),
             "all weights divisible by %d: %s" % (divisor, all_div),
             "PASS" if ok else "FAIL"]
    return _emit(args, payload, ok, lines)


def _cmd_golden_check(args) -> int:
    report = golden_check()
    lines = []
    for code in report["codes"]:
        failed = [k for k, v in code["checks"].items() if not v]
        lines.append("%-4s %s%s" % (code["name"],
                                    "pass" if code["ok"] else "FAIL",
                                    "" if code["ok"] else " " + ",".join(failed)))
    lines.append("distinct distributions: %s"
                 % report["distinct_distributions"])
    lines.append("PASS" if report["ok"] else "FAIL")
    return _emit(args, report, bool(report["ok"]), lines)


_HANDLERS = {
    "standardize": _cmd_standardize,
    "info": _cmd_info,
    "residue": _cmd_residue,
    "weightdist": _cmd_weightdist,
    "minweight": _cmd_minweight,
    "double": _cmd_double,
    "undouble": _cmd_undouble,
    "candidates": _cmd_candidates,
    "verify-extremal": _cmd_verify_extremal,
    "golden-check": _cmd_golden_check,
}


def cli_dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as err:
        return int(err.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except CodeFileError as err:
        print("parse error: %s" % err, file=sys.stderr)
        return 2
    except (DomainError, CapacityError) as err:
        print("error: %s" % err, file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
