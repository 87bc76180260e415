"""Command-line frontend.

Every command writes one JSON report::

    {"command", "input", "seed", "versions", "result", "witnesses", "errors"}

Witnesses are ``{"word", "claim"}`` pairs that ``check-witness`` re-evaluates.
Exit status: 0 success, 2 when the input looks non-dense, 1 on other errors.
"""

import argparse
import json
import sys
from importlib import metadata
from importlib.resources import files

from .catalog import NAMES, catalog, parse_spec
from .congruence import (decompose_modulus, image_order_mod, ladder_exponents,
                         level_primes, predicted_order, prime_power_ladder)
from .density import primes_for_dense, primes_for_dense_transvection
from .errors import NotDenseSignal, StrongApproxError
from .groups import Word, group_from_json, group_to_json, parse_group, random_genset
from .modular import sl_order
from .params import BFS_CAP, ORBIT_CAP, SieveParams
from .recognition import _jsonable, is_surjective_mod_p
from .witness import check_claim, commutator_word, power_word

EXIT_OK, EXIT_ERROR, EXIT_NOT_DENSE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- input

def load_group(args):
    if args.catalog and args.group:
        raise UsageError("give either --catalog or --group, not both")
    if args.catalog:
        name, param = parse_spec(args.catalog)
        return catalog(name, param), {"catalog": args.catalog}
    if args.group:
        with open(args.group) as fh:
            text = fh.read()
        doc = json.loads(text)
        # also accept a report whose result is a group (catalog, random-group)
        if isinstance(doc, dict) and isinstance(doc.get("result"), dict) and "generators" in doc["result"]:
            G = group_from_json(doc["result"])
        else:
            G = parse_group(text)
        return G, {"group_file": args.group, "group": group_to_json(G)}
    raise UsageError("an input group is required (--catalog NAME:PARAM or --group FILE)")


def sieve_params(args, degree, **kw):
    caps = {"bfs_cap": args.bfs_cap, "orbit_cap": args.orbit_cap,
            "word_budget": args.word_budget, "leaf_budget": args.leaf_budget}
    return SieveParams.for_degree(degree, seed=args.seed, **kw, **caps)


def parse_word(text):
    try:
        return Word.from_json(json.loads(text))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad word {text!r}: expected JSON like [[0, 1], [1, -2]]") from exc


def parse_int_list(text):
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


# ---------------------------------------------------------------- witnesses

def _entry(word, claim):
    w = word.to_json() if isinstance(word, Word) else [x.to_json() for x in word]
    return {"word": w, "claim": claim}


def _pair_word(pair):
    k = pair["k"]
    return commutator_word(power_word(pair["g"], k), power_word(pair["h"], k))


def sieve_witnesses(report):
    """Integral witnesses behind the candidate sets."""
    out = []
    w = report.witness
    if report.sieve == "order":
        out.append(_entry(w["h"], {"kind": "infinite_order"}))
    elif report.sieve in ("abs_irreducible", "normal_closure_abs_irreducible"):
        if report.sieve == "abs_irreducible":
            out.append(_entry(w["basis_words"], {"kind": "algebra_basis", "gram_det": str(report.d)}))
    elif report.sieve == "monomial":
        out += [_entry(_pair_word(p), {"kind": "nontrivial"}) for p in w["pairs"]]
    elif report.sieve == "solvable":
        out += [_entry(leaves, {"kind": "tree_nontrivial"}) for leaves in w["trees"]]
    elif report.sieve in ("isometry", "similarity"):
        out += [_entry(x, {"kind": "trace_asymmetric"}) for x in w["words"]]
    return out


def verdict_witnesses(v):
    """Witnesses behind a positive surjectivity certificate mod p."""
    if v.verdict != "yes":
        return []
    c, p = v.certificate, v.p
    out = []
    if "non_monomial" in c:
        out.append(_entry(_pair_word(c["non_monomial"]), {"kind": "nontrivial", "modulus": p}))
    if "non_solvable" in c:
        out.append(_entry(c["non_solvable"]["leaves"], {"kind": "tree_nontrivial", "modulus": p}))
    if "trace_asymmetric" in c:
        out.append(_entry(c["trace_asymmetric"], {"kind": "trace_asymmetric", "modulus": p}))
    if "large_order" in c:
        lo = c["large_order"]
        out.append(_entry(lo["word"], {"kind": "order_exceeds", "modulus": p, "bound": lo["exceeds"]}))
    return out


def pi_witnesses(report):
    out = []
    for r in report.sieves:
        out += sieve_witnesses(r)
    for _, v in sorted(report.verdicts.items()):
        out += verdict_witnesses(v)
    return out


# ---------------------------------------------------------------- commands

def cmd_pi(args):
    G, echo = load_group(args)
    report = primes_for_dense(G, sieve_params(args, G.degree), diagnostics=args.diagnostics)
    return echo, report.to_json(), pi_witnesses(report)


def cmd_pi_transvection(args):
    G, echo = load_group(args)
    t = parse_word(args.t)
    echo["t"] = t.to_json()
    params = sieve_params(args, G.degree, order_bound=1)
    report = primes_for_dense_transvection(G, t, params, parse_int_list(args.scan_primes))
    return echo, report.to_json(), pi_witnesses(report)


def cmd_image_order(args):
    G, echo = load_group(args)
    echo["mod"] = args.mod
    order = image_order_mod(G, args.mod, args.bfs_cap, args.orbit_cap, args.seed)
    full = sl_order(G.degree, args.mod)
    result = {"modulus": args.mod, "order": order, "sl_order": full, "index": full // order}
    if args.level:
        echo["level"] = args.level
        split = decompose_modulus(args.mod, args.level, G.degree)
        order_ab = image_order_mod(G, split.ab, args.bfs_cap, args.orbit_cap, args.seed)
        result["split"] = {"a": split.a, "b": split.b, "c": split.c, "order_mod_ab": order_ab,
                           "predicted_order": predicted_order(G, split, order_ab),
                           "level_primes": level_primes(args.level)}
    return echo, result, []


def cmd_ladder(args):
    G, echo = load_group(args)
    echo.update({"prime": args.prime, "max_e": args.max_e})
    ladder = prime_power_ladder(G, args.prime, args.max_e, args.bfs_cap, args.orbit_cap, args.seed)
    exps = ladder_exponents(ladder, args.prime)
    result = {"prime": args.prime, "orders": ladder, "exponents": exps,
              "non_decreasing": all(a <= b for a, b in zip(exps, exps[1:]))}
    return echo, result, []


def cmd_certify(args):
    G, echo = load_group(args)
    echo["prime"] = args.prime
    v = is_surjective_mod_p(G, args.prime, sieve_params(args, G.degree))
    return echo, v.to_json(), verdict_witnesses(v)


def cmd_catalog(args):
    if not args.catalog and not args.group:
        return {}, {"names": list(NAMES)}, []
    G, echo = load_group(args)
    return echo, group_to_json(G), []


def cmd_random_group(args):
    echo = {"degree": args.degree, "ngens": args.ngens, "steps": args.steps, "bound": args.bound}
    G = random_genset(args.degree, args.ngens, args.seed, args.steps, args.bound)
    return echo, group_to_json(G), []


def load_golden(path=None):
    if path is None:
        return json.loads(files("strongapprox").joinpath("data/tables.json").read_text())
    with open(path) as fh:
        return json.load(fh)


def cmd_corpus(args):
    golden = load_golden(args.golden)
    only = set(args.only.split(",")) if args.only else None
    rows, mismatches = [], 0
    for row in golden["rows"]:
        if only and row["group"] not in only:
            continue
        G = catalog(row["group"], row["parameter"])
        expected = sorted(int(p) for p in row["level"])
        entry = {"group": row["group"], "parameter": row["parameter"], "expected": expected}
        try:
            report = primes_for_dense(G, sieve_params(args, G.degree))
            entry["pi_tilde"] = sorted(report.pi_tilde)
            entry["undetermined"] = sorted(report.undetermined)
        except StrongApproxError as exc:
            entry["error"] = {"type": type(exc).__name__, "message": str(exc)}
        entry["match"] = entry.get("pi_tilde") == expected
        mismatches += not entry["match"]
        rows.append(entry)
    echo = {"golden": args.golden or "builtin", "only": sorted(only) if only else None}
    result = {"rows": rows, "matched": len(rows) - mismatches, "total": len(rows)}
    return echo, result, [], (EXIT_ERROR if mismatches else EXIT_OK)


def cmd_check_witness(args):
    G, echo = load_group(args)
    if args.report:
        with open(args.report) as fh:
            doc = json.load(fh)
        entries = doc.get("witnesses", [])
        if "group" in doc.get("input", {}) and not args.group and not args.catalog:
            G = group_from_json(doc["input"]["group"])
        echo["report"] = args.report
    elif args.word and args.claim:
        entries = [{"word": json.loads(args.word), "claim": json.loads(args.claim)}]
    else:
        raise UsageError("give --report FILE or both --word and --claim")
    checks = []
    for e in entries:
        ok = check_claim(G, e["word"], e["claim"])
        checks.append({"claim": e["claim"], "ok": ok})
    failed = sum(not c["ok"] for c in checks)
    result = {"checked": len(checks), "failed": failed, "checks": checks}
    return echo, result, [], (EXIT_ERROR if failed else EXIT_OK)


# ---------------------------------------------------------------- parser

def _group_args(p):
    p.add_argument("--catalog", metavar="NAME:PARAM", help=f"catalog group ({', '.join(NAMES)})")
    p.add_argument("--group", metavar="FILE", help="group JSON file")


def build_parser():
    parser = _Parser(prog="strongapprox", description="Exceptional primes and congruence images "
                     "of Zariski dense subgroups of SL(n, Z).")
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--bfs-cap", type=int, default=BFS_CAP)
    common.add_argument("--orbit-cap", type=int, default=ORBIT_CAP)
    common.add_argument("--word-budget", type=int, default=2000)
    common.add_argument("--leaf-budget", type=int, default=20000)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", metavar="FILE", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pi", parents=[common], help="exceptional primes (prime degree)")
    _group_args(p)
    p.add_argument("--diagnostics", action="store_true", help="add density diagnostics")
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("pi-transvection", parents=[common], help="exceptional primes given a transvection")
    _group_args(p)
    p.add_argument("--t", required=True, metavar="WORD", help="word for the transvection, e.g. '[[0,1]]'")
    p.add_argument("--scan-primes", default="", metavar="P,Q,...", help="extra primes to decide")
    p.set_defaults(func=cmd_pi_transvection)

    p = sub.add_parser("image-order", parents=[common], help="order of the image mod m")
    _group_args(p)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--level", type=int, help="level M; adds the direct-product prediction")
    p.set_defaults(func=cmd_image_order)

    p = sub.add_parser("ladder", parents=[common], help="image orders mod p, p^2, ...")
    _group_args(p)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-e", type=int, required=True)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("certify", parents=[common], help="decide surjectivity mod a prime")
    _group_args(p)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("catalog", parents=[common], help="print a catalog group (or list names)")
    _group_args(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("random-group", parents=[common], help="random subgroup of SL(n, Z)")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--ngens", type=int, default=2)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--bound", type=int, default=1)
    p.set_defaults(func=cmd_random_group)

    p = sub.add_parser("corpus", parents=[common], help="run the catalog against the golden table")
    p.add_argument("--golden", metavar="FILE", help="golden JSON (default: bundled tables)")
    p.add_argument("--only", metavar="NAMES", help="comma-separated group names to run")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("check-witness", parents=[common], help="re-check witnesses offline")
    _group_args(p)
    p.add_argument("--report", metavar="FILE", help="report whose witnesses to check")
    p.add_argument("--word", help="single word (JSON)")
    p.add_argument("--claim", help="single claim (JSON)")
    p.set_defaults(func=cmd_check_witness)
    return parser


# ---------------------------------------------------------------- output

def versions():
    out = {}
    for pkg in ("artifact", "numpy", "sympy"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = None
    return out


def render_text(doc):
    lines = [f"command: {doc['command']}", f"seed: {doc['seed']}"]
    for k, v in doc["input"].items():
        if k != "group":
            lines.append(f"input.{k}: {json.dumps(v)}")
    result = doc["result"] or {}
    for k, v in result.items():
        if isinstance(v, (list, dict)) and len(json.dumps(v)) > 100:
            v = f"<{type(v).__name__} of {len(v)}>"
        lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v)}")
    lines.append(f"witnesses: {len(doc['witnesses'])}")
    for e in doc["errors"]:
        lines.append(f"error: {e['type']}: {e['message']}")
    return "\n".join(lines) + "\n"


def run(argv=None):
    """Parse ``argv``, run the command; returns ``(exit_status, report)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        doc = {"command": None, "input": {}, "seed": None, "versions": versions(), "result": None,
               "witnesses": [], "errors": [{"type": "UsageError", "message": str(exc)}]}
        return EXIT_ERROR, doc, None
    doc = {"command": args.command, "input": {}, "seed": args.seed, "versions": versions(),
           "result": None, "witnesses": [], "errors": []}
    status = EXIT_OK
    try:
        out = args.func(args)
        echo, result, witnesses = out[:3]
        if len(out) > 3:
            status = out[3]
        doc.update(input=echo, result=result, witnesses=witnesses)
    except NotDenseSignal as exc:
        status = EXIT_NOT_DENSE
        doc["errors"].append({"type": type(exc).__name__, "message": str(exc)})
    except (StrongApproxError, UsageError, ValueError, OSError) as exc:
        status = EXIT_ERROR
        doc["errors"].append({"type": type(exc).__name__, "message": str(exc)})
    return status, _jsonable(doc), args


def main(argv=None):
    status, doc, args = run(argv)
    text = (render_text(doc) if args is not None and args.format == "text"
            else json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args is not None and args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
