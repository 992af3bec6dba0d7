"""Batch command-line front end.

Subcommands: diam, decompose, certify, check-seed, surjectivity.
Exit codes: 0 success, 2 configuration problem, 3 budget exceeded,
4 internal/verification failure.  A failing check-seed exits 1 (the
query succeeded; the answer is "no").
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import bddgen, cayley, certify
from .errors import (
    BudgetExceededError,
    ConfigError,
    LogdiamError,
    ModulusError,
    PreconditionError,
    SeedConditionError,
)
from .matmod import (
    AffineModQ,
    GenSet,
    MatModQ,
    ProductModQ,
    SeedConditions,
    check_seed,
)
from .modarith import factorize, min_level_L0

EXIT_OK = 0
EXIT_NO = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


def parse_q(text: str) -> list[int]:
    """Accept "7", "2..64", or "3,9,27"."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out or any(q < 1 for q in out):
        raise ConfigError(f"invalid q specification {text!r}")
    return out


def parse_bytes(text: str) -> int:
    text = text.strip().upper()
    mult = 1
    for suffix, m in (("K", 1 << 10), ("M", 1 << 20), ("G", 1 << 30)):
        if text.endswith(suffix):
            text, mult = text[:-1], m
            break
    n = int(text) * mult
    if n <= 0:
        raise ConfigError("budget must be positive")
    return n


def make_fm(q: int, L: int, d: int):
    fm = factorize(q)
    if not L:
        L = min_level_L0(d, fm.primes)[1]
    return fm.with_level(L)


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def load_target(path: str, spec: GenSet, q: int):
    obj = load_json(path)
    if "components" in obj:
        return ProductModQ(
            tuple(
                MatModQ.group_element(len(rows), q, tuple(x % q for row in rows for x in row))
                for rows in obj["components"]
            )
        )
    if "linear" in obj:
        rows = obj["linear"]
        lin = MatModQ.group_element(
            len(rows), q, tuple(x % q for row in rows for x in row)
        )
        return AffineModQ(lin, tuple(x % q for x in obj["trans"]))
    rows = obj["rows"]
    return MatModQ.group_element(
        len(rows), q, tuple(x % q for row in rows for x in row)
    )


def _out_stream(args):
    return open(args.out, "w") if args.out else sys.stdout


def cmd_diam(args) -> int:
    spec = GenSet.load(args.spec)
    qs = parse_q(args.q)
    budget = parse_bytes(args.budget_mem)
    if args.threads > 1:
        # one closure per worker; assembly order is fixed by sorting
        uniq = sorted(set(qs))
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            recs = tuple(pool.map(lambda q: cayley.diameter(spec, q, budget), uniq))
        fitted, arg = None, None
        for r in recs:
            if r.q >= 3 and (fitted is None or r.ratio > fitted):
                fitted, arg = r.ratio, r.q
        report = cayley.ScanReport(recs, (), fitted, arg)
    else:
        report = cayley.diameter_scan(spec, qs, budget_bytes=budget)
    if report.failures:
        raise BudgetExceededError(f"scan failures: {report.failures}")
    stream = _out_stream(args)
    stream.write(cayley.scan_csv(report))
    if args.out:
        stream.close()
    summary = {
        "count": len(report.records),
        "fitted_C": report.fitted_c,
        "max_ratio_q": report.max_ratio_q,
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _seed_pair(args, fm, d: int) -> bddgen.SeedPair:
    if args.seeds == "search":
        return bddgen.find_seed_pair(fm, d)
    obj = load_json(args.seeds)
    q = fm.q

    def mat(rows):
        return MatModQ.group_element(len(rows), q, tuple(x % q for row in rows for x in row))

    return bddgen.SeedPair(mat(obj["g0"]), mat(obj["g0p"]), fm)


def cmd_decompose(args) -> int:
    if args.verify:
        word = bddgen.ConjugateWord.load(args.verify)
        res = bddgen.verify_word(word, word.evaluate())
        if not res:
            print(f"FAIL: {res.detail}", file=sys.stderr)
            return EXIT_INTERNAL
        print("verified")
        return EXIT_OK
    q = parse_q(args.q)[0]
    rows = load_json(args.target)["rows"]
    target = MatModQ.group_element(
        len(rows), q, tuple(x % q for row in rows for x in row)
    )
    fm = make_fm(q, args.L, target.d)
    seeds = _seed_pair(args, fm, target.d)
    word = bddgen.step6_decompose(target, seeds)
    res = bddgen.verify_word(word, target)
    if not res:
        print(f"FAIL: {res.detail}", file=sys.stderr)
        return EXIT_INTERNAL
    stream = _out_stream(args)
    json.dump(word.to_json(), stream, sort_keys=True)
    stream.write("\n")
    if args.out:
        stream.close()
    print(f"letters: {len(word.letters)} (budget {bddgen.word_budget(target.d)})",
          file=sys.stderr)
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = GenSet.load(args.spec)
    q = parse_q(args.q)[0]
    fm = make_fm(q, args.L, spec.dims[0])
    if args.verify:
        obj = load_json(args.verify)
        word = cayley.CayleyWord(tuple(obj["word"]))
        target = load_target(args.target, spec, q)
        value = word.evaluate(spec, q)
        ok = certify.to_tuple(value) == certify.to_tuple(target)
        print("verified" if ok else "FAIL: word does not evaluate to target",
              file=(sys.stdout if ok else sys.stderr))
        return EXIT_OK if ok else EXIT_INTERNAL
    target = load_target(args.target, spec, q)
    rng = random.Random(0xC1)
    if args.seeds != "search":
        raise ConfigError("certify supports --seeds search (kit is searched)")
    if spec.kind == "SA":
        kit = certify.find_sa_kit(spec, fm, rng)
        word, acct = certify.assemble_sa_certificate(target, kit, spec)
    elif spec.kind == "product":
        kit = certify.find_product_kit(spec, fm, rng)
        word, acct = certify.assemble_product_certificate(target, kit, spec)
    else:
        raise ConfigError(f"certify needs an SA or product spec, got {spec.kind}")
    payload = {
        "q": q,
        "word": list(word.indices),
        "accounting": {
            "assembled": acct.assembled,
            "bound": acct.bound,
            "n_letters": acct.n_letters,
            "terms": acct.terms,
        },
    }
    stream = _out_stream(args)
    json.dump(payload, stream, sort_keys=True)
    stream.write("\n")
    if args.out:
        stream.close()
    print(f"length {acct.assembled} <= bound {acct.bound}", file=sys.stderr)
    return EXIT_OK


def cmd_check_seed(args) -> int:
    q = parse_q(args.q)[0]
    rows = load_json(args.target)["rows"]
    g = MatModQ.group_element(
        len(rows), q, tuple(x % q for row in rows for x in row)
    )
    fm = make_fm(q, args.L, g.d)
    cond = SeedConditions(args.variant, fm.L, fm)
    res = check_seed(g, cond)
    print(json.dumps({"ok": bool(res), "diagnostic": res.diagnostic}, sort_keys=True))
    return EXIT_OK if res else EXIT_NO


def cmd_surjectivity(args) -> int:
    spec = GenSet.load(args.spec)
    budget = parse_bytes(args.budget_mem)
    all_ok = True
    for q in parse_q(args.q):
        ok = cayley.surjectivity_check(spec, q, budget_bytes=budget)
        print(json.dumps({"q": q, "surjective": ok}))
        all_ok = all_ok and ok
    return EXIT_OK if all_ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="logdiam")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, spec=True, target=False):
        if spec:
            p.add_argument("--spec", required=True, help="generating-set JSON file")
        p.add_argument("--q", required=True, help="modulus: N, lo..hi, or comma list")
        p.add_argument("--L", type=int, default=0, help="level override")
        p.add_argument("--budget-mem", default="2G", help="memory budget (K/M/G suffix)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        if target:
            p.add_argument("--target", help="target JSON file")
            p.add_argument("--seeds", default="search", help="seeds JSON file or 'search'")
            p.add_argument("--verify", default=None, help="re-verify an emitted certificate")

    common(sub.add_parser("diam", help="diameter scan, CSV + summary"))
    p = sub.add_parser("decompose", help="conjugate-word certificate for one target")
    common(p, spec=False, target=True)
    p = sub.add_parser("certify", help="generator-word certificate (SA or product)")
    common(p, target=True)
    p = sub.add_parser("check-seed", help="test the seed congruence conditions")
    common(p, spec=False)
    p.add_argument("--target", required=True, help="matrix JSON file")
    p.add_argument("--variant", choices=("lower", "upper"), default="lower")
    common(sub.add_parser("surjectivity", help="closure order vs closed formula"))
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "diam": cmd_diam,
        "decompose": cmd_decompose,
        "certify": cmd_certify,
        "check-seed": cmd_check_seed,
        "surjectivity": cmd_surjectivity,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, PreconditionError, ModulusError, SeedConditionError,
            FileNotFoundError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceededError, MemoryError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LogdiamError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
