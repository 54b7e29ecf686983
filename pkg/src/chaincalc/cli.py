"""Command-line front end.

Exit status: 0 for success or a true verdict, 1 for a false verdict, 2 for
usage errors and exceeded resource guards.
"""
from __future__ import annotations

import argparse
import re
import sys

from . import theory as th
from .chain import CutPartition, Segment, Word, oracle_eval, parse_chain_expr, shuffle_sets
from .errors import ChainCalcError, guarded, work_budget
from .formula import formula_depth, parse_formula
from .interp import bouquet_size, image, load_interp, respects, shipped_interp

TRUE, FALSE, ERROR = 0, 1, 2


class UsageError(ChainCalcError):
    pass


def _verdict(value: bool, quiet: bool) -> int:
    if not quiet:
        print("true" if value else "false")
    return TRUE if value else FALSE


def _positions(text: str) -> frozenset[int]:
    text = text.strip()
    if text in ("", "-"):
        return frozenset()
    try:
        return frozenset(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"cannot read position set {text!r}") from None


def _ints(text: str) -> list[int]:
    return sorted(_positions(text))


def _fmt_set(s) -> str:
    return "{" + ",".join(map(str, sorted(s))) + "}"


def _read_interp(name: str):
    if name.startswith("@"):
        return shipped_interp(name[1:])
    return load_interp(name)


def _handle(args, expr_text: str, n: int):
    e = parse_chain_expr(expr_text, args.m)
    if args.engine == "profile":
        return th.profile_of_expr(e, n)
    return th.theory_of_expr(e, n)


# -- commands ------------------------------------------------------------------------------------

def cmd_theory(args) -> int:
    t = _handle(args, args.expr, args.n)
    kind = "profile" if args.engine == "profile" else "theory"
    print(f"digest {t.digest}")
    print(f"{kind} level={t.level} width={t.width} size={len(t)}")
    if args.pretty and isinstance(t, th.Theory):
        print(th.pretty_theory(t))
    return TRUE


def cmd_decide(args) -> int:
    f = parse_formula(args.formula, args.m)
    n = formula_depth(f) if args.n is None else args.n
    if args.expr is None and args.word is None:
        raise UsageError("decide needs --expr or --word")
    text = args.expr if args.expr is not None else f"w:{args.word}"
    return _verdict(th.decide(f, _handle(args, text, n)), args.quiet)


def cmd_oracle(args) -> int:
    f = parse_formula(args.formula, args.m)
    return _verdict(oracle_eval(Word.parse(args.word, args.m), f), args.quiet)


def cmd_reachable(args) -> int:
    census = th.reachable_theories(args.n, args.m, args.max_word_len, args.omega,
                                   profiles=args.engine == "profile")
    print(f"count {census.count}")
    for t in census:
        print(f"{t.digest} {census.describe(t)}")
    return TRUE


def _params(items) -> dict:
    out = {}
    for item in items or ():
        name, _, value = item.partition("=")
        if not re.fullmatch(r"W\d+", name):
            raise UsageError(f"parameters are written W<i>=<positions>, got {item!r}")
        out[name] = _positions(value)
    return out


def cmd_interp(args) -> int:
    interp = _read_interp(args.file)
    w = Word.parse(args.word, args.m)
    params = _params(args.param)
    if args.action == "check":
        report = respects(w, interp, params)
        if not report:
            print(f"false {report.reason}")
            return FALSE
        print("true")
        return TRUE
    if args.action == "image":
        model = image(w, interp, params)
        print(f"classes {len(model)}")
        for i, cls in enumerate(model.classes):
            print(f"class {i} " + " ".join("(" + ",".join(_fmt_set(s) for s in x) + ")" for x in cls))
        for rel in sorted(model.relations):
            tuples = sorted(model.relations[rel])
            print(f"relation {rel} " + " ".join("(" + ",".join(map(str, t)) + ")" for t in tuples))
        return TRUE
    lo, _, hi = args.segment.partition(":")
    try:
        seg = Segment(int(lo), int(hi))
    except ValueError:
        raise UsageError(f"segments are written lo:hi, got {args.segment!r}") from None
    print(bouquet_size(w, interp, params, seg))
    return TRUE


def cmd_shuffle(args) -> int:
    w = Word.parse(args.word, args.m)
    xs = [_positions(s) for s in args.x]
    ys = [_positions(s) for s in args.y]
    cuts = CutPartition.from_interior(len(w), _ints(args.cuts))
    chosen = _ints(args.index)
    out = shuffle_sets(xs, ys, cuts, chosen)
    for s in out:
        print(f"set {_fmt_set(s)}")
    whole = th.theory_of_word(w, args.n, out)
    parts = []
    for j, seg in enumerate(cuts.blocks()):
        src = xs if j in chosen else ys
        cols = [frozenset(p - seg.lo for p in s if seg.lo <= p < seg.hi) for s in src]
        parts.append(th.theory_of_word(w.slice(seg.lo, seg.hi), args.n, cols))
    composed = th.sequence_sum(parts)
    print(f"digest {whole.digest}")
    return _verdict(composed is whole, args.quiet)


_SEQ = re.compile(r"\s*prefix=\[(?P<prefix>[^\]]*)\]\s*(?:;\s*period=\[(?P<period>[^\]]*)\])?\s*$")


def _split_items(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()] if text else []


class _Resolver:
    """Turns sequence items into handles: chain expressions are evaluated,
    anything else is a digest prefix looked up in the census."""

    def __init__(self, args):
        self.args = args
        self._census = None

    def __call__(self, item: str):
        if item.startswith(("w:", "(")):
            return _handle(self.args, item, self.args.n)
        if self._census is None:
            self._census = th.reachable_theories(self.args.n, self.args.m, self.args.max_word_len,
                                                 self.args.omega, profiles=self.args.engine == "profile")
        hits = [t for t in self._census if t.digest.startswith(item.lower())]
        if len(hits) != 1:
            raise UsageError(f"digest {item!r} matches {len(hits)} census elements")
        return hits[0]


def _read_seq(text: str, resolve) -> th.UPSequence:
    mt = _SEQ.match(text)
    if mt is None:
        raise UsageError(f"sequences are written prefix=[..];period=[..], got {text!r}")
    prefix = [resolve(x) for x in _split_items(mt.group("prefix"))]
    period = [resolve(x) for x in _split_items(mt.group("period") or "")]
    return th.UPSequence(tuple(prefix), tuple(period))


def _read_index(text: str) -> th.UPIndexSet:
    mt = _SEQ.match(text)
    if mt is None:
        raise UsageError(f"index sets are written prefix=[0,1];period=[1], got {text!r}")
    flags = [[x == "1" for x in _split_items(mt.group(g) or "")] for g in ("prefix", "period")]
    return th.UPIndexSet(tuple(flags[0]), tuple(flags[1]) or (False,))


def _print_seq(seq: th.UPSequence) -> None:
    print("prefix=[" + ",".join(t.digest for t in seq.prefix) + "];period=["
          + ",".join(t.digest for t in seq.period) + "]")


def cmd_seq(args) -> int:
    resolve = _Resolver(args)
    if args.action == "check":
        result = th.check_formal_sequence(_read_seq(args.seq, resolve))
        if not args.quiet:
            print("true" if result else f"false {result.violation[0]} {result.violation[1]}")
        return TRUE if result else FALSE
    if args.t is None or args.index is None:
        raise UsageError("seq shuffle needs --t and --index")
    out = th.formal_shuffle(_read_seq(args.seq, resolve), _read_seq(args.t, resolve),
                            _read_index(args.index))
    _print_seq(out)
    return TRUE


# -- parser ------------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaincalc",
        description="Theories of labeled chains: composition, decision, interpretations.")
    parser.add_argument("--max-level", type=int, help="largest theory level (CHAINCALC_MAX_LEVEL)")
    parser.add_argument("--max-oracle-len", type=int,
                        help="longest word for subset enumeration (CHAINCALC_MAX_ORACLE_LEN)")
    parser.add_argument("--max-work", type=int, help="composition step budget (CHAINCALC_MAX_WORK)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, level=True, engine="theory"):
        p.add_argument("-m", "--predicates", dest="m", type=int, default=0,
                       help="number of predicates A0..A(m-1)")
        if level:
            p.add_argument("-n", "--level", dest="n", type=int, default=0, help="theory level")
        p.add_argument("--engine", choices=("theory", "profile"), default=engine,
                       help="full theories or their atomic profiles")

    p = sub.add_parser("theory", help="print the digest of a chain expression's theory")
    common(p)
    p.add_argument("-e", "--expr", required=True, help="chain expression, e.g. '(w:1)^w + w:0'")
    p.add_argument("--pretty", action="store_true", help="also print the nested-set form")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("decide", help="decide a formula on a chain expression")
    common(p, level=False, engine="profile")
    p.add_argument("-n", "--level", dest="n", type=int, default=None,
                   help="theory level (default: the formula depth)")
    p.add_argument("-e", "--expr", help="chain expression")
    p.add_argument("-w", "--word", help="finite word (bit string)")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-q", "--quiet", action="store_true", help="report through the exit status only")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("oracle", help="evaluate a formula on a finite word by brute force")
    p.add_argument("-m", "--predicates", dest="m", type=int, default=0)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("reachable", help="census of theories reachable from short words")
    common(p)
    p.add_argument("-L", "--max-word-len", type=int, default=3)
    p.add_argument("--omega", action="store_true", help="also close under omega-power")
    p.set_defaults(func=cmd_reachable)

    p = sub.add_parser("interp", help="interpretations: respect, image, bouquet size")
    p.add_argument("action", choices=("check", "image", "bouquet"))
    p.add_argument("file", help="interpretation file, or @membership etc. for a shipped one")
    p.add_argument("-m", "--predicates", dest="m", type=int, default=1)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("--param", action="append", help="parameter value, e.g. W1=0,2")
    p.add_argument("--segment", default="0:0", help="segment lo:hi for bouquet")
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("shuffle", help="shuffle set tuples blockwise and check composition")
    p.add_argument("-m", "--predicates", dest="m", type=int, default=0)
    p.add_argument("-n", "--level", dest="n", type=int, default=0)
    p.add_argument("-w", "--word", required=True)
    p.add_argument("--x", action="append", required=True, help="one set of the first tuple")
    p.add_argument("--y", action="append", required=True, help="one set of the second tuple")
    p.add_argument("--cuts", default="", help="interior cut points, e.g. 2,4")
    p.add_argument("--index", default="", help="blocks taken from the first tuple")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("seq", help="formal sequences of theories")
    p.add_argument("action", choices=("check", "shuffle"))
    common(p)
    p.add_argument("--seq", required=True, help="prefix=[..];period=[..] of digests or expressions")
    p.add_argument("--t", help="second sequence (shuffle)")
    p.add_argument("--index", help="index set prefix=[0,1];period=[1] (shuffle)")
    p.add_argument("-L", "--max-word-len", type=int, default=3, help="census used for digests")
    p.add_argument("--omega", action="store_true", help="census closed under omega-power")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_seq)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {k: v for k, v in (("max_level", args.max_level),
                                   ("max_oracle_len", args.max_oracle_len),
                                   ("max_work", args.max_work)) if v is not None}
    try:
        with guarded(**overrides), work_budget():
            return args.func(args)
    except (ChainCalcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
