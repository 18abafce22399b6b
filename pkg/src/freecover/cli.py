"""Command-line front end.

Exit codes: 0 success or certificate found, 1 clean negative answer
("not found" / false), 2 input error.  JSON output embeds the run config
and tool version and is byte-identical across runs with the same config.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, field

from . import __version__, intmat
from .covers import BudgetExceeded, NotInvariantError, build_tower, default_max_vertices, rose_cover, separate_word
from .homology import deck_matrix, find_nonsurjectivity_certificate, lift_matrix
from .nilpotent import DEFAULT_CAP, HARD_CAP, acts_trivially_on_lcs_quotient, is_epi_on_nilpotent_quotient, magnus
from .stallings import graph_from_generators, is_surjective
from .surfaces import (DegeneratePairingError, RibbonStructure, disjointness_search, elevations, is_isotropic,
                       preserves_intersection_form, ribbon_family)
from .whitehead import CostGuardError, whitehead_graph, whitehead_reduce, whitehead_report
from .witness import question_1_3_witness, witness_holds
from .words import Endomorphism, Word


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


@dataclass
class RunConfig:
    q_list: list[int] = field(default_factory=lambda: [2, 3])
    max_depth: int = 2
    max_vertices: int = field(default_factory=default_max_vertices)
    nilpotent_cap: int = DEFAULT_CAP
    seed: int = 0
    output: str = "json"

    def validate(self):
        if not self.q_list or any(q < 2 for q in self.q_list):
            raise UsageError("--q", "moduli must be integers >= 2")
        if self.max_depth < 1:
            raise UsageError("--depth", "must be positive")
        if self.max_vertices < 1:
            raise UsageError("--max-vertices", "must be positive")
        if not 2 <= self.nilpotent_cap <= HARD_CAP:
            raise UsageError("--nilpotent-cap", f"must lie in 2..{HARD_CAP}")


def _q_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parse_word(text: str, flag: str, rank: int | None = None) -> Word:
    try:
        return Word.parse(text, rank)
    except ValueError as err:
        raise UsageError(flag, str(err))


def _parse_phi(text: str, flag: str = "--phi") -> Endomorphism:
    try:
        return Endomorphism.parse(text)
    except ValueError as err:
        raise UsageError(flag, str(err))


def _matrix(m) -> list[list[int]]:
    return [list(r) for r in m]


# each command returns (exit code, result dict, optional dot text)

def cmd_fold(args, cfg):
    rank = args.rank
    if rank is None:
        rank = max(_parse_word(w, "words").rank for w in args.words)
    gens = [_parse_word(w, "words", rank) for w in args.words]
    g = graph_from_generators(gens, rank)
    res = {"generators": [str(w) for w in gens], "graph": g.to_json(),
           "rank": g.rank_of_fundamental_group(), "is_rose": g.is_rose(), "is_cover": g.is_cover()}
    return 0, res, g.to_dot()


def _cover(cfg, n, q, level):
    if level == 0:
        return rose_cover(n)
    try:
        return build_tower(n, q, level, cfg.max_vertices).cover(level)
    except BudgetExceeded as err:
        raise UsageError("--max-vertices", str(err))


def cmd_cover(args, cfg):
    X = _cover(cfg, args.n, cfg.q_list[0], args.level)
    res = {"cover": X.label, "degree": X.degree, "homology_rank": X.homology_rank,
           "loop_words": [str(w) for w in X.loop_words]}
    if args.full:
        res["graph"] = X.to_json()
    return 0, res, X.to_dot()


def cmd_tower(args, cfg):
    out = []
    for q in cfg.q_list:
        t = build_tower(args.n, q, cfg.max_depth, cfg.max_vertices, strict=False)
        out.append({"q": q, "valid": t.validate(), "stopped": t.stopped,
                    "levels": [{"level": lv.level, "degree": lv.cover.degree,
                                "homology_rank": lv.cover.homology_rank} for lv in t.levels]})
    return 0, {"n": args.n, "towers": out}, None


def cmd_separate(args, cfg):
    w = _parse_word(args.word, "word", args.rank)
    if w.is_trivial():
        raise UsageError("word", "the trivial word is never separated")
    found = []
    for q in cfg.q_list:
        found.append({"q": q, "level": separate_word(w, q, cfg.max_depth, cfg.max_vertices)})
    hit = any(f["level"] is not None for f in found)
    return (0 if hit else 1), {"word": str(w), "separated": hit, "results": found}, None


def cmd_homrep(args, cfg):
    phi = _parse_phi(args.phi)
    X = _cover(cfg, phi.rank, cfg.q_list[0], args.level)
    try:
        m = lift_matrix(phi, X).matrix
    except NotInvariantError as err:
        raise UsageError("--phi", str(err))
    return 0, {"endomorphism": str(phi), "cover": X.label, "matrix": _matrix(m),
               "det": intmat.det(m), "snf_diagonal": list(intmat.smith_diagonal(m))}, None


def _deck_element(text: str, X) -> int:
    for g in range(X.degree):
        if X.quotient.label(g) == text:
            return g
    if text.isdigit() and X.degree > 10 and int(text) < X.degree:
        return int(text)
    raise UsageError("--element", f"{text!r} is not an element of the deck group of {X.label}")


def cmd_deck(args, cfg):
    X = _cover(cfg, args.n, cfg.q_list[0], args.level)
    g = _deck_element(args.element, X)
    m = deck_matrix(X, g).matrix
    return 0, {"cover": X.label, "element": X.quotient.label(g), "matrix": _matrix(m),
               "trace": intmat.trace(m)}, None


def cmd_check_epi(args, cfg):
    phi = _parse_phi(args.phi)
    X = _cover(cfg, phi.rank, cfg.q_list[0], args.level)
    try:
        m = lift_matrix(phi, X).matrix
    except NotInvariantError as err:
        raise UsageError("--phi", str(err))
    epi = intmat.is_epi(m)
    return (0 if epi else 1), {"endomorphism": str(phi), "cover": X.label, "det": intmat.det(m),
                               "snf_diagonal": list(intmat.smith_diagonal(m)), "epi": epi}, None


def cmd_certify(args, cfg):
    phi = _parse_phi(args.phi)
    log: list = []
    cert = find_nonsurjectivity_certificate(phi, cfg.q_list, cfg.max_depth, cfg.max_vertices,
                                            goal=args.goal, log=log)
    res = {"endomorphism": str(phi), "certificate": cert.to_json() if cert else None, "search": log}
    if cert is None:
        res["verdict"] = "no certificate in family"
    return (0 if cert else 1), res, None


def cmd_nilpotent(args, cfg):
    if args.word is not None:
        w = _parse_word(args.word, "--word")
        return 0, {"word": str(w), "cap": cfg.nilpotent_cap, "magnus": str(magnus(w, cfg.nilpotent_cap))}, None
    if args.phi is None:
        raise UsageError("--phi", "one of --phi or --word is required")
    phi = _parse_phi(args.phi)
    epi = {str(k): is_epi_on_nilpotent_quotient(phi, k) for k in range(2, cfg.nilpotent_cap + 1)}
    trivial = {str(k): acts_trivially_on_lcs_quotient(phi, k) for k in range(1, cfg.nilpotent_cap - 1)}
    ok = all(epi.values())
    return (0 if ok else 1), {"endomorphism": str(phi), "epi": epi, "acts_trivially": trivial}, None


def cmd_whitehead(args, cfg):
    w = _parse_word(args.word, "word", args.rank)
    if w.is_trivial():
        raise UsageError("word", "the trivial word has no Whitehead graph")
    res = whitehead_report(w)
    if args.reduce:
        try:
            length, red = whitehead_reduce(w, force=args.force)
            res["reduction"] = {"minimal_length": length, "reduced": str(red), "primitive": length == 1}
        except CostGuardError as err:
            raise UsageError("--reduce", str(err))
    return (0 if res["not_separable_certified"] else 1), res, whitehead_graph(w).to_dot()


def cmd_witness5(args, cfg):
    rep = question_1_3_witness(args.n, cfg.nilpotent_cap, cfg.q_list, cfg.max_depth, cfg.max_vertices,
                               variant=args.variant)
    rep["holds"] = witness_holds(rep)
    return (0 if rep["holds"] else 1), rep, None


def cmd_surface(args, cfg):
    try:
        R = RibbonStructure.parse(args.rotation, args.rank)
    except ValueError as err:
        raise UsageError("--rotation", str(err))
    try:
        fam = ribbon_family(R, cfg.q_list, cfg.max_depth, cfg.max_vertices)
    except DegeneratePairingError as err:
        raise UsageError("--rotation", str(err))
    res = {"rotation": R.text(), "peripheral": [str(w) for w in R.peripheral_words]}
    code = 0
    if args.action == "info":
        res["covers"] = [rc.summary() for rc in fam]
    elif args.action == "elevations":
        x = _parse_word(args.x or "", "--x", R.rank)
        if x.is_trivial():
            raise UsageError("--x", "a nontrivial word is required")
        res["covers"] = []
        for rc in fam:
            V = elevations(x, rc)
            res["covers"].append({"cover": rc.cover.label or "rose", "order": V.order, "count": V.count,
                                  "basis": _matrix(V.basis), "isotropic": is_isotropic(V)})
    elif args.action == "disjoint":
        x = _parse_word(args.x or "", "--x", R.rank)
        y = _parse_word(args.y or "", "--y", R.rank)
        if x.is_trivial() or y.is_trivial():
            raise UsageError("--x/--y", "nontrivial words are required")
        res.update(disjointness_search(x, y, fam))
        code = 0 if res["verdict"] == "intersection witnessed" else 1
    else:
        phi = _parse_phi(args.phi or "", "--phi")
        if phi.rank != R.rank:
            raise UsageError("--phi", f"rank {phi.rank} does not match the ribbon rank {R.rank}")
        if not is_surjective(phi):
            raise UsageError("--phi", f"{phi} is not an automorphism")
        res.update(preserves_intersection_form(phi, fam))
        code = 0 if res["verdict"] == "pass" else 1
    return code, res, None


def cmd_acceptance(args, cfg):
    from . import acceptance

    ks = _q_list(args.criteria)
    if any(k not in range(1, 10) for k in ks):
        raise UsageError("--criteria", "criteria are numbered 1..9")
    results = acceptance.run(ks, cfg.seed)
    return (0 if all(r["passed"] for r in results) else 1), {"results": results}, None


COMMANDS = {
    "fold": cmd_fold, "cover": cmd_cover, "tower": cmd_tower, "separate": cmd_separate,
    "homrep": cmd_homrep, "deck": cmd_deck, "check-epi": cmd_check_epi, "certify": cmd_certify,
    "nilpotent": cmd_nilpotent, "whitehead": cmd_whitehead, "witness-5": cmd_witness5,
    "surface": cmd_surface, "acceptance": cmd_acceptance,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["json", "text", "dot"], default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-vertices", type=int, default=None,
                        help="vertex budget per cover (env FREECOVER_MAX_VERTICES)")
    common.add_argument("--q", type=_q_list, default=[2, 3], help="comma-separated moduli")
    common.add_argument("--depth", type=int, default=2, help="maximum tower depth")
    common.add_argument("--nilpotent-cap", type=int, default=DEFAULT_CAP)

    p = argparse.ArgumentParser(prog="freecover", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"freecover {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fold", parents=[common], help="Stallings graph of a subgroup")
    s.add_argument("words", nargs="+")
    s.add_argument("--rank", type=int)

    for name, help_ in (("cover", "based mod-q cover"), ("deck", "deck transformation matrix")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--n", type=int, default=2)
        s.add_argument("--level", type=int, default=1)
        if name == "cover":
            s.add_argument("--full", action="store_true", help="include the cover graph")
        else:
            s.add_argument("--element", required=True, help="digit string such as 01")

    s = sub.add_parser("tower", parents=[common], help="iterated mod-q homology covers")
    s.add_argument("--n", type=int, default=2)

    s = sub.add_parser("separate", parents=[common], help="first tower level missing a word")
    s.add_argument("word")
    s.add_argument("--rank", type=int)

    for name in ("homrep", "check-epi"):
        s = sub.add_parser(name, parents=[common], help="lift of an endomorphism on cover homology")
        s.add_argument("--phi", required=True, help='images, e.g. "ab,b"')
        s.add_argument("--level", type=int, default=1)

    s = sub.add_parser("certify", parents=[common], help="search for a non-surjectivity certificate")
    s.add_argument("--phi", required=True)
    s.add_argument("--goal", choices=["non-epi", "nontrivial"], default="non-epi")

    s = sub.add_parser("nilpotent", parents=[common], help="free nilpotent quotients")
    s.add_argument("--phi")
    s.add_argument("--word")

    s = sub.add_parser("whitehead", parents=[common], help="Whitehead graph and reduction")
    s.add_argument("word")
    s.add_argument("--rank", type=int)
    s.add_argument("--reduce", action="store_true")
    s.add_argument("--force", action="store_true", help="lift the reduction cost guard")

    s = sub.add_parser("witness-5", parents=[common], help="non-surjective, nilpotent-onto endomorphism")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--variant", choices=["figure", "text"], default="figure")

    s = sub.add_parser("surface", parents=[common], help="ribbon covers and intersection forms")
    s.add_argument("action", choices=["info", "elevations", "disjoint", "preserves"])
    s.add_argument("--rotation", required=True, help='cyclic order of half-edges, e.g. "a b A B"')
    s.add_argument("--rank", type=int)
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--phi")

    s = sub.add_parser("acceptance", parents=[common], help="run acceptance criteria")
    s.add_argument("--criteria", default="1,2,3,4,5,6,7,8,9")
    return p


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v) and len(json.dumps(v)) <= 100


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    max_v = args.max_vertices
    if max_v is None:
        try:
            max_v = default_max_vertices()
        except ValueError:
            print(f"freecover: error: FREECOVER_MAX_VERTICES: not an integer: "
                  f"{os.environ.get('FREECOVER_MAX_VERTICES')!r}", file=sys.stderr)
            return 2
    cfg = RunConfig(list(args.q), args.depth, max_v, args.nilpotent_cap, args.seed, args.output)
    random.seed(cfg.seed)
    try:
        cfg.validate()
        code, result, dot = COMMANDS[args.command](args, cfg)
        if cfg.output == "dot" and dot is None:
            raise UsageError("--output", f"dot output is not available for {args.command}")
    except UsageError as err:
        print(f"freecover {args.command}: error: {err}", file=sys.stderr)
        return 2
    if cfg.output == "dot":
        print(dot)
    elif cfg.output == "text":
        print("\n".join(_text(result)))
    else:
        doc = {"tool": "freecover", "version": __version__, "command": args.command,
               "config": asdict(cfg), "result": result}
        print(json.dumps(doc, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
