"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import quadratic
from .classify import families as fam
from .classify.corank0 import enumerate_corank0
from .cone import LP_TOL, CausalClass, is_positively_independent, level_of_graph, root_basis, weights
from .errors import BoydMaxwellError, InputError, NotLevelTwo, NotLorentzian
from .graph import GraphType, classify_type, corank, graph_level, parse
from .orbit import OrbitBudget, limit_roots_from_words, orbit_roots, orbit_weights, write_jsonl
from .packing import TANGENCY_TOL, Ball, SvgOptions, ball_of_vector, plane_point, render_svg, verify_packing
from .quadratic import lorentz_frame, signature


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    max_word_length: int | None = None
    max_height: float | None = None
    max_balls: int | None = None
    tol: float = quadratic.TOL
    lp_tol: float = LP_TOL
    tangency_tol: float = TANGENCY_TOL
    label_bound: int | None = None
    threads: int = 1
    seed: int = 0
    allow_overlap: bool = False
    out: str | None = None
    out_svg: str | None = None
    out_json: str | None = None

    def __post_init__(self):
        for name in ("tol", "lp_tol", "tangency_tol"):
            if not getattr(self, name) > 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.threads < 1:
            raise InputError("--threads must be at least 1")

    def budget(self, default_word_length: int | None = None) -> OrbitBudget:
        L = self.max_word_length if self.max_word_length is not None else default_word_length
        try:
            return OrbitBudget(L, self.max_height, self.max_balls)
        except ValueError as exc:
            raise InputError(str(exc)) from None


def _read_graph(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _fmt_matrix(M) -> str:
    return "\n".join("  " + " ".join(f"{v:9.5f}" for v in row) for row in np.asarray(M))


def cmd_analyze(cfg: RunConfig, out) -> int:
    G = _read_graph(cfg.inputs[0])
    print(f"rank {G.n}", file=out)
    print("gram", file=out)
    print(_fmt_matrix(G.gram), file=out)
    sig = signature(G.gram, cfg.tol)
    print(f"signature {tuple(sig)}", file=out)
    print(f"corank {corank(G, cfg.tol)}", file=out)
    gl, gs = graph_level(G, cfg.tol)
    kind = classify_type(G, cfg.tol)
    if kind is GraphType.AFFINE:
        print("affine, level 0", file=out)
        return 0
    print(f"graph level {gl} ({'strict' if gs else 'non-strict'})", file=out)
    basis = root_basis(G, cfg.tol)
    sl, ss = level_of_graph(G, tol=cfg.tol)
    print(f"level {sl} ({'strict' if ss else 'non-strict'})", file=out)
    print(f"positively independent {is_positively_independent(basis, cfg.lp_tol)}", file=out)
    if basis.is_degenerate:
        return 0
    ws = weights(basis)
    space = sum(w.causal_class.value == "space-like" for w in ws)
    print(f"weights: {len(ws)} ({space} space-like, {len(ws) - space} non-space-like)", file=out)
    for w in ws:
        print(f"  {list(w.facial)} norm {w.norm:.6g} {w.causal_class.value}", file=out)
    return 0


def cmd_level(cfg: RunConfig, out) -> int:
    G = _read_graph(cfg.inputs[0])
    gl, gs = graph_level(G, cfg.tol)
    print(f"graph_level {gl} strict={gs}", file=out)
    if classify_type(G, cfg.tol) is not GraphType.AFFINE:
        sl, ss = level_of_graph(G, tol=cfg.tol)
        print(f"system_level {sl} strict={ss}", file=out)
    return 0


def cmd_weights(cfg: RunConfig, out) -> int:
    G = _read_graph(cfg.inputs[0])
    basis = root_basis(G, cfg.tol)
    text = json.dumps([w.to_json() for w in weights(basis)], indent=2)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text, file=out)
    return 0


def cmd_orbit(cfg: RunConfig, out, kind: str = "weights") -> int:
    G = _read_graph(cfg.inputs[0])
    basis = root_basis(G, cfg.tol)
    budget = cfg.budget()
    elems = orbit_weights(basis, budget, cfg.tol) if kind == "weights" else orbit_roots(basis, budget, cfg.tol)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            write_jsonl(elems, fh)
    else:
        write_jsonl(elems, out)
    return 0


def _space_like(basis, elems, tol):
    return [e for e in elems if float(e.vector @ basis.form @ e.vector) > tol]


def cmd_pack(cfg: RunConfig, out) -> int:
    G = _read_graph(cfg.inputs[0])
    basis = root_basis(G, cfg.tol)
    if not basis.is_lorentzian:
        raise NotLorentzian(f"signature {tuple(basis.signature)} is not Lorentzian")
    level, _ = level_of_graph(G, tol=cfg.tol)
    if level != 2 and not (cfg.allow_overlap and level > 2):
        raise NotLevelTwo(level)
    elems = orbit_weights(basis, cfg.budget(default_word_length=6), cfg.tol, classes=[CausalClass.SPACE_LIKE])
    space = _space_like(basis, elems, 1e-6)
    report = verify_packing(space, basis.form, t=basis.direction_of_past, tol=cfg.tangency_tol)
    frame = lorentz_frame(basis.form, basis.direction_of_past)
    balls = [ball_of_vector(e.vector, frame, word_length=e.word_length) for e in space]
    print(json.dumps({"level": level, **report.to_json()}, indent=2), file=out)
    if cfg.out_json:
        Path(cfg.out_json).write_text(json.dumps([b.to_json() for b in balls], indent=2) + "\n")
    if cfg.out_svg:
        if balls and balls[0].dim != 2:
            print(f"no SVG: balls are {balls[0].dim}-dimensional", file=sys.stderr)
        else:
            rng = random.Random(cfg.seed)
            words = [[rng.randrange(basis.n) for _ in range(16)] for _ in range(200)]
            pts = [plane_point(p, frame) for p in limit_roots_from_words(basis, words)]
            opts = SvgOptions(points=np.array(pts) if pts else None)
            Path(cfg.out_svg).write_text(render_svg(balls, opts))
    if not report.is_packing and not cfg.allow_overlap:
        return 1
    return 0


def _ball_from_json(d: dict) -> Ball:
    src = np.asarray(d["source_vector"], dtype=float)
    if d.get("center") is None:
        n = np.asarray(d["normal"], dtype=float)
        return Ball(len(n), None, 0.0, src, normal=n, offset=float(d["offset"]), word_length=d.get("word_length"))
    c = np.asarray(d["center"], dtype=float)
    return Ball(len(c), c, float(d["curvature"]), src, word_length=d.get("word_length"))


def cmd_render(cfg: RunConfig, out) -> int:
    try:
        data = json.loads(Path(cfg.inputs[0]).read_text())
        balls = [_ball_from_json(d) for d in data]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read a ball list from {cfg.inputs[0]}: {exc}") from None
    svg = render_svg(balls)
    if cfg.out:
        Path(cfg.out).write_text(svg)
    else:
        out.write(svg)
    return 0


def _count_lines(f: fam.GraphFamily, out) -> bool:
    ok = True
    for key, want in f.expected.items():
        got = f.counts.get(key)
        status = "PASS" if got == want else "FAIL"
        ok &= got == want
        print(f"  {f.tag.value:16s} {key:22s} {got!s:>6} expected {want:>6}  {status}", file=out)
    for key, got in f.counts.items():
        if key not in f.expected:
            print(f"  {f.tag.value:16s} {key:22s} {got!s:>6}", file=out)
    for note in f.notes:
        print(f"  note: {note}", file=out)
    return ok


def cmd_classify(cfg: RunConfig, out, family: str, rank: int | None = None, level: int | None = None) -> int:
    if family == "corank0":
        if rank is None or level is None:
            raise InputError("classify corank0 needs --rank and --level")
        tag = fam.FamilyTag.LANNER if level == 1 else fam.FamilyTag.LEVEL2_CORANK0
        f = fam.GraphFamily(tag, notes=[f"rank {rank}, graph level {level}"], compare=False)
        for G in enumerate_corank0(rank, level, label_bound=cfg.label_bound, tol=cfg.tol):
            lev, st = graph_level(G, cfg.tol)
            f.members.append(fam.FamilyMember(G, f"rank{rank}", lev, st, 0))
        f.counts = {"total": len(f.members)}
        ok = True
        print(f"  corank0 rank {rank} level {level}: {len(f.members)} graphs", file=out)
    else:
        try:
            builder = fam.FAMILY_BUILDERS[family]
        except KeyError:
            raise InputError(f"unknown family {family!r}; choose from {', '.join(fam.FAMILY_BUILDERS)}") from None
        f = builder(threads=cfg.threads)
        ok = _count_lines(f, out)
    if cfg.out:
        path = fam.write_family(f, cfg.out)
        print(f"wrote {len(f.members)} graphs and {path}", file=out)
    return 0 if ok else 1


def cmd_verify_counts(cfg: RunConfig, out) -> int:
    ok = True
    for name in ("level2", "prisms", "lightlike", "products", "spacelike", "twofold"):
        f = fam.FAMILY_BUILDERS[name](threads=cfg.threads)
        ok &= _count_lines(f, out)
    print("ALL PASS" if ok else "SOME COUNTS DIFFER", file=out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boyd-maxwell", description="Lorentzian root systems, levels and ball packings")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=quadratic.TOL, help="eigenvalue zero tolerance")
    common.add_argument("--lp-tol", type=float, default=LP_TOL, help="LP slack threshold")
    common.add_argument("--tangency-tol", type=float, default=TANGENCY_TOL, help="band around -1 for tangency")
    common.add_argument("--threads", type=int, default=1, help="worker threads (1 = deterministic serial)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled words")
    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--max-word-length", type=int)
    budget.add_argument("--max-height", type=float)
    budget.add_argument("--max-balls", type=int, help="maximum number of orbit elements")
    sub = p.add_subparsers(dest="command", required=True)

    for name, helptext in [("analyze", "summary of a .cox graph"), ("level", "graph and system level"),
                           ("weights", "weight vectors as JSON")]:
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("graph")
        if name == "weights":
            s.add_argument("--out")
    s = sub.add_parser("orbit", parents=[common, budget], help="orbit of weights or roots as JSON lines")
    s.add_argument("graph")
    s.add_argument("--kind", choices=("weights", "roots"), default="weights")
    s.add_argument("--out")
    s = sub.add_parser("pack", parents=[common, budget], help="ball packing of a level-2 system")
    s.add_argument("graph")
    s.add_argument("--out-svg")
    s.add_argument("--out-json")
    s.add_argument("--allow-overlap", action="store_true", help="accept level >= 3 and report overlaps")
    s = sub.add_parser("render", parents=[common], help="SVG from a JSON ball list")
    s.add_argument("balls")
    s.add_argument("--out")
    s = sub.add_parser("classify", parents=[common], help="enumerate a family of graphs")
    s.add_argument("family", help=", ".join(list(fam.FAMILY_BUILDERS) + ["corank0"]))
    s.add_argument("--out", help="directory for .cox files and manifest.json")
    s.add_argument("--rank", type=int)
    s.add_argument("--level", type=int)
    s.add_argument("--label-bound", type=int)
    sub.add_parser("verify-counts", parents=[common], help="all published counts, PASS/FAIL")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        inputs = [getattr(args, k) for k in ("graph", "balls") if hasattr(args, k)]
        cfg = RunConfig(
            command=args.command,
            inputs=inputs,
            max_word_length=getattr(args, "max_word_length", None),
            max_height=getattr(args, "max_height", None),
            max_balls=getattr(args, "max_balls", None),
            tol=args.tol,
            lp_tol=args.lp_tol,
            tangency_tol=args.tangency_tol,
            label_bound=getattr(args, "label_bound", None),
            threads=args.threads,
            seed=args.seed,
            allow_overlap=getattr(args, "allow_overlap", False),
            out=getattr(args, "out", None),
            out_svg=getattr(args, "out_svg", None),
            out_json=getattr(args, "out_json", None),
        )
        cmd = args.command
        if cmd == "analyze":
            return cmd_analyze(cfg, out)
        if cmd == "level":
            return cmd_level(cfg, out)
        if cmd == "weights":
            return cmd_weights(cfg, out)
        if cmd == "orbit":
            return cmd_orbit(cfg, out, args.kind)
        if cmd == "pack":
            return cmd_pack(cfg, out)
        if cmd == "render":
            return cmd_render(cfg, out)
        if cmd == "classify":
            return cmd_classify(cfg, out, args.family, args.rank, args.level)
        return cmd_verify_counts(cfg, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BoydMaxwellError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
