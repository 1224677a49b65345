"""Command-line entry point.

Exit codes: 0 success, 1 verification failed, 2 input error, 3 cost guard.
Every run writes ``manifest.json`` into the output directory.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
import time
from collections import Counter
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FlagcertError, InputError


class Run:
    def __init__(self, args):
        self.args = args
        self.out_dir = Path(args.output_dir)
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}
        self.stats: dict = {}
        self.lines: list[str] = []

    def read_input(self, path: str) -> str:
        p = Path(path)
        try:
            data = p.read_bytes()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}") from None
        self.inputs[str(p)] = hashlib.sha256(data).hexdigest()
        return data.decode()

    def write_output(self, name: str, writer) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        p = self.out_dir / name
        with open(p, "w") as fh:
            writer(fh)
        self.outputs[str(p)] = hashlib.sha256(p.read_bytes()).hexdigest()
        return p

    def say(self, line: str) -> None:
        self.lines.append(line)

    def finish(self, code: int, started: float) -> None:
        if self.args.format == "json":
            print(json.dumps(self.stats, indent=2, sort_keys=True, default=str))
        else:
            for ln in self.lines:
                print(ln)
        manifest = {
            "command": sys.argv[1:] if self.args.argv is None else self.args.argv,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "versions": {"flagcert": __version__, "python": platform.python_version(), "numpy": np.__version__},
            "threads": self.args.threads,
            "exit_code": code,
            "seconds": round(time.perf_counter() - started, 3),
            "stats": self.stats,
        }
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")


# --- subcommands ---------------------------------------------------------

def cmd_enumerate(run: Run) -> int:
    from .formats import write_graph_list
    from .hypergraph import enumerate_free

    k = run.args.k
    graphs = enumerate_free(k)
    path = run.write_output(f"F{k}.txt", lambda fh: write_graph_list(fh, graphs))
    hist = dict(sorted(Counter(g.m for g in graphs).items()))
    run.stats.update(k=k, count=len(graphs), edge_histogram=hist, file=str(path))
    run.say(f"F{k}: {len(graphs)} graphs -> {path}")
    run.say("edges: " + ", ".join(f"{m}:{c}" for m, c in hist.items()))
    return 0


def cmd_flags(run: Run) -> int:
    from .expressions import root_swap_partners
    from .flags import flag_family, get_type
    from .formats import write_flag_list

    sigma = get_type(run.args.type)
    fam = flag_family(sigma, run.args.k)
    path = run.write_output(f"flags_{sigma.name}_{run.args.k}.txt", lambda fh: write_flag_list(fh, fam.flags))
    run.stats.update(type=sigma.name, k=run.args.k, count=len(fam), file=str(path))
    run.say(f"{sigma.name}, {run.args.k} vertices: {len(fam)} flags -> {path}")
    if sigma.size >= 2 and sigma.graph.relabel([2, 1] + list(range(3, sigma.size + 1))) == sigma.graph:
        sym = int(sum(1 for a, b in enumerate(root_swap_partners(fam)) if a == b))
        run.stats["swap_symmetric"] = sym
        run.say(f"fixed by swapping root labels 1 and 2: {sym}")
    return 0


def cmd_pairdensity(run: Run) -> int:
    from .flags import get_type, pair_density_table
    from .formats import write_pair_density

    a = run.args
    sigma = get_type(a.type)
    tab = pair_density_table(sigma, a.k1, a.k2, a.target, a.method)
    name = f"pairdensity_{sigma.name}_{a.k1}_{a.k2}_{tab.basis_id}.txt"
    path = run.write_output(name, lambda fh: write_pair_density(fh, tab))
    run.stats.update(type=sigma.name, k1=a.k1, k2=a.k2, basis=tab.basis_id, entries=len(tab), file=str(path))
    run.say(f"{len(tab)} nonzero pair densities over {tab.basis_id} -> {path}")
    return 0


def cmd_expressions(run: Run) -> int:
    from .expressions import codegree_expressions, target_vector, tight_path_expressions
    from .formats import write_expressions

    kind = run.args.kind
    if kind == "codegree":
        exprs = codegree_expressions()
        named = ((e.identifier, e.expression) for e in exprs)
        count = len(exprs)
    elif kind == "tightpath":
        named = [(f"P{i}", p) for i, p in enumerate(tight_path_expressions())]
        count = 3
    else:
        named = [("target", target_vector())]
        count = 1
    path = run.write_output(f"expressions_{kind}.txt", lambda fh: write_expressions(fh, named))
    run.stats.update(kind=kind, count=count, file=str(path))
    run.say(f"{count} {kind} expressions over F7 -> {path}")
    return 0


def cmd_template(run: Run) -> int:
    from .certificate import serialize_certificate, zero_certificate

    cert = zero_certificate()
    path = run.write_output("certificate_template.txt", lambda fh: serialize_certificate(cert, fh))
    run.stats.update(file=str(path), shapes=[[q.rows, m.cols] for q, m in zip(cert.Q, cert.I)])
    run.say(f"all-zero certificate with the expected shapes -> {path}")
    return 0


def cmd_verify(run: Run) -> int:
    from .certificate import parse_certificate, verify_certificate

    cert = parse_certificate(run.read_input(run.args.certificate))
    verdict = verify_certificate(cert)
    summary = verdict.summary()
    run.stats.update(summary)
    path = run.write_output("verdict.json", lambda fh: json.dump(summary, fh, indent=2, sort_keys=True))
    run.say("PASS" if verdict.passed else "FAIL")
    for key in ("psd_ok", "positivity_ok", "slack_ok", "support_ok"):
        run.say(f"  {key}: {summary[key]}")
    run.say(f"  slack: {summary['positive_slack']} positive, {summary['zero_slack']} zero, "
            f"{summary['negative_slack']} negative")
    if summary["most_negative"]:
        w = summary["most_negative"]
        run.say(f"  most negative slack {w['slack']} at graph {w['index']} ({w['graph']})")
    for m in summary["messages"]:
        run.say(f"  - {m}")
    run.say(f"verdict -> {path}")
    return 0 if verdict.passed else 1


def cmd_tournaments(run: Run) -> int:
    from . import tournaments as tm
    from .formats import graph_from_text, tournament_to_text, write_tournament_list

    a = run.args
    if a.tcmd == "enum":
        ts = tm.enumerate_tournaments(a.k, allow_large=a.allow_large)
        path = run.write_output(f"tournaments_{a.k}.txt", lambda fh: write_tournament_list(fh, ts))
        run.stats.update(k=a.k, count=len(ts), file=str(path))
        run.say(f"{len(ts)} tournaments on {a.k} vertices -> {path}")
        if a.realize_count:
            if a.k > tm.MAX_REALIZE_N:
                raise InputError(f"--realize-count needs k <= {tm.MAX_REALIZE_N}")
            via_t = tm.realizable_via_tournaments(a.k)
            direct = set(tm.realizable_indices(a.k))
            if via_t != direct:
                raise RuntimeError("realisable sets disagree")
            run.stats["realizable"] = len(direct)
            run.say(f"{len(direct)} graphs of F{a.k} are of the form C(T)")
        return 0
    if a.tcmd == "realize":
        g = graph_from_text(a.graph)
        t = tm.realize_as_tournament(g)
        run.stats.update(graph=a.graph, tournament=tournament_to_text(t) if t else None)
        run.say(tournament_to_text(t) if t else "not realisable")
        return 0
    if a.tcmd == "texact":
        ex, ub = tm.t_exact(a.n), tm.t_upper_bound(a.n)
        run.stats.update(n=a.n, t_exact=ex, upper_bound=ub)
        run.say(f"t({a.n}) = {ex}; upper bound {ub}")
        return 0
    if a.tcmd == "dims":
        dims = tm.iota_dimensions()
        run.stats["dimensions"] = {d.type_name: d.dimension for d in dims}
        run.stats["realizers_up_to_reversal"] = {d.type_name: d.realizers_up_to_reversal for d in dims}
        for d in dims:
            run.say(f"{d.type_name}: {d.realizers_up_to_reversal} realising tournaments, dimension {d.dimension}")
        return 0
    raise InputError("missing tournaments subcommand")


def _load_tournament(run: Run, source: str):
    from .formats import read_tournament_list, tournament_from_text
    import io

    if Path(source).exists():
        ts = read_tournament_list(io.StringIO(run.read_input(source)))
        if len(ts) != 1:
            raise InputError(f"{source} must contain exactly one tournament")
        return ts[0]
    return tournament_from_text(source)


def cmd_hadamard(run: Run) -> int:
    import io

    from . import hadamard as hd
    from .formats import read_matrix, tournament_to_text, write_matrix, write_tournament_list
    from .tournaments import paley_tournament

    a = run.args
    if a.hcmd in ("from-tournament", "paley"):
        t = paley_tournament(a.q) if a.hcmd == "paley" else _load_tournament(run, a.tournament)
        H = hd.tournament_to_skew_hadamard(t)
        path = run.write_output(f"hadamard_{H.order}.txt", lambda fh: write_matrix(fh, H.matrix))
        run.stats.update(order=H.order, identities_ok=True, file=str(path))
        run.say(f"skew Hadamard matrix of order {H.order} (H H^T = {H.order} I, H + H^T = 2 I) -> {path}")
        return 0
    if a.hcmd == "to-tournament":
        H = read_matrix(io.StringIO(run.read_input(a.matrix)))
        t = hd.skew_hadamard_to_tournament(H)
        path = run.write_output(f"tournament_{t.n}.txt", lambda fh: write_tournament_list(fh, [t]))
        run.stats.update(n=t.n, tournament=tournament_to_text(t), file=str(path))
        run.say(f"doubly regular tournament on {t.n} vertices -> {path}")
        return 0
    raise InputError("missing hadamard subcommand")


def cmd_construct(run: Run) -> int:
    from . import constructions as cs
    from .formats import tournament_to_text, write_graph_list, write_tournament_list
    from .tournaments import min_codegree

    a = run.args
    if a.ccmd == "blowup":
        res = cs.iterated_blowup(cs.BlowupSpec(a.n, a.depth, a.seed, a.paley))
        st = res.stats()
        path = run.write_output(f"blowup_{a.n}_{a.depth}_{a.seed}.txt", lambda fh: write_graph_list(fh, [res.graph]))
        run.stats.update(st, file=str(path))
        run.say(f"blow-up n={a.n} depth={a.depth} seed={a.seed}: {st['edges']} edges, "
                f"min codegree {st['min_codegree']} -> {path}")
        run.say(f"edge density {st['edge_density']} vs formula {st['formula_density']}")
        if "k4minus_free" in st:
            run.say(f"K4^- -free: {st['k4minus_free']}")
        return 0
    if a.ccmd == "random-tournament":
        t = cs.random_tournament(a.n, a.seed)
        d2 = min_codegree(t)
        path = run.write_output(f"random_tournament_{a.n}_{a.seed}.txt", lambda fh: write_tournament_list(fh, [t]))
        run.stats.update(n=a.n, seed=a.seed, prng=cs.PRNG_NAME, min_codegree=d2, file=str(path))
        run.say(f"random tournament n={a.n} seed={a.seed}: min cyclic codegree {d2} -> {path}")
        if a.n <= 12:
            run.say(tournament_to_text(t))
        return 0
    raise InputError("missing construct subcommand")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flagcert", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker cap (computations run in one process)")
    p.add_argument("--output-dir", default=".", help="directory for output files and manifest.json")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("enumerate", help="list all K4^- -free 3-graphs on k vertices")
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("flags", help="list the k-vertex flags of a named type")
    s.add_argument("type")
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_flags)

    s = sub.add_parser("pairdensity", help="flag pair density table")
    s.add_argument("type")
    s.add_argument("k1", type=int)
    s.add_argument("k2", type=int)
    s.add_argument("--target", default=None, help="basis such as F7 (default: the smallest one)")
    s.add_argument("--method", choices=("direct", "compose"), default="direct")
    s.set_defaults(func=cmd_pairdensity)

    s = sub.add_parser("expressions", help="expression families over F7")
    s.add_argument("kind", choices=("codegree", "tightpath", "target"))
    s.set_defaults(func=cmd_expressions)

    s = sub.add_parser("template", help="write an all-zero certificate with the expected shapes")
    s.set_defaults(func=cmd_template)

    s = sub.add_parser("verify", help="verify a certificate file")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tournaments", help="tournament utilities")
    ts = s.add_subparsers(dest="tcmd", required=True)
    e = ts.add_parser("enum")
    e.add_argument("k", type=int)
    e.add_argument("--realize-count", action="store_true")
    e.add_argument("--allow-large", action="store_true", help="permit k = 8")
    e = ts.add_parser("realize")
    e.add_argument("graph", help="graph text such as 3:123")
    e = ts.add_parser("texact")
    e.add_argument("n", type=int)
    ts.add_parser("dims")
    s.set_defaults(func=cmd_tournaments)

    s = sub.add_parser("hadamard", help="skew Hadamard matrices")
    hs = s.add_subparsers(dest="hcmd", required=True)
    e = hs.add_parser("from-tournament")
    e.add_argument("tournament", help="tournament file or text such as 3:101")
    e = hs.add_parser("to-tournament")
    e.add_argument("matrix")
    e = hs.add_parser("paley")
    e.add_argument("q", type=int)
    s.set_defaults(func=cmd_hadamard)

    s = sub.add_parser("construct", help="lower-bound constructions")
    cs = s.add_subparsers(dest="ccmd", required=True)
    e = cs.add_parser("blowup")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--paley", action="store_true")
    e = cs.add_parser("random-tournament")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_construct)
    return p


def main(argv: list[str] | None = None) -> int:
    started = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    args.argv = argv
    run = Run(args)
    try:
        code = args.func(run)
    except FlagcertError as e:
        print(f"error: {e}", file=sys.stderr)
        code = e.exit_code
        run.stats["error"] = str(e)
    run.finish(code, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
