"""Command-line front end: ``prt <subcommand> [options]``.

Exit codes: 0 success, 1 an audited invariant failed, 2 configuration or
input error.  The seed comes from ``--seed``, else ``PRT_SEED``, else 0.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

from .antichain import audit_level, build, host, host_for_levels
from .checks import SUITES, run_suite, shape_defect
from .diary import classify, diary_axioms_check
from .enumeration import (
    ColoringReport,
    case_id,
    census_report,
    cross_check,
    default_depth,
    default_max_height,
    witness_persistence,
)
from .errors import DepthExhausted, InstanceTooLarge, PrtError
from .formats import ChainFile, dump, dump_catalog, dump_report, parse_chain
from .hl import HLInstance, hl_micro_search

OK, FAILED, CONFIG = 0, 1, 2


class ConfigError(ValueError):
    """Invalid run configuration; reported with usage text and exit code 2."""


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    depth: int | None = None
    levels: int = 16
    p: int = 2
    out: str | None = None
    budget: int = 14
    chain: str | None = None
    suite: str = "core"
    subtrees: int = 0
    max_height: int | None = None
    n: int = 2
    height: int = 6
    colors: int = 2
    target: int = 1
    i_star: int = 0
    constant: int | None = None

    def validate(self) -> None:
        for name in ("levels", "p", "budget", "n", "height", "colors", "target"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        for name in ("depth", "max_height"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        if self.seed < 0 or self.subtrees < 0 or self.i_star < 0:
            raise ConfigError("--seed, --subtrees and --i-star must be non-negative")
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(sorted(SUITES))}")
        if self.command == "classify" and not self.chain:
            raise ConfigError("classify needs --chain FILE")


def _write(text: str, out: str | None, default: str) -> str:
    dest = out or default
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")
    return dest


# -- subcommands -----------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> int:
    depth = cfg.depth or 32
    S = host(depth, cfg.seed)
    bad = shape_defect(S, depth)
    dest = _write(dump(S), cfg.out, f"codingtree_d{depth}_s{cfg.seed}.txt")
    print(f"gen depth={depth} seed={cfg.seed} nodes={S.node_count()} rays={max(S.rays) + 1} -> {dest}")
    if bad:
        print(f"FAIL shape: {bad}")
        return FAILED
    return OK


def cmd_antichain(cfg: RunConfig) -> int:
    if cfg.depth is None:
        S = host_for_levels(cfg.levels, cfg.seed)
    else:
        S = host(cfg.depth, cfg.seed)
    try:
        A = build(S, cfg.levels)
    except DepthExhausted as e:
        raise ConfigError(f"--depth {cfg.depth} is too shallow for {cfg.levels} levels: {e}") from e
    failed = [(r.level, e) for r in (audit_level(A, m) for m in range(cfg.levels)) for e in r.entries if not e.passed]
    dest = _write(dump(A), cfg.out, f"antichain_l{cfg.levels}_s{cfg.seed}.txt")
    print(f"antichain levels={cfg.levels} host_depth={S.size} seed={cfg.seed} -> {dest}")
    for m, e in failed:
        print(f"FAIL level {m} invariant ({e.name}): {e.witness}")
    return FAILED if failed else OK


def cmd_classify(cfg: RunConfig) -> int:
    try:
        ch = parse_chain(Path(cfg.chain).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {cfg.chain}: {e}") from e
    S = host(ch.depth, ch.seed)
    d = classify(ch.words, S)
    cid = case_id(d)
    print(dump(d), end="")
    print(f"id={cid}" if cid is not None else f"p={d.p} (no case number beyond 2-chains)")
    return OK


def cmd_enumerate(cfg: RunConfig) -> int:
    p = cfg.p
    depth = cfg.depth or default_depth(p)
    max_height = cfg.max_height or default_max_height(p)
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    S = host_for_levels(depth, cfg.seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cc = cross_check(p, S, depth, max_height)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    cat = cc.catalog
    if p == 2 and cfg.subtrees:
        report = witness_persistence(depth, cfg.subtrees, S, cfg.seed)
    else:
        report = census_report(cat, cc.census)
    files = {
        "catalog": out / f"catalog_p{p}.txt",
        "report": out / f"report_p{p}.txt",
        "figure": out / f"report_p{p}.png",
    }
    files["catalog"].write_text(dump_catalog(cat), encoding="utf-8")
    files["report"].write_text(dump_report(report), encoding="utf-8")
    from .report import plot_report

    plot_report(report, files["figure"])
    chains = out / "chains"
    chains.mkdir(exist_ok=True)
    for d, C in cc.census.witness.items():
        f = chains / f"chain_p{p}_id{cat.id_of(d)}.txt"
        f.write_text(dump(ChainFile(S.size, cfg.seed, C)), encoding="utf-8")

    print(f"enumerate p={p} depth={depth} seed={cfg.seed} host_depth={S.size} max_height={max_height}")
    print(f"classes={len(cat)} provenance={'both' if cat.accepted else 'mixed'}")
    for d, pv in zip(cat.entries, cat.provenance):
        k = cat.id_of(d)
        print(f"  id={k} height={d.height} count={report.counts.get(k, 0)} provenance={pv}")
    for name, f in files.items():
        print(f"{name}: {f}")
    return OK if _enumeration_ok(p, cc, report) else FAILED


def _enumeration_ok(p: int, cc, report: ColoringReport) -> bool:
    ok = True
    if not cc.ok:
        print(f"FAIL cross-check: {len(cc.only_enumerated)} only enumerated, {len(cc.only_brute)} only brute-forced")
        ok = False
    for d in cc.catalog.entries:
        r = diary_axioms_check(d.critical)
        if not r.ok:
            print(f"FAIL axioms on a catalog entry: {r.violation}")
            ok = False
    if p == 2 and len(cc.catalog) != 7:
        print(f"FAIL expected 7 classes of 2-chains, found {len(cc.catalog)}")
        ok = False
    for v in report.subtrees:
        if not v.ok:
            print(f"FAIL subtree seed={v.seed}: missing ids {list(v.missing)}")
            ok = False
    return ok


def cmd_verify(cfg: RunConfig) -> int:
    depth = cfg.depth or 32
    print(f"verify suite={cfg.suite} depth={depth} seed={cfg.seed} budget={cfg.budget}")
    checks = run_suite(cfg.suite, depth, cfg.seed, cfg.budget)
    for c in checks:
        print(c.line())
    return OK if all(c.passed for c in checks) else FAILED


def cmd_hl_search(cfg: RunConfig) -> int:
    try:
        if cfg.constant is not None:
            inst = HLInstance.constant(cfg.n, cfg.height, cfg.colors, cfg.constant, cfg.i_star)
        else:
            inst = HLInstance.random(cfg.n, cfg.height, cfg.colors, cfg.seed, cfg.i_star)
        res = hl_micro_search(inst, cfg.target)
    except (InstanceTooLarge, ValueError) as e:
        raise ConfigError(str(e)) from e
    print(
        f"hl-search (exploratory, finite instance only) n={cfg.n} height={cfg.height} "
        f"colors={cfg.colors} target={cfg.target} i_star={cfg.i_star} seed={cfg.seed}"
    )
    if res.exhausted:
        print(f"exhausted after {res.evaluations} evaluations: no witness within these heights")
        return OK
    w = res.witness
    print(f"witness levels={list(w.levels)} color={w.color} evaluations={res.evaluations} verified=yes")
    for i, V in enumerate(w.trees):
        print(f"  V_{i}: {' '.join(x or '-' for x in V)}")
    return OK


COMMANDS = {
    "gen": cmd_gen,
    "antichain": cmd_antichain,
    "classify": cmd_classify,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "hl-search": cmd_hl_search,
}


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; returns the exit status."""
    cfg.validate()
    return COMMANDS[cfg.command](cfg)


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prt", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $PRT_SEED, else 0)")
    common.add_argument("--out", help="output file, directory for enumerate, '-' for stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a coding tree (CODINGTREE file)")
    g.add_argument("--depth", type=int, help="number of levels (default 32)")

    a = sub.add_parser("antichain", parents=[common], help="build and audit an almost antichain")
    a.add_argument("--levels", type=int, default=16)
    a.add_argument("--depth", type=int, help="host depth (default: smallest that fits)")

    c = sub.add_parser("classify", parents=[common], help="print the diary of a chain (CHAIN file)")
    c.add_argument("--chain", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="diary catalog, report and figure")
    e.add_argument("--p", type=int, default=2, help="chain length")
    e.add_argument("--depth", type=int, help="antichain levels (default depends on p)")
    e.add_argument("--max-height", type=int, help="axiom search height (default 4p+2)")
    e.add_argument("--subtrees", type=int, default=0, help="persistence check in this many subtrees (p=2)")

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", default="core", help=f"one of {', '.join(SUITES)}")
    v.add_argument("--depth", type=int, help="coding-tree depth (default 32)")
    v.add_argument("--budget", type=int, default=14, help="amalgamation depth budget")

    h = sub.add_parser("hl-search", parents=[common], help="exploratory level-product search")
    h.add_argument("--n", type=int, default=2, help="number of trees")
    h.add_argument("--height", type=int, default=6)
    h.add_argument("--colors", type=int, default=2)
    h.add_argument("--target", type=int, default=1, help="splitting levels wanted")
    h.add_argument("--i-star", type=int, default=0, help="distinguished tree")
    h.add_argument("--constant", type=int, help="use the constant coloring with this color")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    seed = ns.seed
    if seed is None:
        env = os.environ.get("PRT_SEED", "0")
        try:
            seed = int(env)
        except ValueError as e:
            raise ConfigError(f"PRT_SEED={env!r} is not an integer") from e
    known = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in known and v is not None and k != "seed"}
    return RunConfig(seed=seed, **kw)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        return run(config_from_args(ns))
    except ConfigError as e:
        ap.print_usage(sys.stderr)
        print(f"prt: error: {e}", file=sys.stderr)
        return CONFIG
    except PrtError as e:
        print(f"prt: error: {type(e).__name__}: {e}", file=sys.stderr)
        return CONFIG


if __name__ == "__main__":
    sys.exit(main())
