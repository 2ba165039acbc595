"""Command-line frontend: build complexes, run the matching, verify, report.

Exit codes: 0 pass, 1 verification failure, 2 usage or cap error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass

from . import chains, complexes, euler, morse, posets, words

SCHEMA = "homchains-report/1"
SUITES = ("cubicality", "acyclicity", "bijection", "zero-incidence",
          "torsion-free", "euler")


@dataclass
class RunConfig:
    spec: object = None          # ChainSpec or None
    poset: object = None         # GradedPoset or None
    max_cells: int = words.DEFAULT_CAP
    threads: int = 1
    fmt: str = "table"

    def __post_init__(self):
        if self.max_cells <= 0 or self.threads <= 0:
            raise ValueError("caps and thread counts must be positive")


def _config(args):
    spec = None
    poset = None
    if getattr(args, "spec", None):
        spec = words.ChainSpec(tuple(int(v) for v in args.spec.split(",")))
    if getattr(args, "poset", None):
        with open(args.poset) as fh:
            poset = posets.parse_poset_text(fh.read())
    if spec is None and poset is None:
        raise ValueError("one of --spec or --poset is required")
    if spec is not None and poset is not None:
        raise ValueError("--spec and --poset are mutually exclusive")
    return RunConfig(spec=spec, poset=poset,
                     max_cells=getattr(args, "max_cells", words.DEFAULT_CAP),
                     threads=getattr(args, "threads", 1),
                     fmt=getattr(args, "format", "table"))


def _complex_of(cfg):
    if cfg.spec is not None:
        return complexes.chain_product_complex(cfg.spec, cap=cfg.max_cells)
    return complexes.maximal_chain_complex(cfg.poset, cap=cfg.max_cells)


def _emit(payload, fmt, table_lines):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in table_lines:
            print(line)


def cmd_build(args):
    cfg = _config(args)
    cx = _complex_of(cfg)
    payload = {"schema": SCHEMA, "f_vector": list(cx.f_vector()), "dim": cx.dim,
               "euler": cx.euler_characteristic()}
    if cfg.spec is not None:
        payload["spec"] = list(cfg.spec.i)
    _emit(payload, cfg.fmt, [
        f"f-vector: {cx.f_vector()}",
        f"dimension: {cx.dim}",
        f"euler characteristic: {cx.euler_characteristic()}",
    ])
    return 0


def _matching_digest(matching):
    h = hashlib.sha256()
    for a, b in matching.pairs():
        h.update(f"{words.render_cellword(a)}->{words.render_cellword(b)}\n".encode())
    return h.hexdigest()


def cmd_match(args):
    cfg = _config(args)
    if cfg.spec is None:
        raise ValueError("match requires --spec")
    matching = morse.match_product_of_chains(cfg.spec, cap=cfg.max_cells,
                                             threads=cfg.threads)
    payload = {
        "schema": SCHEMA,
        "spec": list(cfg.spec.i),
        "cells": matching.n_cells,
        "matched_pairs": len(matching.up),
        "critical": {str(d): len(v) for d, v in sorted(matching.critical.items())},
        "digest": _matching_digest(matching),
    }
    lines = [f"cells: {matching.n_cells}",
             f"matched pairs: {len(matching.up)}",
             "critical cells: " + ", ".join(
                 f"dim {d}: {len(v)}" for d, v in sorted(matching.critical.items())),
             f"digest: {payload['digest']}"]
    if args.emit_critical:
        payload["critical_cells"] = {
            str(d): [words.render_cellword(c) for c in v]
            for d, v in sorted(matching.critical.items())}
        for d, v in sorted(matching.critical.items()):
            lines.append(f"dim {d}: " + " ".join(words.render_cellword(c) for c in v))
    if args.emit_pairs:
        payload["pairs"] = [[words.render_cellword(a), words.render_cellword(b)]
                            for a, b in matching.pairs()]
        lines.extend(f"{words.render_cellword(a)} <-> {words.render_cellword(b)}"
                     for a, b in matching.pairs())
    if args.emit_trace:
        cell = words.parse_cellword(args.emit_trace)
        trace = morse.fiber_trace(cfg.spec, cell)
        payload["trace"] = {
            "cell": words.render_cellword(cell),
            "steps": [{"r": r, "s": s, "j": j, "rho": k} for r, s, j, k in trace.steps],
            "outcome": trace.outcome,
            "partner": words.render_cellword(trace.partner) if trace.partner else None,
        }
        lines.append(f"trace of {words.render_cellword(cell)}:")
        lines.extend("  " + row for row in trace.rows())
        lines.append(f"  outcome: {trace.outcome}"
                     + (f" with {words.render_cellword(trace.partner)}" if trace.partner else ""))
    _emit(payload, cfg.fmt, lines)
    return 0


def _suite_results(cfg, names):
    """Run verification suites for a chain spec; yields (name, ok, detail)."""
    spec = cfg.spec
    cx = complexes.chain_product_complex(spec, cap=cfg.max_cells)
    matching = morse.match_product_of_chains(spec, cap=cfg.max_cells, threads=cfg.threads)
    results = []
    hreport = None
    for name in names:
        if name == "cubicality":
            ok = True
            for d, cells in cx.cells.items():
                for cw in cells:
                    mh = complexes.cellword_to_multihom(cw, spec)
                    sizes = [len(c) for c in mh]
                    if any(s not in (1, 2) for s in sizes) or any(
                            a == 2 and b == 2 for a, b in zip(sizes, sizes[1:])):
                        ok = False
            results.append((name, ok, f"{cx.n_cells()} cells checked"))
        elif name == "acyclicity":
            try:
                morse.validate_acyclic(matching, cx)
                results.append((name, True, f"{len(matching.up)} pairs"))
            except morse.AcyclicityError as exc:
                results.append((name, False, str(exc)))
        elif name == "bijection":
            from_words = {
                words.critical_cellword_from_word(w)
                for w in words.enumerate_words(spec, cap=cfg.max_cells)
                if words.decompose_descents(w).valid}
            from_matching = {c for v in matching.critical.values() for c in v}
            results.append((name, from_words == from_matching,
                            f"{len(from_matching)} critical cells"))
        elif name == "zero-incidence":
            cert = morse.validate_acyclic(matching, cx)
            icc, _ = chains.morse_complex(cx, matching, cert)
            ok = all(m.is_zero() for m in icc.mats.values())
            results.append((name, ok, "all Morse boundaries zero" if ok else "nonzero entry"))
        elif name == "torsion-free":
            hreport = hreport or chains.homology(cx)
            results.append((name, hreport.torsion_free, f"betti {hreport.betti}"))
        elif name == "euler":
            hreport = hreport or chains.homology(cx)
            chi = cx.euler_characteristic()
            ok = chi == hreport.euler
            detail = f"chi = {chi}"
            if all(v == 1 for v in spec.i):
                ok = ok and chi == euler.euler_formula(spec.n)
                detail += f" (formula chi_{spec.n} = {euler.euler_formula(spec.n)})"
            results.append((name, ok, detail))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return results


def cmd_verify(args):
    cfg = _config(args)
    if cfg.spec is None:
        raise ValueError("verify requires --spec")
    names = SUITES if args.suite == "all" else tuple(args.suite.split(","))
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    results = _suite_results(cfg, names)
    payload = {"schema": SCHEMA, "spec": list(cfg.spec.i),
               "results": {name: ok for name, ok, _ in results}}
    lines = [f"{name}: {'PASS' if ok else 'FAIL'} ({detail})" for name, ok, detail in results]
    _emit(payload, cfg.fmt, lines)
    return 0 if all(ok for _, ok, _ in results) else 1


def cmd_report(args):
    cfg = _config(args)
    if cfg.spec is None:
        raise ValueError("report requires --spec")
    spec = cfg.spec
    cx = complexes.chain_product_complex(spec, cap=cfg.max_cells)
    matching = morse.match_product_of_chains(spec, cap=cfg.max_cells, threads=cfg.threads)
    cert = morse.validate_acyclic(matching, cx)
    hreport = chains.homology(cx)
    payload = {
        "schema": SCHEMA,
        "spec": list(spec.i),
        "f_vector": list(cx.f_vector()),
        "critical": {str(d): [words.render_cellword(c) for c in v]
                     for d, v in sorted(matching.critical.items())},
        "betti": list(hreport.betti),
        "torsion": [list(t) for t in hreport.torsion],
        "euler": hreport.euler,
        "matching": {"pairs": len(matching.up), "digest": _matching_digest(matching)},
        "acyclic": cert is not None,
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_euler(args):
    entries = euler.euler_table(args.n_max)
    if args.format == "json":
        payload = {"schema": SCHEMA,
                   "chi": {str(e.n): e.chi for e in entries if e.method == "formula"}}
        print(json.dumps(payload, sort_keys=True))
    else:
        for e in entries:
            if e.method == "formula":
                print(f"chi_{e.n} = {e.chi}")
    return 0


def _parser():
    ap = argparse.ArgumentParser(prog="homchains",
                                 description="Homomorphism complexes of maximal chains")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poset_ok=True):
        p.add_argument("--spec", help="comma-separated chain lengths, e.g. 2,2,2")
        if poset_ok:
            p.add_argument("--poset", help="poset file: `id rank` lines then `lower upper` covers")
        p.add_argument("--max-cells", type=int, default=words.DEFAULT_CAP)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--format", choices=("json", "table"), default="table")

    p = sub.add_parser("build", help="build the complex and print its f-vector")
    common(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("match", help="run the discrete Morse matching")
    common(p, poset_ok=False)
    p.add_argument("--emit-critical", action="store_true")
    p.add_argument("--emit-pairs", action="store_true")
    p.add_argument("--emit-trace", metavar="CELL", help="trace one cell, e.g. '(21)1(32)344'")
    p.set_defaults(fn=cmd_match)

    p = sub.add_parser("verify", help="run verification suites")
    common(p, poset_ok=False)
    p.add_argument("--suite", default="all",
                   help="comma-separated: " + ", ".join(SUITES) + ", or all")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("report", help="emit the JSON report bundle")
    common(p, poset_ok=False)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("euler", help="Euler characteristics of Hom(B_n)")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(fn=cmd_euler)

    return ap


def main(argv=None):
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, OSError, posets.CapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
