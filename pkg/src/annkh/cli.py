"""Command line interface: ``annkh <command> <file> [options]``.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .f2 import block_homology, spectral_pages
from .floer import check_theorem
from .invariants import (NotInSubring, annular_homology, format_skein, jones, sj_statesum,
                         to_skein_form, to_zform)
from .khcomplex import build_complex, cube, dump_lines
from .rt import arrows_str, quantum_trace, rt_matrix, sj_via_trace
from .tangle import (Closure, DiagramError, TangleDiagram, count_crossings, parse_diagram,
                     serialize, to_json)
from .verify import open_tangle, run_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
COMMANDS = ("homology", "annular", "sj", "jones", "ss", "rt", "check", "parse", "dump")


class InputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="annkh", description="Annular Khovanov homology over F2.")
    p.add_argument("--version", action="version", version=f"annkh {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="diagram file (DSL or JSON); '-' reads stdin")
    p.add_argument("--reduced", action="store_true", help="reduced homology (needs marked=<arc>)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--max-page", type=int, default=None, metavar="N", help="stop the spectral sequence at E_N")
    p.add_argument("--threads", type=int, default=None, metavar="N",
                   help="worker processes for the cube (default: all cores)")
    p.add_argument("--force", action="store_true", help="allow more than 24 crossings")
    p.add_argument("--inject-fault", action="store_true",
                   help="check only: corrupt the RT matrices with an off-block entry")
    return p


def read_diagram(path: str) -> TangleDiagram:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_diagram(text)
    except DiagramError as exc:
        raise InputError(f"{path}: {exc}") from None


def _closed(d: TangleDiagram) -> TangleDiagram:
    if not d.is_closed:
        raise InputError("this command needs a closed diagram (closure=annular, or m=0)")
    return d


def _complex(d: TangleDiagram, args):
    try:
        return build_complex(_closed(d), reduced=args.reduced, threads=args.threads, force=args.force)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _dims_rows(dims: dict, names: tuple[str, ...]) -> list[dict]:
    return [dict(zip(names, key), dim=v) for key, v in sorted(dims.items())]


def _table(rows: list[dict], names: tuple[str, ...]) -> str:
    head = " ".join(f"{n:>4}" for n in names) + "  dim"
    body = [" ".join(f"{r[n]:>4}" for n in names) + f"  {r['dim']:>3}" for r in rows]
    total = sum(r["dim"] for r in rows)
    return "\n".join([head, *body, f"total {total}"])


def cmd_homology(d, args) -> tuple[int, object, str]:
    C = _complex(d, args)
    dims = block_homology(C.keys(), C.differential, block=lambda key: (key[0],))
    rows = _dims_rows(dims, ("i", "j"))
    data = {"command": "homology", "reduced": args.reduced, "dims": rows,
            "total": sum(dims.values())}
    return EXIT_OK, data, _table(rows, ("i", "j"))


def cmd_annular(d, args):
    C = _complex(d, args)
    rows = _dims_rows(annular_homology(C), ("i", "j", "k"))
    data = {"command": "annular", "reduced": args.reduced, "dims": rows,
            "total": sum(r["dim"] for r in rows)}
    return EXIT_OK, data, _table(rows, ("i", "j", "k"))


def _flats(d, args):
    try:
        return cube(_closed(d), args.threads, args.force)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_sj(d, args):
    sj = sj_statesum(d, _flats(d, args))
    J = sj.evaluate(t=1).with_variables(("q",))
    try:
        zf = to_zform(sj)
    except NotInSubring as exc:
        text = f"{sj} | not in Z[q^+-1][z]: {exc}\nt=1: {J}"
        return EXIT_FAIL, {"command": "sj", "sj": sj.to_json(), "zform": None, "jones": J.to_json()}, text
    sk = to_skein_form(zf)
    data = {"command": "sj", "sj": sj.to_json(), "sj_text": str(sj),
            "zform": [c.to_json() for c in zf.coeffs], "zform_text": zf.format(),
            "skein": [c.to_json() for c in sk.coeffs], "skein_text": format_skein(sk),
            "jones": J.to_json(), "jones_text": str(J)}
    return EXIT_OK, data, f"{sj} | {zf.format()} | {format_skein(sk)}\nt=1: {J}"


def cmd_jones(d, args):
    J = jones(d, _flats(d, args))
    return EXIT_OK, {"command": "jones", "jones": J.to_json(), "jones_text": str(J)}, str(J)


def cmd_ss(d, args):
    C = _complex(d, args)
    pages = spectral_pages(C.keys(), C.differential, args.max_page)
    out_pages, lines = [], []
    for pg in pages:
        rows = [{"k": k, "i": i, "j": j, "dim": v} for (k, i, j), v in sorted(pg.dims.items())]
        out_pages.append({"r": pg.r, "final": pg.final, "total": pg.total, "dims": rows})
        label = f"E^{pg.r}" + (" = E^inf" if pg.final else "")
        lines.append(label)
        lines.append(_table(rows, ("k", "i", "j")))
    return EXIT_OK, {"command": "ss", "pages": out_pages}, "\n".join(lines)


def cmd_rt(d, args):
    if d.closure is Closure.ANNULAR:
        T, ref = open_tangle(d), d
    else:
        if d.m_bottom != d.m_top:
            raise InputError("RT matrices need equal numbers of top and bottom endpoints")
        T, ref = d, None
    if T.n_crossings > 24 and not args.force:
        raise InputError(f"{T.n_crossings} crossings; pass --force")
    M = rt_matrix(T, signs_from=ref)
    tq = quantum_trace(M)
    sv = sj_via_trace(T, M)
    blocks, lines = [], []
    for lam in sorted(M.blocks, reverse=True):
        basis = [arrows_str(a) for a in M.basis(lam)]
        rows = [[str(x) for x in r] for r in M.blocks[lam]]
        blocks.append({"weight": lam, "basis": basis, "rows": [[x.to_json() for x in r] for r in M.blocks[lam]]})
        lines.append(f"weight {lam}:")
        width = max([len(b) for b in basis] + [len(x) for r in rows for x in r] + [1])
        lines.append(" " * (len(basis[0]) + 1) + " ".join(f"{b:>{width}}" for b in basis))
        for b, r in zip(basis, rows):
            lines.append(f"{b} " + " ".join(f"{x:>{width}}" for x in r))
    lines.append(f"tr_q = {tq}")
    lines.append(f"SJ via trace = {sv}")
    data = {"command": "rt", "m": M.m, "blocks": blocks, "quantum_trace": tq.to_json(),
            "quantum_trace_text": str(tq), "sj_via_trace": sv.to_json(), "sj_via_trace_text": str(sv)}
    return EXIT_OK, data, "\n".join(lines)


def cmd_check(d, args):
    try:
        results = run_checks(_closed(d), threads=args.threads, force=args.force,
                             inject_fault=args.inject_fault)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok = all(r.ok for r in results)
    lines = [r.line() for r in results]
    report = check_theorem(d) if d.closure is Closure.ANNULAR else None
    if report is not None:
        lines = [report.table(), ""] + lines
    lines.append("all checks passed" if ok else f"{sum(not r.ok for r in results)} check(s) failed")
    data = {"command": "check", "ok": ok,
            "checks": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}
    if report is not None:
        data["theorem"] = report.to_json()
    return (EXIT_OK if ok else EXIT_FAIL), data, "\n".join(lines)


def cmd_parse(d, args):
    cc = count_crossings(d)
    info = {"components": len(d.components), "crossings": d.n_crossings,
            "n_plus": cc.n_plus, "n_minus": cc.n_minus, "arcs": len(d.arcs)}
    text = serialize(d) + (f"# components={info['components']} crossings={info['crossings']} "
                           f"n+={cc.n_plus} n-={cc.n_minus} arcs={info['arcs']}")
    return EXIT_OK, {"command": "parse", "diagram": to_json(d), **info}, text


def cmd_dump(d, args):
    C = _complex(d, args)
    lines = dump_lines(C)
    return EXIT_OK, {"command": "dump", "lines": lines}, "\n".join(lines)


HANDLERS = {"homology": cmd_homology, "annular": cmd_annular, "sj": cmd_sj, "jones": cmd_jones,
            "ss": cmd_ss, "rt": cmd_rt, "check": cmd_check, "parse": cmd_parse, "dump": cmd_dump}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.inject_fault and args.command != "check":
        print("annkh: --inject-fault only applies to check", file=sys.stderr)
        return EXIT_INPUT
    if args.threads is not None and args.threads < 1:
        print("annkh: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if args.max_page is not None and args.max_page < 1:
        print("annkh: --max-page must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        d = read_diagram(args.file)
        code, data, text = HANDLERS[args.command](d, args)
    except InputError as exc:
        print(f"annkh: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
