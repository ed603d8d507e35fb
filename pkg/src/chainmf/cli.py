"""Command line driver: ``chainmf {collection,quiver,hom,milnor,checks} -a 2,2 ...``.

Exit codes: 0 when every check passes, 1 on a verification failure, 2 on a
bad configuration.  JSON output is sorted and carries no timing, so equal
inputs give byte-identical files whatever ``--jobs`` is; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .collection import (
    CollectionError,
    ExponentTooSmall,
    IndexOutOfRange,
    Report,
    _violations_exceptional,
    _violations_semiorthogonal,
    _violations_strong,
    build_collection,
    check_exponents,
    label_text,
    milnor_by_weights,
    milnor_number,
    padded_window,
    verify_lemmas,
    verify_serre,
    verify_triangles,
)
from .hom import hom_dim

REPORT_SCHEMA = "chainmf.report/1"
COLLECTION_SCHEMA = "chainmf.collection/1"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    exponents: Tuple[int, ...]
    fmt: str = "json"
    window: Optional[Tuple[int, int]] = None
    jobs: int = 1
    out: Optional[str] = None


def parse_exponents(text: str) -> Tuple[int, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ConfigError("empty exponent list")
    try:
        a = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"exponents must be integers, got {text!r}") from None
    return a


def parse_window(text: Optional[str]) -> Optional[Tuple[int, int]]:
    if text is None:
        return None
    try:
        lo, hi = (int(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"--window wants lmin,lmax, got {text!r}") from None
    if hi < lo:
        raise ConfigError("--window: lmax < lmin")
    return lo, hi


# ---------------------------------------------------------------------------
# parallel hom table


def _row(args):
    a, s, window = args
    c = build_collection(a)
    A = c.objects[s].object
    row = []
    for t, B in enumerate(c.objects):
        dims = [(l, hom_dim(A, B.object, l)) for l in padded_window(A, B.object, 1, window)]
        row.append((t, dims))
    return s, row


def hom_table_parallel(a: Tuple[int, ...], window=None, jobs: int = 1) -> Dict[Tuple[int, int], Dict[int, int]]:
    n = len(build_collection(a))
    tasks = [(a, s, window) for s in range(n)]
    if jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, n)) as pool:
            rows = list(pool.map(_row, tasks))
    else:
        rows = [_row(t) for t in tasks]
    table = {}
    for s, row in sorted(rows):
        for t, dims in row:
            table[(s, t)] = dict(dims)
    return table


def _table_json(table) -> list:
    return [[s, t, [[l, d] for l, d in sorted(dims.items())]] for (s, t), dims in sorted(table.items())]


# ---------------------------------------------------------------------------
# commands


def _envelope(cfg: RunConfig, reports: Sequence[Report], **extra) -> dict:
    out = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": {"name": cfg.command, "exponents": list(cfg.exponents),
                    "window": list(cfg.window) if cfg.window else None},
        "passed": all(r.passed for r in reports),
        "reports": [r.to_json() for r in reports],
    }
    out.update(extra)
    return out


def cmd_collection(cfg: RunConfig):
    if cfg.fmt == "dot":
        raise ConfigError("collection has no DOT form; use json or text")
    a = check_exponents(cfg.exponents)
    c = build_collection(a)
    table = hom_table_parallel(a, cfg.window, cfg.jobs)
    reports = [_violations_exceptional(table), _violations_strong(table), _violations_semiorthogonal(table)]
    reports[0].name, reports[1].name, reports[2].name = "exceptional", "strong", "semiorthogonal"
    body = _envelope(cfg, reports, collection={
        "schema": COLLECTION_SCHEMA,
        "exponents": list(a),
        "milnor": milnor_number(a),
        "objects": [{"index": k, "label": o.name, "factorization": o.object.to_json()}
                    for k, o in enumerate(c.objects)],
        "hom": _table_json(table),
    })
    if cfg.fmt == "text":
        lines = [f"collection {list(a)}: {len(c)} objects (milnor {milnor_number(a)})"]
        lines += [f"  {k}: {o.name}" for k, o in enumerate(c.objects)]
        lines += _report_lines(reports)
        return "\n".join(lines) + "\n", body["passed"]
    return _json(body), body["passed"]


def cmd_quiver(cfg: RunConfig, expect: Optional[str] = None):
    from .quiver import build_quiver, export_dot, quiver_to_dict, verify_quiver

    a = check_exponents(cfg.exponents)
    c = build_collection(a)
    Q, I = build_quiver(a)
    rep = verify_quiver(c, Q, I)
    if cfg.fmt == "dot":
        text = export_dot(Q)
    elif cfg.fmt == "text":
        lines = [f"quiver {list(a)}: {len(Q.vertices)} vertices, {len(Q.arrows)} arrows, {len(I)} relations"]
        lines += [f"  {ar.source} -> {ar.target}  {ar.name}" for ar in Q.arrows]
        lines += _report_lines([rep])
        text = "\n".join(lines) + "\n"
    else:
        text = _json(_envelope(cfg, [rep], quiver=quiver_to_dict(Q, I)))
    passed = rep.passed
    if expect is not None:
        with open(expect) as fh:
            if fh.read() != text:
                print(f"output differs from {expect}", file=sys.stderr)
                passed = False
    if not rep.passed:
        for v in rep.violations:
            print(f"quiver: {v.check} ({v.source} -> {v.target}: got {v.dim}, want {v.expected})",
                  file=sys.stderr)
    return text, passed


def cmd_hom(cfg: RunConfig, s: int, t: int):
    a = check_exponents(cfg.exponents)
    c = build_collection(a)
    n = len(c)
    if not (0 <= s < n and 0 <= t < n):
        raise IndexOutOfRange(f"indices must lie in [0, {n - 1}]")
    A, B = c.objects[s].object, c.objects[t].object
    if cfg.window is not None:
        shifts = range(cfg.window[0], cfg.window[1] + 1)
    else:
        w1, w2 = padded_window(A, B), padded_window(B, A)
        lo = min([w.start for w in (w1, w2) if len(w)], default=0)
        hi = max([w.stop - 1 for w in (w1, w2) if len(w)], default=0)
        shifts = range(lo, hi + 1)
    dims = [[l, hom_dim(A, B, l)] for l in shifts]
    body = {"schema": REPORT_SCHEMA, "version": __version__,
            "command": {"name": "hom", "exponents": list(a), "source": s, "target": t},
            "source": label_text(c.objects[s].label), "target": label_text(c.objects[t].label),
            "dims": dims}
    if cfg.fmt == "text":
        return "".join(f"{l}\t{d}\n" for l, d in dims), True
    if cfg.fmt == "dot":
        raise ConfigError("hom has no DOT form")
    return _json(body), True


def cmd_milnor(cfg: RunConfig):
    a = check_exponents(cfg.exponents)
    rec = milnor_number(a)
    try:
        w = milnor_by_weights(a)
        note = None
    except ExponentTooSmall as exc:
        w, note = None, str(exc)
    agree = None if w is None else (w == rec)
    body = {"schema": REPORT_SCHEMA, "version": __version__,
            "command": {"name": "milnor", "exponents": list(a)},
            "recursion": rec, "weights": w, "agree": agree, "note": note}
    if cfg.fmt == "text":
        tail = f"weights {w}, agree {agree}" if w is not None else f"weights refused ({note})"
        return f"recursion {rec}, {tail}\n", agree is not False
    if cfg.fmt == "dot":
        raise ConfigError("milnor has no DOT form")
    return _json(body), agree is not False


def cmd_checks(cfg: RunConfig):
    if cfg.fmt == "dot":
        raise ConfigError("checks has no DOT form")
    a = check_exponents(cfg.exponents)
    c = build_collection(a)
    reports = [verify_triangles(c), verify_serre(c)] + verify_lemmas(c)
    body = _envelope(cfg, reports)
    if cfg.fmt == "text":
        return "\n".join(_report_lines(reports)) + "\n", body["passed"]
    return _json(body), body["passed"]


def _report_lines(reports) -> List[str]:
    lines = []
    for r in reports:
        lines.append(f"{r.name}: {'pass' if r.passed else 'FAIL'} ({r.checked} checks)")
        for v in r.violations[:20]:
            lines.append(f"    {v.check}: {v.source} -> {v.target} at l={v.shift}: dim {v.dim}, expected {v.expected}")
    return lines


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chainmf", description="Exceptional collections for chain polynomials.")
    p.add_argument("--version", action="version", version=f"chainmf {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("-a", "--exponents", required=True, help="comma separated, e.g. 2,2,2")
        sp.add_argument("--format", default="json", choices=["json", "dot", "text"])
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for Hom tables")
        sp.add_argument("--window", help="override the shift window: lmin,lmax")

    common(sub.add_parser("collection", help="build and verify the collection"))
    q = sub.add_parser("quiver", help="build the quiver with relations")
    common(q)
    q.add_argument("--expect", help="fixture to compare the output against")
    h = sub.add_parser("hom", help="hom dimensions between two objects")
    common(h)
    h.add_argument("source", type=int)
    h.add_argument("target", type=int)
    common(sub.add_parser("milnor", help="Milnor number two ways"))
    common(sub.add_parser("checks", help="triangles, Serre duality and lemma suites"))
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = RunConfig(args.command, parse_exponents(args.exponents), args.format,
                        parse_window(args.window), args.jobs, args.out)
        if cfg.jobs < 1:
            raise ConfigError("--jobs must be positive")
        if cfg.command == "collection":
            text, ok = cmd_collection(cfg)
        elif cfg.command == "quiver":
            text, ok = cmd_quiver(cfg, args.expect)
        elif cfg.command == "hom":
            text, ok = cmd_hom(cfg, args.source, args.target)
        elif cfg.command == "milnor":
            text, ok = cmd_milnor(cfg)
        else:
            text, ok = cmd_checks(cfg)
    except (ConfigError, CollectionError, OSError) as exc:
        print(f"chainmf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"chainmf {cfg.command}: {'pass' if ok else 'FAIL'} in {time.perf_counter() - t0:.2f}s",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
