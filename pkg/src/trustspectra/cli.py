"""Command line interface: ``trustspectra <command> [options]``.

Exit codes: 0 success, 1 failed self test, 2 data error, 3 convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import acceptance
from . import fixtures as fx
from .concepts import (
    concept_spectrum,
    concepts_of,
    decompose_edge,
    qualified_matrix,
    similarity_preserving_matrix,
)
from .exceptions import ConvergenceError, TrustSpectraError
from .linalg.decomposition import METHODS, SpectralDecomposition, svd, truncate
from .model import FORMATS, extract_block, greedy_complete_block, ingest_scores
from .recommend import rank_trustees, refine_query
from .similarity import (
    Ray,
    induced_map,
    morphism_violation_report,
    similarity_preserving_operator,
)

OUTPUTS = ("json", "csv", "table")
EXIT_DATA, EXIT_CONVERGENCE, EXIT_SELFTEST = 2, 3, 1


@dataclass(frozen=True)
class RunConfig:
    input: Optional[str] = None
    format: Optional[str] = None
    tol: float = 0.0
    method: str = "golub-kahan"
    rank: Optional[int] = None
    seed: int = 42
    output: str = "json"

    def __post_init__(self):
        if self.tol < 0:
            raise ValueError(f"--tol must be >= 0, got {self.tol}")
        if self.rank is not None and self.rank < 1:
            raise ValueError(f"--rank must be >= 1, got {self.rank}")
        if self.method not in METHODS:
            raise ValueError(f"--method must be one of {METHODS}")
        if self.format is not None and self.format not in FORMATS:
            raise ValueError(f"--format must be one of {FORMATS}")
        if self.output not in OUTPUTS:
            raise ValueError(f"--output must be one of {OUTPUTS}")

    @property
    def source(self):
        return self.input or fx.fixture_path()


def _split(ids):
    return [x.strip() for x in ids.split(",") if x.strip()] if ids else None


# -- rendering ---------------------------------------------------------------


def _fmt(x):
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def _matrix_text(rows, cols, values, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + list(cols))
        for r, row in zip(rows, values):
            writer.writerow([r] + [repr(float(x)) for x in row])
        return buf.getvalue()
    width = max([len(str(r)) for r in rows] + [1])
    lines = [" " * width + "".join(f"{str(c):>13}" for c in cols)]
    for r, row in zip(rows, values):
        lines.append(f"{str(r):<{width}}" + "".join(f"{x:13.6g}" for x in row))
    return "\n".join(lines) + "\n"


def _records_text(records, fmt):
    if not records:
        return ""
    keys = list(records[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        return buf.getvalue()
    widths = {k: max(len(k), *(len(_fmt(r[k])) for r in records)) for k in keys}
    lines = ["  ".join(f"{k:>{widths[k]}}" for k in keys)]
    for r in records:
        lines.append("  ".join(f"{_fmt(r[k]):>{widths[k]}}" for k in keys))
    return "\n".join(lines) + "\n"


def _emit(out, cfg, payload, records=None, matrix=None):
    if cfg.output == "json":
        out.write(json.dumps(payload) + "\n")
    elif matrix is not None:
        out.write(_matrix_text(*matrix, cfg.output))
    else:
        out.write(_records_text(records or [], cfg.output))


# -- commands ----------------------------------------------------------------


def _table(cfg):
    return ingest_scores(cfg.source, cfg.format)


def _block(cfg, args):
    table = _table(cfg)
    rows, cols = _split(args.rows), _split(args.cols)
    if rows is None or cols is None:
        g_rows, g_cols = greedy_complete_block(table)
        rows = rows or g_rows
        cols = cols or g_cols
    return extract_block(table, rows, cols)


def _decomposition(cfg, args):
    if getattr(args, "decomposition", None):
        with open(args.decomposition, encoding="utf-8") as fh:
            return None, SpectralDecomposition.from_json(fh.read())
    m = _block(cfg, args)
    d = svd(m, tol=cfg.tol, method=cfg.method, seed=cfg.seed)
    if cfg.rank is not None and cfg.rank < d.rank:
        d = truncate(d, cfg.rank)
    return m, d


def cmd_ingest(cfg, args, out):
    table = _table(cfg)
    doc = table.to_json()
    filled = {r: table.filled_in_row(r) for r in table.rows}
    if cfg.output == "json":
        out.write(json.dumps(doc) + "\n")
    elif cfg.output == "csv":
        out.write(table.to_wide_csv())
    else:
        out.write(_records_text(
            [{"object": r, "filled": n, "of": len(table.cols)} for r, n in filled.items()], "table"
        ))
    return 0


def cmd_block(cfg, args, out):
    m = _block(cfg, args)
    payload = {"rows": list(m.rows), "cols": list(m.cols), "area": int(m.values.size),
               "values": m.values.tolist()}
    _emit(out, cfg, payload, matrix=(m.rows, m.cols, m.values))
    return 0


def cmd_decompose(cfg, args, out):
    _, d = _decomposition(cfg, args)
    if cfg.output == "json":
        out.write(d.to_json() + "\n")
    else:
        _emit(out, cfg, None, records=[
            {"concept": k + 1, "lambda": float(lam), "degenerate": d.degenerate[k]}
            for k, lam in enumerate(d.lambdas)
        ])
    return 0


def cmd_concepts(cfg, args, out):
    m, d = _decomposition(cfg, args)
    spectrum = concept_spectrum(d, m) if m is not None else None
    labels = _split(args.labels) or []
    records = []
    for k in range(d.rank):
        lam = spectrum[k].weight if spectrum else float(d.lambdas[k])
        rec = {"concept": k + 1, "lambda": lam, "degenerate": d.degenerate[k]}
        if k < len(labels):
            rec["label"] = labels[k]
        rec["subjects"] = {s: float(d.u[j, k]) for j, s in enumerate(d.col_ids)}
        rec["objects"] = {o: float(d.v[i, k]) for i, o in enumerate(d.row_ids)}
        records.append(rec)
    if cfg.output == "json":
        out.write(json.dumps({"concepts": records}) + "\n")
    else:
        flat = []
        for rec in records:
            row = {key: rec[key] for key in ("concept", "lambda", "degenerate")}
            row["label"] = rec.get("label", "")
            row.update({f"u[{s}]": x for s, x in rec["subjects"].items()})
            row.update({f"v[{o}]": x for o, x in rec["objects"].items()})
            flat.append(row)
        out.write(_records_text(flat, cfg.output))
    return 0


def cmd_qualify(cfg, args, out):
    _, d = _decomposition(cfg, args)
    wanted = [args.concept] if args.concept else range(1, d.rank + 1)
    mats = {}
    for c in concepts_of(d):
        if c.index in wanted:
            mats[f"F{c.index}"] = qualified_matrix(c).values
    if not args.concept:
        mats["F"] = similarity_preserving_matrix(d)
    if cfg.output == "json":
        out.write(json.dumps({"rows": list(d.row_ids), "cols": list(d.col_ids),
                              "matrices": {k: v.tolist() for k, v in mats.items()}}) + "\n")
    else:
        for name, values in mats.items():
            out.write(f"# {name}\n")
            out.write(_matrix_text(d.row_ids, d.col_ids, values, cfg.output))
    return 0


def cmd_edge(cfg, args, out):
    _, d = _decomposition(cfg, args)
    e = decompose_edge(d, args.subject, args.object)
    _emit(out, cfg, e.to_dict(),
          records=[{"concept": k, "r": r} for k, r in e.components] + [{"concept": "total",
                                                                        "r": e.total}])
    return 0


def cmd_recommend(cfg, args, out):
    _, d = _decomposition(cfg, args)
    rec = rank_trustees(d, args.subject, args.concept)
    _emit(out, cfg, rec.to_dict(), records=[{"object": o, "rating": r} for o, r in rec.ranking])
    return 0


def cmd_refine(cfg, args, out):
    _, d = _decomposition(cfg, args)
    res = refine_query(d, args.subject, _split(args.outlets) or [], args.concept)
    _emit(out, cfg, res.to_dict(), records=[{"object": o, "rating": r} for o, r in res.ratings])
    return 0


def cmd_check(cfg, args, out):
    m, d = _decomposition(cfg, args)
    if m is None:
        raise TrustSpectraError("check needs the trust matrix; pass --input, not --decomposition")
    rng = np.random.default_rng(cfg.seed)
    n = m.shape[1]
    pairs = []
    if m.cols == fx.BLOCK_SUBJECTS:
        pairs.append(tuple(Ray(x) for x in fx.COUNTEREXAMPLE_PAIR))

    def sample(draw):
        while True:
            try:
                p = Ray(draw())
                induced_map(m, p)
                return p
            except TrustSpectraError:
                continue

    for _ in range(args.pairs):
        pairs.append((sample(lambda: rng.standard_normal(n)), sample(lambda: rng.standard_normal(n))))
    raw = morphism_violation_report(m, pairs)
    span_pairs = [
        (Ray(d.u @ rng.standard_normal(d.rank)), Ray(d.u @ rng.standard_normal(d.rank)))
        for _ in range(args.pairs)
    ] if d.rank else []
    preserved = morphism_violation_report(similarity_preserving_operator(d), span_pairs)
    records = [dict(map="M", **vars(r)) for r in raw] + [dict(map="F", **vars(r)) for r in preserved]
    summary = {"M_violations": sum(r.violated for r in raw), "M_pairs": len(raw),
               "F_violations": sum(r.violated for r in preserved), "F_pairs": len(preserved)}
    if cfg.output == "json":
        for rec in records:
            out.write(json.dumps(rec) + "\n")
        out.write(json.dumps({"summary": summary}) + "\n")
    else:
        out.write(_records_text(records, cfg.output))
        if cfg.output == "table":
            out.write(" ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return 0


def cmd_selftest(cfg, args, out):
    skip = ("desk_scale",) if args.quick else ()
    results = acceptance.run_all(skip=skip)
    for r in results:
        out.write(r.line() + "\n")
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} criteria passed\n")
    return 0 if passed == len(results) else EXIT_SELFTEST


COMMANDS = {
    "ingest": (cmd_ingest, "parse a score table and echo it"),
    "block": (cmd_block, "extract a complete block (greedy when --rows/--cols are omitted)"),
    "decompose": (cmd_decompose, "singular value decomposition of a block"),
    "concepts": (cmd_concepts, "list the concept spectrum"),
    "qualify": (cmd_qualify, "qualified trust matrices and the similarity-preserving matrix"),
    "edge": (cmd_edge, "split one rating into per-concept contributions"),
    "recommend": (cmd_recommend, "rank trustees for a subject under one concept"),
    "refine": (cmd_refine, "choose among outlets for a subject under one concept"),
    "check": (cmd_check, "similarity-morphism violation report"),
    "selftest": (cmd_selftest, "run the acceptance criteria on the bundled fixture"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="score table (default: bundled toy market)")
    common.add_argument("--format", choices=FORMATS, help="input format (default: inferred)")
    common.add_argument("--rows", help="comma separated object ids")
    common.add_argument("--cols", help="comma separated subject ids")
    common.add_argument("--tol", type=float, default=0.0, help="rank cut threshold")
    common.add_argument("--method", choices=METHODS, default="golub-kahan")
    common.add_argument("--rank", type=int, help="keep at most this many concepts")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--output", choices=OUTPUTS, default="json")
    common.add_argument("--decomposition", help="load a saved decomposition JSON instead")

    parser = argparse.ArgumentParser(prog="trustspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=text)
               for name, (_, text) in COMMANDS.items()}
    parsers["concepts"].add_argument("--labels", help="comma separated display names")
    parsers["qualify"].add_argument("--concept", type=int)
    parsers["edge"].add_argument("--subject", required=True)
    parsers["edge"].add_argument("--object", required=True)
    for name in ("recommend", "refine"):
        parsers[name].add_argument("--subject", required=True)
        parsers[name].add_argument("--concept", type=int, required=True)
    parsers["refine"].add_argument("--outlets", required=True, help="comma separated object ids")
    parsers["check"].add_argument("--pairs", type=int, default=100, help="random pairs per map")
    parsers["selftest"].add_argument("--quick", action="store_true",
                                     help="skip the desk-scale timing criterion")
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.input, args.format, args.tol, args.method, args.rank, args.seed,
                        args.output)
        return COMMANDS[args.command][0](cfg, args, out)
    except ConvergenceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONVERGENCE
    except (TrustSpectraError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
