"""Command-line entry point: ``mirrorbench <subcommand> ...``.

Exit codes: 0 success, 1 usage, 2 I/O, 3 model failure before iteration 1.
Errors are also reported as one JSON line on stderr.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__, harness, models, synth
from .errors import MirrorError
from .graph import read_edge_list, write_edge_list
from .metrics import METRICS, compare

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_MODEL = 0, 1, 2, 3

CLI_MODELS = ("er", "chung-lu", "sbm", "kron", "bter")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def _atomic_write(path, write):
    """Write via a temp file so an interrupted run leaves nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(path):
    try:
        return read_edge_list(path)
    except ValueError as exc:
        raise OSError(f"cannot parse edge list {path}: {exc}") from None


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_synth(args) -> int:
    if args.kind == "clique-ring":
        g = synth.make_clique_ring(args.cliques, args.size)
    elif args.kind == "tree":
        g = synth.make_random_tree(args.nodes, args.seed)
    elif args.kind == "er":
        if args.edges is None:
            raise UsageError("synth er needs --edges")
        g = models.generate_er(models.ErParams(args.nodes, args.edges), args.seed)
    else:
        g = synth.make_power_law(args.nodes, args.attach, args.seed)
    write_edge_list(g, args.output)
    return EXIT_OK


def cmd_fit(args) -> int:
    g = _load(args.input)
    params = models.fit(args.model, g)
    Path(args.output).write_text(models.params_to_json(params, indent=1) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_generate(args) -> int:
    params = models.params_from_json(Path(args.params).read_text(encoding="utf-8"))
    g = models.generate(params, args.seed)
    write_edge_list(g, args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    g1, g2 = _load(args.g1), _load(args.g2)
    for m in args.metric or ["degree-js"]:
        print(f"{m}={compare(g1, g2, m)!r}")
    return EXIT_OK


CHAIN_KEYS = {
    "model": str,
    "source": str,
    "dataset": str,
    "length": int,
    "trials": int,
    "seed": int,
    "metrics": str,
    "jobs": int,
    "out_raw": str,
    "out_agg": str,
    "out_graphlets": str,
    "dump_graphs": str,
    "dump_params": str,
    "manifest": str,
}


def read_config_file(path) -> dict:
    """``key=value`` lines; keys are long flag names with ``-`` or ``_``."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            if "=" not in s:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (x.strip() for x in s.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in CHAIN_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = CHAIN_KEYS[key](val)
    return out


def config_lines(settings: dict) -> list[str]:
    return [f"{k.replace('_', '-')}={settings[k]}" for k in CHAIN_KEYS if settings.get(k) is not None]


def cmd_chain(args) -> int:
    settings = {"length": 10, "trials": 50, "seed": 0, "metrics": ",".join(METRICS),
                "jobs": int(os.environ.get("MIRRORBENCH_JOBS", "1"))}
    if args.config:
        settings.update(read_config_file(args.config))
    for key in CHAIN_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    for key in ("model", "source", "out_raw", "out_agg"):
        if not settings.get(key):
            raise UsageError(f"chain needs --{key.replace('_', '-')}")
    if settings["model"] not in CLI_MODELS and settings["model"] not in models.MODEL_ALIASES:
        raise UsageError(f"unknown model {settings['model']!r}")
    metrics = tuple(m.strip() for m in settings["metrics"].split(",") if m.strip())
    settings.setdefault("dataset", Path(settings["source"]).stem)

    source = _load(settings["source"])
    digest = _digest(settings["source"])
    try:
        config = harness.ChainConfig(
            model=settings["model"], length=settings["length"], trials=settings["trials"],
            master_seed=settings["seed"], metrics=metrics, jobs=settings["jobs"],
            dataset=settings["dataset"],
            record_graphlets=bool(settings.get("out_graphlets")),
            keep_graphs=bool(settings.get("dump_graphs")),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    start = time.perf_counter()
    records = harness.run_trials(config, source)
    elapsed = time.perf_counter() - start
    rows = harness.aggregate(records)

    _atomic_write(settings["out_raw"], lambda fh: harness.write_raw_csv(fh, config, records))
    _atomic_write(settings["out_agg"], lambda fh: harness.write_agg_csv(
        fh, config.model, config.dataset, rows, config.metrics))
    if settings.get("out_graphlets"):
        _atomic_write(settings["out_graphlets"],
                      lambda fh: harness.write_graphlets_csv(fh, config, records, source))
    if settings.get("dump_params"):
        _atomic_write(settings["dump_params"],
                      lambda fh: harness.write_params_jsonl(fh, config, records))
    if settings.get("dump_graphs"):
        out = Path(settings["dump_graphs"])
        out.mkdir(parents=True, exist_ok=True)
        for rec in records:
            for it in rec.iterations:
                with open(out / f"trial{rec.trial:03d}_iter{it.iteration:02d}.edges", "w",
                          encoding="utf-8") as fh:
                    fh.write(f"# nodes: {it.summary['n']}\n")
                    fh.writelines(f"{u} {v}\n" for u, v in it.edges)

    manifest = {
        "tool": "mirrorbench",
        "version": __version__,
        "config": {k: settings[k] for k in CHAIN_KEYS if settings.get(k) is not None},
        "config_lines": config_lines(settings),
        "source_sha256": digest,
        "wall_clock_seconds": elapsed,
        "model_seconds": {config.model: elapsed},
        "ci_method": harness.CI_METHOD,
        "rgfd_norms": [m for m in config.metrics if m.startswith("rgfd")],
        "truncated_trials": sum(r.truncated for r in records),
    }
    manifest_path = settings.get("manifest") or f"{settings['out_raw']}.manifest.json"
    _atomic_write(manifest_path, lambda fh: json.dump(manifest, fh, indent=1, sort_keys=True))

    if all(r.truncated_at == 1 for r in records):
        reasons = sorted({r.reason for r in records})
        return _fail(EXIT_MODEL, "model_failure", f"no trial got past iteration 1 ({', '.join(reasons)})")
    return EXIT_OK


def cmd_stats(args) -> int:
    with open(args.raw, encoding="utf-8", newline="") as fh:
        try:
            grouped, order = harness.aggregate_raw(harness.read_raw_csv(fh))
        except (ValueError, KeyError) as exc:
            raise UsageError(f"bad raw CSV: {exc}") from None

    def write(fh):
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(harness.AGG_COLUMNS)
        for (model, dataset), rows in grouped.items():
            w.writerows(harness.agg_csv_rows(model, dataset, rows, order))

    _atomic_write(args.output, write)
    return EXIT_OK


def cmd_pca(args) -> int:
    vectors = {}
    with open(args.graphlets, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        try:
            for row in reader:
                key = (row["model"], row["dataset"])
                vec = [int(row[name]) for name in harness.GRAPHLET_NAMES]
                vectors.setdefault(key, {}).setdefault(int(row["iteration"]), []).append(vec)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad graphlet CSV: {exc}") from None
    if not vectors:
        raise UsageError("graphlet CSV has no rows")

    def write(fh):
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(("row", "model", "dataset", "iteration", "x", "y"))
        for (model, dataset), by_it in vectors.items():
            rep = harness.pca_report_from_vectors(by_it)
            for it, (x, y) in sorted(rep.points.items()):
                w.writerow(("point", model, dataset, it, repr(x), repr(y)))
            for name, wx, wy in zip(harness.GRAPHLET_NAMES, rep.weights[0], rep.weights[1]):
                w.writerow(("weight", model, dataset, name, repr(float(wx)), repr(float(wy))))

    _atomic_write(args.output, write)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mirrorbench", description="Iterated fit-and-generate stress tests for graph models")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="write a synthetic source graph")
    s.add_argument("kind", choices=("clique-ring", "tree", "er", "power-law"))
    s.add_argument("--cliques", type=int, default=500)
    s.add_argument("--size", type=int, default=4)
    s.add_argument("--nodes", type=int, default=3000)
    s.add_argument("--edges", type=int)
    s.add_argument("--attach", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("fit", help="fit a model to an edge list")
    s.add_argument("--model", required=True, choices=CLI_MODELS)
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("generate", help="sample a graph from fitted parameters")
    s.add_argument("--params", required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("compare", help="score two graphs")
    s.add_argument("g1")
    s.add_argument("g2")
    s.add_argument("--metric", action="append", choices=tuple(METRICS))
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("chain", help="run fit-and-generate chains")
    s.add_argument("--config", help="key=value file mirroring these flags; flags win")
    s.add_argument("--model")
    s.add_argument("--source")
    s.add_argument("--dataset")
    s.add_argument("--length", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--metrics", help="comma-separated metric ids")
    s.add_argument("--jobs", type=int, help="worker processes (default $MIRRORBENCH_JOBS or 1)")
    s.add_argument("--out-raw", dest="out_raw")
    s.add_argument("--out-agg", dest="out_agg")
    s.add_argument("--out-graphlets", dest="out_graphlets")
    s.add_argument("--dump-graphs", dest="dump_graphs")
    s.add_argument("--dump-params", dest="dump_params")
    s.add_argument("--manifest")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("stats", help="re-aggregate a raw results CSV")
    s.add_argument("raw")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("pca", help="2-D PCA of graphlet vectors")
    s.add_argument("graphlets")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_pca)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except MirrorError as exc:
        return _fail(EXIT_MODEL, exc.code, str(exc))
    except (OSError, UnicodeDecodeError) as exc:
        return _fail(EXIT_IO, "io", str(exc))
    except ValueError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
