"""Experiment runners behind the command line.

Each subcommand resolves its configuration (file values, then flag
overrides, then defaults), validates it against the published schema,
writes its primary outputs atomically and returns an :class:`ExperimentRecord`.
Primary outputs depend only on the resolved config; wall time and the
version tag live in the record.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .io import atomic_write, config_hash, csv_with_header, jsonl, output_dir, validate_config

DEFAULTS: dict[str, dict] = {
    "char": {"words": []},
    "equal": {"words": [], "rank": 2, "trials": 20},
    "search": {"max_len": 6, "include_powers": False, "width": 1, "annotate": False, "checks": []},
    "selfint": {"words": [], "x": 3, "y": 3},
    "lengths": {"grid": [[3, 3]], "probes": None},
    "pinch": {"schedule": "reference", "probes": None},
    "hempel": {"grid": [[3, 3], [3, 4], [4, 4], [3, 10]], "max_len": 8},
    "gr-check": {"max_len": 10, "width": 1},
    "acceptance": {"suite": "all"},
}

OUTPUT_NAMES = {
    "search": ("report.jsonl", "summary.csv"),
    "lengths": ("lengths.csv", "lengths.jsonl"),
    "pinch": ("pinch.csv", "pinch.jsonl"),
    "hempel": ("hempel.json",),
    "gr-check": ("gr.json",),
    "acceptance": ("acceptance.json",),
}


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    seed: int = 0

    @classmethod
    def resolve(cls, subcommand: str, file_cfg: dict | None = None, overrides: dict | None = None) -> "RunConfig":
        if subcommand not in DEFAULTS:
            raise ValueError(f"unknown subcommand {subcommand!r}")
        merged = dict(file_cfg or {})
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        validate_config(merged)
        seed = merged.pop("seed", 0)
        params = {**DEFAULTS[subcommand], **merged}
        if params.get("probes") is None and "probes" in DEFAULTS[subcommand]:
            from .geometry import DEFAULT_PROBES

            params["probes"] = list(DEFAULT_PROBES)
        return cls(subcommand, params, seed)

    def snapshot(self) -> dict:
        """Config with resolved defaults; the output directory is excluded."""
        body = {k: v for k, v in self.params.items() if k != "output_dir"}
        return {"subcommand": self.subcommand, "seed": self.seed, **body}

    @property
    def hash(self) -> str:
        return config_hash(self.snapshot())

    def header(self) -> dict:
        return {"config_hash": self.hash, "seed": self.seed, "config": self.snapshot()}

    def out_dir(self) -> Path:
        return output_dir(self.params)


@dataclass
class ExperimentRecord:
    config: dict
    config_hash: str
    outputs: dict = field(default_factory=dict)
    result: object = None
    exit_code: int = 0
    wall_time_s: float = 0.0
    version: str = __version__
    stdout: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "config_hash": self.config_hash,
            "outputs": self.outputs,
            "result": self.result,
            "exit_code": self.exit_code,
            "wall_time_s": self.wall_time_s,
            "version": self.version,
        }


def _dump(header: dict, payload: dict) -> str:
    return json.dumps({**header, **payload}, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# individual runners: (cfg, record) -> None


def _words_arg(cfg: RunConfig, n: int) -> list[str]:
    ws = cfg.params["words"]
    if len(ws) != n:
        raise ValueError(f"{cfg.subcommand} expects {n} word(s), got {len(ws)}")
    return ws


def _run_char(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .traces import fricke_char
    from .words import parse_word

    (text,) = _words_arg(cfg, 1)
    poly = str(fricke_char(parse_word(text)))
    rec.result = {"word": text, "character": poly}
    rec.stdout.append(poly)


def _run_equal(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .traces import chars_equal_exact, chars_equal_probabilistic
    from .words import parse_word

    u_text, v_text = _words_arg(cfg, 2)
    rank = cfg.params["rank"]
    u, v = parse_word(u_text, rank), parse_word(v_text, rank)
    if rank == 2:
        eq = chars_equal_exact(u, v)
        line = "EQUAL (exact)" if eq else "DISTINCT (exact)"
        rec.result = {"equal": eq, "method": "exact"}
    else:
        verdict = chars_equal_probabilistic(u, v, rank, trials=cfg.params["trials"], seed=cfg.seed)
        if verdict:
            line = f"PROBABLY EQUAL ({verdict.trials} trials, seed {cfg.seed})"
            rec.result = {"equal": True, "method": "probabilistic", "trials": verdict.trials}
        else:
            line = f"DISTINCT (witness at trial {verdict.trial}: {verdict.trace_u} != {verdict.trace_v})"
            rec.result = {
                "equal": False,
                "method": "probabilistic",
                "trial": verdict.trial,
                "witness": verdict.witness.to_json(),
            }
    rec.stdout.append(line)


def _run_search(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .explorer import SearchConfig, gr_filter_check, mcshane_character_check, search_tuples

    p = cfg.params
    reports = search_tuples(
        SearchConfig(
            max_len=p["max_len"],
            include_powers=p["include_powers"],
            width=p["width"],
            seed=cfg.seed,
            annotate_intersections=p["annotate"],
        )
    )
    verdicts = []
    for name in p["checks"]:
        verdicts.append((gr_filter_check if name == "gr" else mcshane_character_check)(reports))
    header = cfg.header()
    out_jsonl, out_csv = (p.get("out") or OUTPUT_NAMES["search"][0]), (p.get("summary") or OUTPUT_NAMES["search"][1])
    d = cfg.out_dir()
    atomic_write(d / out_jsonl, jsonl(header, (r.to_json() for r in reports)))
    hist: dict[tuple[int, int], int] = {}
    for r in reports:
        key = (len(r.members[0]), len(r.members))
        hist[key] = hist.get(key, 0) + 1
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["length", "bucket_size", "count"])
    for (length, size), count in sorted(hist.items()):
        w.writerow([length, size, count])
    atomic_write(d / out_csv, csv_with_header(header, buf.getvalue()))
    rec.outputs = {"report": str(d / out_jsonl), "summary": str(d / out_csv)}
    rec.result = {"tuples": len(reports), "verdicts": [v.to_json() for v in verdicts]}
    rec.stdout.append(f"{len(reports)} multi-member buckets up to length {p['max_len']}")
    for v in verdicts:
        rec.stdout.append(f"{v.name}: {'ok' if v.ok else 'VIOLATIONS'} ({v.checked} checked, {len(v.violations)} violations)")
        if not v.ok:
            rec.exit_code = 1


def _run_selfint(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .intersections import self_intersection, structure
    from .words import parse_class

    (text,) = _words_arg(cfg, 1)
    p = cfg.params
    s = structure(Fraction(p["x"]), Fraction(p["y"]))
    r = self_intersection(parse_class(text), s, p.get("bound"))
    rec.result = {"word": text, "count": r.count, "B": r.bound, "stable": r.stable}
    rec.stdout.append(json.dumps(rec.result) if p.get("json") else f"{r.count} {r.bound} {'stable' if r.stable else 'unstable'}")


def _write_lengths(cfg: RunConfig, rec: ExperimentRecord, report, names) -> None:
    header = cfg.header()
    d = cfg.out_dir()
    atomic_write(d / names[0], csv_with_header(header, report.to_csv()))
    atomic_write(d / names[1], jsonl(header, (json.loads(line) for line in report.to_jsonl().splitlines())))
    rec.outputs = {"csv": str(d / names[0]), "jsonl": str(d / names[1])}


def _run_lengths(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .geometry import lengths_table, punctured_torus_structure
    from .words import parse_class

    p = cfg.params
    structures = [punctured_torus_structure(Fraction(x), Fraction(y)) for x, y in p["grid"]]
    report = lengths_table(structures, [parse_class(t) for t in p["probes"]])
    _write_lengths(cfg, rec, report, OUTPUT_NAMES["lengths"])
    rec.result = {"rows": len(report.rows), "min": report.probe_min}
    rec.stdout.append(f"{len(report.rows)} rows written to {rec.outputs['csv']}")


def _schedule(spec, probes):
    from .geometry import PinchingSchedule, reference_schedule
    from .words import parse_class

    if spec == "reference":
        return reference_schedule(probes=probes)
    if "xs" in spec:
        return PinchingSchedule(
            tuple(Fraction(v) for v in spec["xs"]),
            tuple(Fraction(v) for v in spec["ys"]),
            tuple(parse_class(t) for t in probes),
        )
    return reference_schedule(spec.get("steps", 10), spec.get("slack", 1.01), probes)


def _run_pinch(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .geometry import pinching_experiment

    p = cfg.params
    report = pinching_experiment(_schedule(p["schedule"], p["probes"]))
    _write_lengths(cfg, rec, report, OUTPUT_NAMES["pinch"])
    final = report.pinched_lengths[-1]
    rec.result = {
        "pinched": str(report.pinched),
        "pinched_lengths": report.pinched_lengths,
        "strictly_decreasing": report.pinched_strictly_decreasing,
        "probe_min": report.probe_min,
    }
    rec.stdout.append(f"l({report.pinched}) at final step: {final:.6g}; strictly decreasing: {report.pinched_strictly_decreasing}")


def _run_hempel(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .geometry import HempelScanConfig, hempel_scan

    p = cfg.params
    grid = tuple((Fraction(x), Fraction(y)) for x, y in p["grid"])
    r = hempel_scan(HempelScanConfig(grid, p["max_len"]))
    payload = {
        "observed_min": r.observed_min,
        "curve": str(r.curve),
        "structure": [float(v) for v in r.structure.floats],
        "curves_scanned": r.curves_scanned,
    }
    d = cfg.out_dir() / OUTPUT_NAMES["hempel"][0]
    atomic_write(d, _dump(cfg.header(), payload))
    rec.outputs = {"json": str(d)}
    rec.result = payload
    rec.stdout.append(f"observed minimum {r.observed_min:.9f} at {r.curve}")


def _run_gr_check(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .explorer import SearchConfig, gr_filter_check, search_tuples

    p = cfg.params
    v = gr_filter_check(search_tuples(SearchConfig(max_len=p["max_len"], width=p["width"])))
    d = cfg.out_dir() / OUTPUT_NAMES["gr-check"][0]
    atomic_write(d, _dump(cfg.header(), {"verdict": v.to_json()}))
    rec.outputs = {"json": str(d)}
    rec.result = v.to_json()
    rec.exit_code = 0 if v.ok else 1
    rec.stdout.append(f"gr-filter: {'ok' if v.ok else 'VIOLATIONS'} ({v.checked} checked, {len(v.violations)} violations)")


def _run_acceptance(cfg: RunConfig, rec: ExperimentRecord) -> None:
    from .acceptance import SUITES, run_suite

    suite = cfg.params["suite"]
    names = list(SUITES) if suite == "all" else [suite]
    results = [run_suite(n) for n in names]
    verdicts = []
    for r in results:
        rec.stdout.append(r.line())
        j = r.to_json()
        j.pop("elapsed_s")
        verdicts.append(j)
    d = cfg.out_dir() / OUTPUT_NAMES["acceptance"][0]
    atomic_write(d, _dump(cfg.header(), {"suites": verdicts, "ok": all(r.ok for r in results)}))
    rec.outputs = {"json": str(d)}
    rec.result = {"ok": all(r.ok for r in results), "timings": {r.name: r.elapsed for r in results}}
    rec.exit_code = 0 if rec.result["ok"] else 1


RUNNERS = {
    "char": _run_char,
    "equal": _run_equal,
    "search": _run_search,
    "selfint": _run_selfint,
    "lengths": _run_lengths,
    "pinch": _run_pinch,
    "hempel": _run_hempel,
    "gr-check": _run_gr_check,
    "acceptance": _run_acceptance,
}


def run(subcommand: str, config: RunConfig | dict | None = None, write_record: bool = True) -> ExperimentRecord:
    cfg = config if isinstance(config, RunConfig) else RunConfig.resolve(subcommand, config)
    rec = ExperimentRecord(cfg.snapshot(), cfg.hash)
    t0 = time.perf_counter()
    RUNNERS[subcommand](cfg, rec)
    rec.wall_time_s = time.perf_counter() - t0
    if write_record and rec.outputs:
        path = cfg.out_dir() / f"{subcommand}.record.json"
        atomic_write(path, json.dumps(rec.to_json(), indent=2, sort_keys=True, default=str) + "\n")
    return rec
