"""Corpus runner: fuse every pair, save PNGs, stream a JSON-lines report.

Pairs are discovered by name: ``<id>_vis.<ext>`` next to ``<id>_nir.<ext>``.
An input entry may be a directory or a glob over the visible files.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import glob
import json
import logging
import math
from pathlib import Path
import time

from .config import FusionConfig
from .core import DimensionMismatch
from .fusion import run_fusion
from .image_io import READ_SUFFIXES, load_pair, save_image
from .metrics import metrics_report

log = logging.getLogger(__name__)

VIS_TAG = "_vis"
NIR_TAG = "_nir"
METRIC_FIELDS = ("cd", "psnr_vs_visible", "ssim_vs_visible", "ssim_vs_nir")


@dataclass(frozen=True)
class PairSpec:
    pair_id: str
    vis: Path
    nir: Path


@dataclass
class BatchSummary:
    records: list = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)

    @property
    def n_ok(self) -> int:
        return sum(r["status"] == "ok" for r in self.records)

    @property
    def n_failed(self) -> int:
        return len(self.records) - self.n_ok


def _nir_partner(vis: Path):
    stem = vis.stem[: -len(VIS_TAG)]
    for suffix in (vis.suffix, *sorted(READ_SUFFIXES)):
        cand = vis.with_name(f"{stem}{NIR_TAG}{suffix}")
        if cand.is_file():
            return cand
    return vis.with_name(f"{stem}{NIR_TAG}{vis.suffix}")


def discover_pairs(inputs) -> list:
    vis_files = set()
    for entry in inputs:
        p = Path(entry)
        if p.is_dir():
            candidates = p.iterdir()
        else:
            candidates = (Path(g) for g in glob.glob(str(entry)))
        for c in candidates:
            if c.suffix.lower() in READ_SUFFIXES and c.stem.endswith(VIS_TAG):
                vis_files.add(c)
    pairs = []
    for vis in sorted(vis_files):
        pairs.append(PairSpec(vis.stem[: -len(VIS_TAG)], vis, _nir_partner(vis)))
    return pairs


def _json_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def process_pair(spec: PairSpec, config: FusionConfig, out_dir: Path) -> dict:
    record = {"pair": spec.pair_id}
    try:
        t0 = time.perf_counter()
        pair = load_pair(spec.vis, spec.nir)
        t_load = time.perf_counter() - t0
        result = run_fusion(pair, config.filter_params, config.xdog_params,
                            config.arctan_params)
        out_path = out_dir / f"{spec.pair_id}_fused.png"
        save_image(result.image, out_path, config.bit_depth)
        t1 = time.perf_counter()
        report = metrics_report(pair, result.image)
        t_metrics = time.perf_counter() - t1
    except DimensionMismatch as e:
        record.update(status="error", error_kind="dimension", error=str(e))
        return record
    except (OSError, ValueError) as e:
        record.update(status="error", error_kind="io", error=str(e))
        return record
    record.update(report.to_dict())
    record["status"] = "ok"
    record["output"] = str(out_path)
    timings = dict(result.timings)
    timings["load"] = t_load
    timings["metrics"] = t_metrics
    record["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return record


def aggregate(records) -> dict:
    ok = [r for r in records if r["status"] == "ok"]
    agg = {"aggregate": True, "n_pairs": len(records), "n_ok": len(ok),
           "n_failed": len(records) - len(ok)}
    for name in METRIC_FIELDS:
        vals = [math.inf if r[name] == "inf" else r[name] for r in ok]
        agg[f"mean_{name}"] = _json_value(sum(vals) / len(vals)) if vals else None
    return agg


def run_batch(config: FusionConfig, pairs=None) -> BatchSummary:
    """Fuse every pair in the corpus; failures are recorded and skipped."""
    if pairs is None:
        pairs = discover_pairs(config.inputs)
    out_dir = Path(config.output_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = Path(config.report) if config.report else out_dir / "report.jsonl"

    summary = BatchSummary()
    with open(report_path, "w") as report, \
            ThreadPoolExecutor(max_workers=config.jobs) as pool:
        results = pool.map(lambda s: process_pair(s, config, out_dir), pairs)
        for record in results:
            if record["status"] != "ok":
                log.warning("pair %s failed: %s", record["pair"], record["error"])
            report.write(json.dumps(record) + "\n")
            report.flush()
            summary.records.append(record)
        if pairs:
            summary.aggregate = aggregate(summary.records)
            report.write(json.dumps(summary.aggregate) + "\n")
    return summary
