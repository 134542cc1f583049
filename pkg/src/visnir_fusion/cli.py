"""Command-line entry point.

    visnir-fuse fuse --vis a_vis.png --nir a_nir.png --out fused.png
    visnir-fuse batch --input corpus/ --out fused/ --report report.jsonl
    visnir-fuse metrics --vis a_vis.png --nir a_nir.png --fused fused.png
    visnir-fuse synth --out corpus/

Exit codes: 0 success, 2 bad arguments, 3 I/O failure, 4 dimension mismatch.
"""
import argparse
import json
import logging
from pathlib import Path
import sys

from .batch import run_batch
from .config import ConfigError, FusionConfig, load_config, with_overrides
from .core import DimensionMismatch
from .fusion import run_fusion
from .image_io import ImageIOError, load_image, load_pair, save_image
from .metrics import metrics_report
from . import synthetic

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_IO = 3
EXIT_DIMENSION = 4

# flag dest -> config key
PARAM_FLAGS = {
    "alpha": float, "wgif_radius": int, "wgif_eps": float, "gif_radius": int,
    "gif_eps": float, "xdog_sigma": float, "xdog_k": float, "xdog_p": float,
}


def _add_params(p):
    p.add_argument("--config", help="key = value config file; flags override it")
    for name, typ in PARAM_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)
    p.add_argument("--bit-depth", dest="bit_depth", type=int, choices=(8, 16))
    p.add_argument("--report", help="JSON-lines report path")


def build_parser():
    parser = argparse.ArgumentParser(prog="visnir-fuse",
                                     description="Visible/NIR complementarity fusion")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuse", help="fuse a single pair")
    p.add_argument("--vis", required=True)
    p.add_argument("--nir", required=True)
    p.add_argument("--out", required=True, help="output PNG")
    _add_params(p)

    p = sub.add_parser("batch", help="fuse every <id>_vis/<id>_nir pair in a corpus")
    p.add_argument("--input", action="append", help="directory or glob of *_vis images")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int)
    _add_params(p)

    p = sub.add_parser("metrics", help="score an existing fused image")
    p.add_argument("--vis", required=True)
    p.add_argument("--nir", required=True)
    p.add_argument("--fused", required=True)
    p.add_argument("--report")

    p = sub.add_parser("synth", help="write the built-in synthetic pairs")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--size", type=int, default=96)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bit-depth", dest="bit_depth", type=int, choices=(8, 16), default=8)
    return parser


def resolve_config(args) -> FusionConfig:
    config = load_config(args.config) if getattr(args, "config", None) else FusionConfig()
    overrides = {name: getattr(args, name, None) for name in PARAM_FLAGS}
    overrides["bit_depth"] = getattr(args, "bit_depth", None)
    overrides["report"] = getattr(args, "report", None)
    if args.command == "batch":
        overrides["input"] = args.input
        overrides["output_dir"] = args.out
        overrides["jobs"] = args.jobs
    return with_overrides(config, overrides)


def _write_lines(path, records):
    with open(path, "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")


def cmd_fuse(args) -> int:
    config = resolve_config(args)
    pair = load_pair(args.vis, args.nir)
    result = run_fusion(pair, config.filter_params, config.xdog_params, config.arctan_params)
    save_image(result.image, args.out, config.bit_depth)
    record = {"pair": Path(args.vis).stem, **metrics_report(pair, result.image).to_dict(),
              "timings": {k: round(v, 6) for k, v in result.timings.items()}}
    if config.report:
        _write_lines(config.report, [record])
    print(json.dumps(record))
    return EXIT_OK


def cmd_batch(args) -> int:
    config = resolve_config(args)
    if not config.inputs:
        raise ConfigError("batch needs at least one --input (or 'input' in the config)")
    summary = run_batch(config)
    print(json.dumps(summary.aggregate or {"aggregate": True, "n_pairs": 0}))
    if summary.records and summary.n_ok == 0:
        kinds = {r.get("error_kind") for r in summary.records}
        return EXIT_DIMENSION if kinds == {"dimension"} else EXIT_IO
    return EXIT_OK


def cmd_metrics(args) -> int:
    pair = load_pair(args.vis, args.nir)
    fused = load_image(args.fused)
    if fused.ndim == 2:
        raise ConfigError("fused image must be RGB")
    record = {"pair": Path(args.vis).stem, **metrics_report(pair, fused).to_dict()}
    if args.report:
        _write_lines(args.report, [record])
    print(json.dumps(record))
    return EXIT_OK


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, pair in synthetic.corpus(args.count, args.size, args.seed).items():
        save_image(pair.visible, out / f"{name}_vis.png", args.bit_depth)
        save_image(pair.nir, out / f"{name}_nir.png", args.bit_depth)
        print(out / f"{name}_vis.png")
    return EXIT_OK


COMMANDS = {"fuse": cmd_fuse, "batch": cmd_batch, "metrics": cmd_metrics, "synth": cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except DimensionMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except (ImageIOError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
