"""
HySim Inpainting Command Line
`run` fills one image (or a generated fixture) and writes the result plus a
YAML report; `bench` sweeps every fixture against every configured measure.
"""

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .config import (
    FIXTURE_NAMES,
    BenchConfig,
    DiffusionConfig,
    EngineConfig,
    MeasureConfig,
    load_bench_config,
    load_engine_defaults,
)
from .core import InpaintMask, RasterImage, check_same_shape
from .errors import InpaintError
from .flows import inpaint, run_diffusion
from .tools import generate_fixture, psnr, read_image, read_mask, region_bleed, render_regions, write_image

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class RunReport(BaseModel):
    """Machine-readable record of one run; `config` is enough to repeat it."""

    config: Dict[str, Any]
    status: str = "completed"
    iterations: int = 0
    wall_time: float = 0.0
    records: List[Dict[str, Any]] = Field(default_factory=list)
    metrics: Dict[str, Optional[float]] = Field(default_factory=dict)
    outputs: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None


def configure_logging(level: Optional[str] = None) -> None:
    level_name = (level or os.getenv("HYSIM_LOG_LEVEL", "INFO")).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config-dir", type=Path, default=None, help="Directory with engine.yaml / bench.yaml")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    parser.add_argument("--threads", type=int, default=None, help="Search worker threads (0 = auto)")
    parser.add_argument("--patch-size", type=int, default=None, help="Odd patch side (default 9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hysim-inpaint",
        description="Exemplar-based inpainting with the HySim patch distance, plus a Perona-Malik baseline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="Fill one image")
    _add_common(run_p)
    run_p.add_argument("--image", type=Path, help="Input image (PNG/PPM)")
    run_p.add_argument("--mask", type=Path, help="Mask image; luma >= 128 marks pixels to fill")
    run_p.add_argument("--fixture", choices=FIXTURE_NAMES, help="Use a generated fixture instead of files")
    run_p.add_argument("--fixture-size", type=int, default=64)
    run_p.add_argument("--truth", type=Path, help="Ground-truth image for PSNR")
    run_p.add_argument("--out", type=Path, default=Path("out.png"), help="Output image path")
    run_p.add_argument("--method", choices=["exemplar", "pm"], default="exemplar")
    run_p.add_argument("--measure", choices=["ssd", "minkowski", "chebyshev", "hysim"], default=None)
    run_p.add_argument("--alpha", type=float, default=None)
    run_p.add_argument("--beta", type=float, default=None)
    run_p.add_argument("--p", dest="p_exponent", type=float, default=None, help="Minkowski exponent P")
    run_p.add_argument("--max-iters", type=int, default=None)
    run_p.add_argument("--snapshot-every", type=int, default=None, help="Write <out>_NNNN every N iterations")
    run_p.add_argument("--report", type=Path, default=None, help="Write a YAML run report here")
    run_p.add_argument("--replay", type=Path, default=None, help="Repeat the run described by a report")
    run_p.add_argument("--seed", type=int, default=None, help="Reserved; the engine is deterministic")
    run_p.add_argument("--kappa", type=float, default=None)
    run_p.add_argument("--step", type=float, default=None)
    run_p.add_argument("--max-steps", type=int, default=None)
    run_p.add_argument("--tol", type=float, default=None)
    run_p.add_argument("--conductance", choices=["exponential", "rational"], default=None)

    bench_p = sub.add_parser("bench", help="Sweep fixtures x measures")
    _add_common(bench_p)
    bench_p.add_argument("--fixtures", nargs="+", choices=FIXTURE_NAMES, default=None)
    bench_p.add_argument("--size", type=int, default=None)
    bench_p.add_argument("--with-diffusion", action="store_true", default=None)
    bench_p.add_argument("--csv", type=Path, default=None, help="Also write the table as CSV")
    bench_p.add_argument("--report", type=Path, default=None, help="Write rows as a YAML document")
    return parser


def _override(model: BaseModel, **updates: Any) -> BaseModel:
    """Copy a config with the non-None updates applied, re-validating."""
    data = model.model_dump()
    data.update({k: v for k, v in updates.items() if v is not None})
    return type(model).model_validate(data)


def build_measure(args: argparse.Namespace, base: MeasureConfig) -> MeasureConfig:
    family = args.measure or base.family
    if family in ("ssd", "chebyshev") and args.p_exponent is not None:
        logger.warning(f"--p is ignored for measure {family}")
    if family != "hysim" and (args.alpha is not None or args.beta is not None):
        logger.warning(f"--alpha/--beta are ignored for measure {family}")
    updates: Dict[str, Any] = {"family": family}
    if family in ("minkowski", "hysim"):
        updates["p_exponent"] = args.p_exponent
    if family == "hysim":
        updates.update(alpha=args.alpha, beta=args.beta)
    return _override(base, **updates)


def build_engine(args: argparse.Namespace, base: EngineConfig) -> EngineConfig:
    measure = build_measure(args, base.measure)
    engine = _override(
        base,
        patch_side=args.patch_size,
        max_iterations=args.max_iters,
        snapshot_every=args.snapshot_every,
        threads=args.threads,
    )
    return engine.model_copy(update={"measure": measure})


def build_diffusion(args: argparse.Namespace, base: DiffusionConfig) -> DiffusionConfig:
    return _override(
        base,
        kappa=args.kappa,
        step=args.step,
        max_steps=args.max_steps,
        tol=args.tol,
        conductance=args.conductance,
    )


def _load_inputs(input_cfg: Dict[str, Any]):
    """Return (image, mask, region spec or None) for the configured input."""
    if input_cfg.get("fixture"):
        return generate_fixture(input_cfg["fixture"], input_cfg.get("fixture_size", 64))
    image = read_image(input_cfg["image"])
    mask = read_mask(input_cfg["mask"])
    check_same_shape(image, mask)
    return image, mask, None


def _snapshot_path(out: Path, iteration: int) -> Path:
    return out.with_name(f"{out.stem}_{iteration:04d}{out.suffix or '.png'}")


def execute(config: Dict[str, Any], out: Path) -> RunReport:
    """Run the configured method and write its artifacts; raises InpaintError on failure."""
    image, mask, regions = _load_inputs(config["input"])
    report = RunReport(config=config)
    started = time.perf_counter()

    if config["method"] == "pm":
        result = run_diffusion(image, mask, DiffusionConfig.model_validate(config["diffusion"]))
        filled, report.iterations = result.image, result.steps
    else:
        engine = EngineConfig.model_validate(config["engine"])
        filled, fill_report = inpaint(image, mask, engine)
        report.iterations = fill_report.iterations
        report.records = [
            {"target": list(r.target), "source": list(r.source), "distance": r.distance}
            for r in fill_report.records
        ]
        report.outputs["snapshots"] = [
            str(write_image(RasterImage(s.image), _snapshot_path(out, s.iteration)))
            for s in fill_report.snapshots
        ]

    report.wall_time = time.perf_counter() - started
    # Metrics first: a bad --truth must fail before the output exists.
    report.metrics = _metrics(filled, mask, regions, config["input"].get("truth"))
    report.outputs["image"] = str(write_image(filled, out))
    return report


def _metrics(filled: RasterImage, mask: InpaintMask, regions, truth_path: Optional[str]) -> Dict[str, Optional[float]]:
    metrics: Dict[str, Optional[float]] = {"psnr": None, "region_bleed": None}
    if regions is not None:
        metrics["psnr"] = psnr(filled, render_regions(regions, filled.channels))
        metrics["region_bleed"] = region_bleed(filled, regions, mask)
    elif truth_path:
        metrics["psnr"] = psnr(filled, read_image(truth_path))
    return metrics


def write_report(report: RunReport, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(report.model_dump(mode="json"), f, sort_keys=False)
    logger.info(f"Report written to {path}")


def _check_replay_config(config: Any) -> Optional[str]:
    """Return what is missing from a replayed run config, or None if it can run."""
    if not isinstance(config, dict):
        return "config is not a mapping"
    method = config.get("method")
    if method not in ("exemplar", "pm"):
        return f"unknown method {method!r}"
    section = "diffusion" if method == "pm" else "engine"
    if not isinstance(config.get(section), dict):
        return f"missing {section} section"
    source = config.get("input")
    if not isinstance(source, dict):
        return "missing input section"
    if not source.get("fixture") and not (source.get("image") and source.get("mask")):
        return "input needs a fixture or an image and a mask"
    return None


def run(args: argparse.Namespace) -> int:
    """Fill one input; exit 0 iff the output image was written."""
    if args.replay is not None:
        try:
            with open(args.replay, "r", encoding="utf-8") as f:
                config = yaml.safe_load(f)["config"]
        except (OSError, KeyError, TypeError, yaml.YAMLError) as e:
            logger.error(f"Cannot replay {args.replay}: {e}")
            return EXIT_USAGE
        problem = _check_replay_config(config)
        if problem:
            logger.error(f"Cannot replay {args.replay}: {problem}")
            return EXIT_USAGE
    else:
        if args.fixture and (args.image or args.mask):
            logger.error("--fixture cannot be combined with --image/--mask")
            return EXIT_USAGE
        if not args.fixture and not (args.image and args.mask):
            logger.error("give --image and --mask, or --fixture")
            return EXIT_USAGE
        if args.method == "pm" and any(v is not None for v in (args.measure, args.alpha, args.beta, args.p_exponent)):
            logger.warning("measure flags are ignored with --method pm")
        if args.seed is not None:
            logger.debug("--seed is recorded but unused; the engine is deterministic")

        try:
            defaults = load_engine_defaults(args.config_dir)
            engine = build_engine(args, defaults["engine"])
            diffusion = build_diffusion(args, defaults["diffusion"])
        except ValidationError as e:
            logger.error(f"Invalid configuration: {e}")
            return EXIT_USAGE

        input_cfg: Dict[str, Any] = (
            {"fixture": args.fixture, "fixture_size": args.fixture_size}
            if args.fixture
            else {"image": str(args.image), "mask": str(args.mask)}
        )
        if args.truth:
            input_cfg["truth"] = str(args.truth)
        config = {
            "method": args.method,
            "input": input_cfg,
            "engine": engine.model_dump(mode="json"),
            "diffusion": diffusion.model_dump(mode="json"),
            "seed": args.seed,
        }

    try:
        report = execute(config, args.out)
    except (InpaintError, ValidationError) as e:
        logger.error(f"Run failed: {e}")
        if args.report:
            write_report(RunReport(config=config, status="failed", error=str(e)), args.report)
        return EXIT_FAILED

    print(f"Output: {report.outputs['image']}")
    print(f"Iterations: {report.iterations}  Time: {report.wall_time:.2f}s")
    for name, value in report.metrics.items():
        if value is not None:
            print(f"{name}: {value:.4f}")
    if args.report:
        write_report(report, args.report)
    return EXIT_OK


def _bench_row(fixture: str, size: int, method: str, measure: Optional[MeasureConfig]) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "fixture": fixture,
        "method": method,
        "measure": measure.label() if measure else "perona-malik",
        "family": measure.family if measure else None,
        "alpha": measure.alpha if measure and measure.family == "hysim" else None,
        "beta": measure.beta if measure and measure.family == "hysim" else None,
        "p": measure.p_exponent if measure and measure.family in ("minkowski", "hysim") else None,
        "size": size,
    }
    return row


def run_bench(bench_cfg: BenchConfig, engine: EngineConfig, diffusion: Optional[DiffusionConfig] = None) -> pd.DataFrame:
    """Run the fixture x measure grid; failures become rows with success=False."""
    rows: List[Dict[str, Any]] = []
    diffusion = diffusion or DiffusionConfig()

    for fixture in bench_cfg.fixtures:
        cells: List[Optional[MeasureConfig]] = list(bench_cfg.measures)
        if bench_cfg.with_diffusion:
            cells.append(None)
        for measure in cells:
            row = _bench_row(fixture, bench_cfg.size, "exemplar" if measure else "pm", measure)
            try:
                image, mask, regions = generate_fixture(fixture, bench_cfg.size)
                started = time.perf_counter()
                if measure is None:
                    result = run_diffusion(image, mask, diffusion)
                    filled, iterations = result.image, result.steps
                else:
                    filled, report = inpaint(image, mask, engine.model_copy(update={"measure": measure}))
                    iterations = report.iterations
                row.update(
                    iterations=iterations,
                    bleed=region_bleed(filled, regions, mask),
                    psnr=psnr(filled, render_regions(regions, filled.channels)),
                    time=time.perf_counter() - started,
                    success=True,
                    error=None,
                )
            except Exception as e:
                logger.error(f"Bench cell {fixture}/{row['measure']} failed: {e}")
                row.update(iterations=None, bleed=None, psnr=None, time=None, success=False, error=str(e))
            rows.append(row)

    return pd.DataFrame(rows)


def bench(args: argparse.Namespace) -> int:
    try:
        bench_cfg = load_bench_config(args.config_dir)
        bench_cfg = _override(bench_cfg, fixtures=args.fixtures, size=args.size, with_diffusion=args.with_diffusion)
        defaults = load_engine_defaults(args.config_dir)
        engine = _override(defaults["engine"], patch_side=args.patch_size, threads=args.threads)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_USAGE

    table = run_bench(bench_cfg, engine, defaults["diffusion"])
    columns = ["fixture", "measure", "iterations", "bleed", "psnr", "time", "success"]
    print(table[columns].to_string(index=False, float_format=lambda v: f"{v:.4f}"))

    if args.csv:
        args.csv.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(args.csv, index=False)
    if args.report:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        with open(args.report, "w", encoding="utf-8") as f:
            yaml.safe_dump(
                {
                    "config": {"bench": bench_cfg.model_dump(mode="json"), "engine": engine.model_dump(mode="json")},
                    "rows": json.loads(table.to_json(orient="records")),
                },
                f,
                sort_keys=False,
            )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    if args.command == "bench":
        return bench(args)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
