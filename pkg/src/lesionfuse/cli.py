"""Command-line front end: ``segment``, ``evaluate`` and ``batch``."""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from pathlib import Path

from lesionfuse import imgcore
from lesionfuse.fusion import FusionConfig
from lesionfuse.imgcore import ImageFormatError
from lesionfuse.metrics import (
    DegenerateBorder,
    DimensionMismatch,
    EmptyManualBorder,
    ImageResult,
    ManualBorder,
    aggregate,
    rasterize_border,
    xor_error,
)
from lesionfuse.morphology import EmptyMask
from lesionfuse.pipeline import segment
from lesionfuse.thresholders import DEFAULT_ENSEMBLE, METHODS, DegenerateHistogram

log = logging.getLogger("lesionfuse")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3, 4
DETECTED_COLOR = (255, 0, 0)
INPUT_ERRORS = (OSError, ImageFormatError, DimensionMismatch, EmptyManualBorder,
                DegenerateBorder, ValueError)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _ensemble(text: str) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in methods if m not in METHODS]
    if not methods or bad:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated subset of {','.join(METHODS)}, got {text!r}")
    return methods


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("pipeline")
    g.add_argument("--channel", choices=sorted(imgcore.CHANNELS), default="blue")
    g.add_argument("--ensemble", type=_ensemble, default=DEFAULT_ENSEMBLE,
                   help="thresholding methods, comma separated (default: all four)")
    g.add_argument("--gamma", type=float, default=0.1)
    g.add_argument("--beta-sp", type=float, default=1.0,
                   help="spatial weight, used only when --iterations > 0")
    g.add_argument("--iterations", type=int, default=0, help="spatial MRF sweeps")
    g.add_argument("--convergence", type=float, default=0.001,
                   help="stop sweeping once fewer than this fraction of labels change")
    g.add_argument("--expand-k", type=float, default=7.0,
                   help="dilation radius is floor(k * diameter / 512)")
    g.add_argument("--no-expand", action="store_true", help="skip the final dilation")


def _fusion_config(args) -> FusionConfig:
    try:
        return FusionConfig(gamma=args.gamma, beta_sp=args.beta_sp,
                            iterations=args.iterations,
                            convergence_fraction=args.convergence)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc


def _run_pipeline(img, args, fusion: FusionConfig):
    try:
        return segment(img, channel=args.channel, methods=args.ensemble, fusion=fusion,
                       k=args.expand_k, expand=not args.no_expand)
    except DegenerateHistogram as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from exc
    except EmptyMask as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from exc


def _read_image(path):
    try:
        return imgcore.read_image(path)
    except INPUT_ERRORS as exc:
        raise CliError(f"cannot read image {path}: {exc}", EXIT_INPUT) from exc


def cmd_segment(args) -> int:
    fusion = _fusion_config(args)
    img = _read_image(args.input)
    start = time.perf_counter()
    result = _run_pipeline(img, args, fusion)
    elapsed = time.perf_counter() - start
    try:
        imgcore.write_mask(args.output, result.mask, "PNG" if args.png_mask else None)
        if args.overlay:
            imgcore.write_overlay(args.overlay, img, [(result.mask, DETECTED_COLOR)])
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_INPUT) from exc
    thresholds = " ".join(f"{r.method}={r.threshold}" for r in result.ensemble.results)
    log.info("thresholds: %s", thresholds)
    if args.time:
        print(f"time_ms {1000.0 * elapsed:.1f}")
    return EXIT_OK


def _truth_mask(path, shape, as_points: bool):
    if as_points:
        return rasterize_border(ManualBorder.load(path), width=shape[1], height=shape[0])
    return imgcore.read_mask(path)


def cmd_evaluate(args) -> int:
    truths = args.truth or args.truth_mask
    if len(args.mask) != len(truths):
        raise CliError("give one truth file per --mask", EXIT_USAGE)
    rows = []
    for mask_path, truth_path in zip(args.mask, truths):
        try:
            mask = imgcore.read_mask(mask_path)
            truth = _truth_mask(truth_path, mask.shape, as_points=bool(args.truth))
            eps = xor_error(mask, truth)
        except INPUT_ERRORS as exc:
            raise CliError(f"{mask_path}: {exc}", EXIT_INPUT) from exc
        rows.append(ImageResult(str(mask_path), "all", eps))
    if len(rows) == 1:
        print(f"{100.0 * rows[0].epsilon:.2f}")
        return EXIT_OK
    for r in rows:
        print(f"{r.image} {100.0 * r.epsilon:.2f}")
    stats = aggregate(rows).aggregates[-1]
    print(f"all mu={stats.mu:.2f} sigma={stats.sigma:.2f} n={stats.n}")
    return EXIT_OK


def read_manifest(path) -> list[tuple[Path, Path, str]]:
    """Rows of ``image_path,truth_path,class``; a header row is optional.

    Relative paths resolve against the manifest's directory.
    """
    path = Path(path)
    base = path.parent
    entries = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            row = [c.strip() for c in row]
            if not any(row) or row[0].startswith("#"):
                continue
            if i == 0 and row[:3] == ["image_path", "truth_path", "class"]:
                continue
            if len(row) != 3:
                raise CliError(f"{path}: row {i + 1}: expected 3 columns", EXIT_INPUT)
            entries.append((base / row[0], base / row[1], row[2]))
    return entries


def _batch_row(image_path, truth_path, label, args, fusion) -> ImageResult:
    name = image_path.name
    try:
        img = _read_image(image_path)
        mask = _run_pipeline(img, args, fusion).mask
        truth = _truth_mask(truth_path, mask.shape, as_points=truth_path.suffix == ".txt")
        return ImageResult(name, label, xor_error(mask, truth))
    except CliError as exc:
        return ImageResult(name, label, None, str(exc))
    except INPUT_ERRORS as exc:
        return ImageResult(name, label, None, f"{type(exc).__name__}: {exc}")


def cmd_batch(args) -> int:
    fusion = _fusion_config(args)
    try:
        entries = read_manifest(args.manifest)
    except OSError as exc:
        raise CliError(f"cannot read manifest: {exc}", EXIT_INPUT) from exc
    if not entries:
        raise CliError(f"{args.manifest}: manifest is empty", EXIT_INPUT)
    rows = []
    for image_path, truth_path, label in entries:
        row = _batch_row(image_path, truth_path, label, args, fusion)
        if row.error:
            log.warning("%s: %s", row.image, row.error)
        rows.append(row)
    report = aggregate(rows)
    report.write(args.output)
    if not args.no_figure:
        from lesionfuse.plotting import error_figure

        figure = args.figure or Path(args.output).with_suffix(".png")
        error_figure(report, figure)
    for s in report.aggregates:
        print(f"{s.label} mu={s.mu:.2f} sigma={s.sigma:.2f} n={s.n}")
    return EXIT_INPUT if any(r.error for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lesionfuse",
        description="Lesion border detection in dermoscopy images by threshold fusion.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="segment one image")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="mask file (PGM, or PNG)")
    p.add_argument("--overlay", help="PNG with the detected border drawn in red")
    p.add_argument("--png-mask", action="store_true", help="write the mask as PNG")
    p.add_argument("--time", action="store_true", help="print pipeline wall-clock ms")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("evaluate", help="XOR error of a mask against ground truth")
    p.add_argument("--mask", action="append", required=True)
    truth = p.add_mutually_exclusive_group(required=True)
    truth.add_argument("--truth", action="append", help="control points, one 'x y' per line")
    truth.add_argument("--truth-mask", action="append", help="ground-truth mask image")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("batch", help="segment and evaluate every row of a manifest")
    p.add_argument("--manifest", required=True, help="CSV: image_path,truth_path,class")
    p.add_argument("-o", "--output", required=True, help="report CSV")
    p.add_argument("--figure", help="error chart PNG (default: next to the report)")
    p.add_argument("--no-figure", action="store_true")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
