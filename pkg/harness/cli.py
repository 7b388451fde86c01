"""
harness/cli.py
Command-line interface: preprocess, features, train, grade, evaluate, synth

Data goes to files or stdout; diagnostics go to stderr.
Exit codes: 0 success, 1 usage/configuration error, 2 data/pipeline error.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from config.config_manager import ConfigManager
from config.settings import (
    APP_DESCRIPTION,
    CLASSIFIER_KINDS,
    DATASET_SYNTHETIC,
    DATASET_USER,
    EXIT_PIPELINE_ERROR,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    LOG_FILE,
)
from features.extractor import FeatureExtractor
from features.lbp import histogram_bins, lbp_map
from grading.classifiers import grade, train
from grading.model_store import load_model, save_model
from harness.evaluator import Evaluator
from harness.manifest import load_manifest
from harness.report import save_report
from harness.synth import is_synthetic_manifest, synth_dataset
from imaging.raster import RasterImage, load_image, save_image
from utils.errors import ConfigError, ImageProcessingError, PipelineError
from utils.file_utils import format_csv_rows, write_text_file
from utils.logger import get_logger, setup_logger

logger = get_logger(__name__)


class UsageError(ConfigError):
    """Command line could not be parsed"""
    pass


class GradeArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so usage errors map to exit code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ============================================================================
# Parser
# ============================================================================

# CLI flag -> configuration key
_FLAG_KEYS = {
    'spatial_sigma': 'spatial_sigma',
    'range_sigma': 'range_sigma',
    'window_radius': 'window_radius',
    'max_iter': 'max_iterations',
    'lbp_points': 'lbp_points',
    'lbp_radius': 'lbp_radius',
    'n_scales': 'n_scales',
    'n_angles': 'n_angles_coarse',
    'classifier': 'classifier',
    'k': 'k',
    'seed': 'seed',
    'threads': 'threads',
}


def _add_pipeline_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("pipeline")
    group.add_argument("--spatial-sigma", type=float, help="Bilateral spatial sigma (px)")
    group.add_argument("--range-sigma", type=float, help="Bilateral range sigma (chromaticity units)")
    group.add_argument("--window-radius", type=int, help="Bilateral window radius (px)")
    group.add_argument("--max-iter", type=int, help="Maximum specular-removal iterations")
    group.add_argument("--lbp-points", type=int, help="LBP circle samples P")
    group.add_argument("--lbp-radius", type=float, help="LBP circle radius R")
    group.add_argument("--n-scales", type=int, help="Curvelet scales (default: from image size)")
    group.add_argument("--n-angles", type=int, help="Curvelet angles at the coarsest angular scale")


def _add_classifier_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--classifier", choices=CLASSIFIER_KINDS, help="Grader kind")
    parser.add_argument("--k", type=int, help="Neighbour count for knn")
    parser.add_argument(
        "--no-normalize", dest="normalize", action="store_false", default=None,
        help="Skip z-score normalization",
    )


def build_parser() -> GradeArgumentParser:
    parser = GradeArgumentParser(prog="gradepipe", description=APP_DESCRIPTION)
    parser.add_argument("--config", type=Path, help="key = value file overriding any flag")
    parser.add_argument("--debug", action="store_true", help="Debug logging")
    parser.add_argument("--log-file", type=Path, nargs="?", const=LOG_FILE, help="Also log to a rotating file")
    parser.add_argument("--threads", type=int, help="Worker threads (0 = all cores)")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    p = commands.add_parser("preprocess", help="Specular removal, segmentation and contour of one image")
    p.add_argument("--in", dest="input", type=Path, required=True, help="Input PGM/PPM")
    p.add_argument("--out-mask", type=Path, help="Fruit mask PGM")
    p.add_argument("--out-contour", type=Path, help="Contour CSV (row,col per line)")
    p.add_argument("--out-diffuse", type=Path, help="Specular-free image")
    p.add_argument("--out-highlight", type=Path, help="Mask of pixels changed by specular removal")
    _add_pipeline_flags(p)

    p = commands.add_parser("features", help="Shape/texture feature rows for images")
    p.add_argument("--in", dest="input", type=Path, nargs="+", required=True, help="Input PGM/PPM file(s)")
    p.add_argument("--shape", action="store_true", help="Emit A,P,MAJL,MINL,E,ED")
    p.add_argument("--texture", action="store_true", help="Emit mu,sigma")
    p.add_argument("--dump-lbp", type=Path, help="Plain LBP map of the fruit as PGM (P <= 8)")
    p.add_argument("--dump-hist", type=Path, help="riu2 histogram of the fruit as code,count CSV")
    _add_pipeline_flags(p)

    p = commands.add_parser("train", help="Train a grader on every manifest entry")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--model", type=Path, required=True, help="Output model file")
    _add_classifier_flags(p)
    _add_pipeline_flags(p)

    p = commands.add_parser("grade", help="Grade images with a saved model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--in", dest="input", type=Path, nargs="+", required=True)
    _add_pipeline_flags(p)

    p = commands.add_parser("evaluate", help="50/50 split evaluation with JSON report")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--report", type=Path, help="Report JSON (default: stdout)")
    p.add_argument(
        "--dataset", choices=(DATASET_USER, DATASET_SYNTHETIC),
        help="Report label (default: synthetic for a synth output manifest, else user)",
    )
    _add_classifier_flags(p)
    _add_pipeline_flags(p)

    p = commands.add_parser("synth", help="Generate a synthetic dataset")
    p.add_argument("--n-per-grade", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, required=True, help="Output directory")

    return parser


def _config_from_args(args) -> ConfigManager:
    overrides = {key: getattr(args, flag, None) for flag, key in _FLAG_KEYS.items()}
    overrides['normalize'] = getattr(args, 'normalize', None)
    return ConfigManager(args.config, overrides)


# ============================================================================
# Commands
# ============================================================================

def _cmd_preprocess(args, config: ConfigManager) -> int:
    extractor = FeatureExtractor(config.pipeline_config())
    path = args.input
    try:
        stages = extractor.preprocess(load_image(path))
    except ConfigError:
        raise
    except PipelineError as e:
        raise ImageProcessingError(path, e) from e

    if args.out_diffuse:
        save_image(stages.diffuse, args.out_diffuse)
    if args.out_mask:
        save_image(stages.mask.to_image(), args.out_mask)
    if args.out_highlight:
        save_image(stages.highlight.to_image(), args.out_highlight)
    if args.out_contour:
        if not write_text_file(args.out_contour, stages.contour.to_csv()):
            raise PipelineError(f"Failed to write contour: {args.out_contour}")

    logger.info(f"{path}: {stages.mask!r}, contour of {len(stages.contour)} points")
    return EXIT_SUCCESS


def _fruit_lbp(extractor: FeatureExtractor, path: Path):
    """Gray image and mask of one file, for the LBP dumps"""
    try:
        stages = extractor.preprocess(load_image(path))
    except ConfigError:
        raise
    except PipelineError as e:
        raise ImageProcessingError(path, e) from e
    return stages.gray.plane(0), stages.mask.bits


def _dump_lbp(extractor: FeatureExtractor, path: Path, out: Path):
    texture = extractor.config.texture
    if histogram_bins("plain", texture.lbp_points) > 256:
        raise ConfigError("--dump-lbp needs lbp_points <= 8 to fit an 8-bit image")
    gray, mask = _fruit_lbp(extractor, path)
    codes = lbp_map(np.where(mask, gray, 0.0), texture.lbp_points, texture.lbp_radius, "plain").codes
    save_image(RasterImage(codes.astype(np.uint8)), out)


def _dump_hist(extractor: FeatureExtractor, path: Path, out: Path):
    texture = extractor.config.texture
    gray, mask = _fruit_lbp(extractor, path)
    lbp = lbp_map(np.where(mask, gray, 0.0), texture.lbp_points, texture.lbp_radius, "riu2")

    border = (mask.shape[0] - lbp.height) // 2
    inside = mask[border:border + lbp.height, border:border + lbp.width]
    counts = np.bincount(lbp.codes[inside], minlength=lbp.bin_count)

    if not write_text_file(out, format_csv_rows(enumerate(counts.tolist()))):
        raise PipelineError(f"Failed to write histogram: {out}")


def _cmd_features(args, config: ConfigManager) -> int:
    if (args.dump_lbp or args.dump_hist) and len(args.input) > 1:
        raise UsageError("--dump-lbp/--dump-hist take a single --in image")

    pipeline = config.pipeline_config()
    extractor = FeatureExtractor(pipeline)
    result = extractor.extract_many(args.input, threads=pipeline.threads)

    want_shape = args.shape or not args.texture
    want_texture = args.texture or not args.shape

    rows = []
    for features in result.features:
        row = []
        if want_shape:
            row += features.shape.to_array().tolist()
        if want_texture:
            row += features.texture.to_array().tolist()
        rows.append(row)
    sys.stdout.write(format_csv_rows(rows))

    if args.dump_lbp:
        _dump_lbp(extractor, args.input[0], args.dump_lbp)
    if args.dump_hist:
        _dump_hist(extractor, args.input[0], args.dump_hist)
    return EXIT_SUCCESS


def _cmd_train(args, config: ConfigManager) -> int:
    manifest = load_manifest(args.manifest)
    pipeline = config.pipeline_config()
    result = FeatureExtractor(pipeline).extract_many(manifest.paths)

    model = train(
        config.classifier(),
        [(label, f.fused) for label, f in zip(manifest.labels, result.features)],
        k=config.k(),
        normalize=pipeline.normalize,
    )
    save_model(model, args.model)
    return EXIT_SUCCESS


def _cmd_grade(args, config: ConfigManager) -> int:
    model = load_model(args.model)
    pipeline = config.pipeline_config()
    result = FeatureExtractor(pipeline).extract_many(args.input)

    rows = []
    for path, features in zip(args.input, result.features):
        label, score = grade(model, features.fused)
        rows.append([str(path), str(label), float(score)])
    sys.stdout.write(format_csv_rows(rows))
    return EXIT_SUCCESS


def _cmd_evaluate(args, config: ConfigManager) -> int:
    manifest = load_manifest(args.manifest)
    dataset = args.dataset
    if dataset is None:
        dataset = DATASET_SYNTHETIC if is_synthetic_manifest(args.manifest, manifest) else DATASET_USER

    evaluator = Evaluator(config.pipeline_config())
    report = evaluator.evaluate(
        config.classifier(),
        manifest,
        config.seed(),
        k=config.k(),
        dataset=dataset,
    )

    if args.report:
        save_report(report, args.report)
    else:
        sys.stdout.write(report.to_json())
    return EXIT_SUCCESS


def _cmd_synth(args, config: ConfigManager) -> int:
    result = synth_dataset(args.n_per_grade, config.seed(), args.out)
    sys.stdout.write(f"{result.manifest_path}\n")
    return EXIT_SUCCESS


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "features": _cmd_features,
    "train": _cmd_train,
    "grade": _cmd_grade,
    "evaluate": _cmd_evaluate,
    "synth": _cmd_synth,
}


# ============================================================================
# Entry Point
# ============================================================================

def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv and dispatch one subcommand

    Returns:
        0 on success, 1 on usage/configuration errors, 2 on data/pipeline errors

    Example:
        cli_main(["evaluate", "--manifest", "m.csv", "--classifier", "knn",
                  "--k", "4", "--seed", "7", "--report", "out.json"])
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE_ERROR

    setup_logger(level="DEBUG" if args.debug else None, log_file=args.log_file)

    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](args, config)
    except ConfigError as e:
        # some errors are both ConfigError and PipelineError; configuration wins
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE_ERROR
    except PipelineError as e:
        logger.error(str(e))
        return EXIT_PIPELINE_ERROR


__all__ = ['UsageError', 'GradeArgumentParser', 'build_parser', 'cli_main']
