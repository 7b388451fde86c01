"""
grading/model_store.py
Versioned plain-text model files

    gradepipe-model v1 <kind> k=<k>
    stats normalize=<0|1> dims=<d> classes=<Grade,...> [mean=<v,...> std=<v,...>]
    vector <Grade> <v1> ... <vd>                    (knn, one per training vector)
    centroid <Grade> <v1> ... <vd>                  (centroid, one per class)
    mean <Grade> prior=<p> <v1> ... <vd>            (lda, one per class)
    covinv <v11> <v12> ... <vdd>                    (lda, row-major)

Numbers are written with 12 significant digits.
"""

from pathlib import Path
from typing import Dict, List

import numpy as np

from config.settings import MODEL_MAGIC, MODEL_NUMBER_FORMAT, MODEL_VERSION, get_model_header
from grading.classifiers import TrainedModel, UnfittedModelError
from grading.fusion import NormalizationStats
from grading.labels import GradeLabel, UnknownGradeError
from utils.errors import PipelineError
from utils.file_utils import read_text_file, write_text_file
from utils.logger import get_logger

logger = get_logger(__name__)


class ModelFormatError(PipelineError):
    """Model file is missing, unreadable or malformed"""
    pass


def _fmt(value: float) -> str:
    return MODEL_NUMBER_FORMAT % value


def _join(values) -> str:
    return " ".join(_fmt(v) for v in values)


def format_model(model: TrainedModel) -> str:
    """Render a trained model in the v1 text format"""
    if not model.is_fitted:
        raise UnfittedModelError("Cannot save an untrained model")

    classes = ",".join(str(c) for c in model.classes)
    stats_line = f"stats normalize={int(model.normalize)} dims={model.dims} classes={classes}"
    if model.stats is not None:
        stats_line += (
            f" mean={','.join(_fmt(v) for v in model.stats.mean)}"
            f" std={','.join(_fmt(v) for v in model.stats.std)}"
        )

    lines = [get_model_header(model.kind, model.k), stats_line]

    if model.kind == "knn":
        for label, row in zip(model.labels, model.vectors):
            lines.append(f"vector {GradeLabel(int(label))} {_join(row)}")
    elif model.kind == "centroid":
        for grade, row in zip(model.classes, model.centroids):
            lines.append(f"centroid {grade} {_join(row)}")
    else:
        for grade, prior, row in zip(model.classes, model.priors, model.means):
            lines.append(f"mean {grade} prior={_fmt(prior)} {_join(row)}")
        lines.append(f"covinv {_join(model.cov_inv.ravel())}")

    return "\n".join(lines) + "\n"


def save_model(model: TrainedModel, path) -> None:
    """
    Write a model file

    Raises:
        ModelFormatError: The file could not be written
    """
    if not write_text_file(Path(path), format_model(model)):
        raise ModelFormatError(f"Failed to write model file: {path}")
    logger.info(f"Saved {model!r} to {path}")


def _floats(tokens: List[str], where: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as e:
        raise ModelFormatError(f"{where}: {e}") from e


def _key_values(tokens: List[str], where: str) -> Dict[str, str]:
    fields = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ModelFormatError(f"{where}: expected key=value, got {token!r}")
        fields[key] = value
    return fields


def parse_model(text: str, source: str = "<model>") -> TrainedModel:
    """
    Parse v1 model text

    Raises:
        ModelFormatError: Any structural problem
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 2:
        raise ModelFormatError(f"{source}: model file is truncated")

    header = lines[0].split()
    if len(header) != 4 or header[0] != MODEL_MAGIC:
        raise ModelFormatError(f"{source}: not a model file (header {lines[0]!r})")
    if header[1] != MODEL_VERSION:
        raise ModelFormatError(f"{source}: unsupported model version {header[1]!r}")
    kind = header[2]
    if not header[3].startswith("k="):
        raise ModelFormatError(f"{source}: header lacks k=")
    try:
        k = int(header[3][2:])
    except ValueError as e:
        raise ModelFormatError(f"{source}: bad k in header") from e

    stats_tokens = lines[1].split()
    if not stats_tokens or stats_tokens[0] != "stats":
        raise ModelFormatError(f"{source}: second line must be the stats line")
    fields = _key_values(stats_tokens[1:], f"{source} line 2")

    try:
        normalize = fields["normalize"] == "1"
        dims = int(fields["dims"])
        classes = tuple(GradeLabel.from_name(name) for name in fields["classes"].split(","))
    except (KeyError, ValueError, UnknownGradeError) as e:
        raise ModelFormatError(f"{source} line 2: {e}") from e

    stats = None
    if normalize:
        if "mean" not in fields or "std" not in fields:
            raise ModelFormatError(f"{source} line 2: normalizing model lacks mean/std")
        mean = _floats(fields["mean"].split(","), f"{source} line 2")
        std = _floats(fields["std"].split(","), f"{source} line 2")
        if mean.size != dims or std.size != dims:
            raise ModelFormatError(
                f"{source} line 2: expected {dims} mean/std values, got {mean.size}/{std.size}"
            )
        if not np.all(std > 0):
            raise ModelFormatError(f"{source} line 2: std values must be positive")
        stats = NormalizationStats(mean=mean, std=std)

    labels, rows, priors, cov_inv = [], [], [], None
    expected_tag = {"knn": "vector", "centroid": "centroid", "lda": "mean"}.get(kind)
    if expected_tag is None:
        raise ModelFormatError(f"{source}: unknown model kind {kind!r}")

    for number, line in enumerate(lines[2:], start=3):
        where = f"{source} line {number}"
        tokens = line.split()
        tag = tokens[0]

        if tag == "covinv" and kind == "lda":
            cov_inv = _floats(tokens[1:], where)
            continue
        if tag != expected_tag or len(tokens) < 2:
            raise ModelFormatError(f"{where}: unexpected record {tag!r}")

        try:
            labels.append(GradeLabel.from_name(tokens[1]))
        except UnknownGradeError as e:
            raise ModelFormatError(f"{where}: {e}") from e

        values = tokens[2:]
        if kind == "lda":
            prior = _key_values(values[:1], where).get("prior")
            if prior is None:
                raise ModelFormatError(f"{where}: missing prior=")
            priors.append(float(_floats([prior], where)[0]))
            values = values[1:]

        row = _floats(values, where)
        if row.size != dims:
            raise ModelFormatError(f"{where}: expected {dims} values, got {row.size}")
        rows.append(row)

    if not rows:
        raise ModelFormatError(f"{source}: model holds no parameters")

    matrix = np.vstack(rows)
    common = dict(kind=kind, k=k, classes=classes, normalize=normalize, stats=stats)

    if kind == "knn":
        model = TrainedModel(vectors=matrix, labels=np.array([int(label) for label in labels], dtype=np.int64), **common)
    elif kind == "centroid":
        if tuple(labels) != classes:
            raise ModelFormatError(f"{source}: centroid records do not match the class list")
        model = TrainedModel(centroids=matrix, **common)
    else:
        if cov_inv is None or cov_inv.size != dims * dims:
            raise ModelFormatError(f"{source}: lda model needs a {dims}x{dims} covinv record")
        if tuple(labels) != classes:
            raise ModelFormatError(f"{source}: mean records do not match the class list")
        model = TrainedModel(
            means=matrix,
            cov_inv=cov_inv.reshape(dims, dims),
            priors=np.array(priors),
            **common,
        )

    if not model.is_fitted:
        raise ModelFormatError(f"{source}: model is incomplete")
    return model


def load_model(path) -> TrainedModel:
    """
    Read a model file

    Raises:
        ModelFormatError: Missing or malformed file
    """
    path = Path(path)
    if not path.is_file():
        raise ModelFormatError(f"Model file not found: {path}")

    text = read_text_file(path)
    if text is None:
        raise ModelFormatError(f"Failed to read model file: {path}")

    model = parse_model(text, str(path))
    logger.debug(f"Loaded {model!r} from {path}")
    return model


__all__ = ['ModelFormatError', 'format_model', 'save_model', 'parse_model', 'load_model']
