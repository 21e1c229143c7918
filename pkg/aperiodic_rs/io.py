"""
File formats: coefficient CSV/JSON, word tokens, plot data and reports.

Every writer goes through atomic_write_text, so a failed run never leaves a
half-written file behind.
"""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from .alphabet import CoefficientSequence, Word, format_word, unit_roots
from .errors import OutputError, RangeError

logger = logging.getLogger("aperiodic_rs.io")

PathLike = Union[str, Path]

CSV_HEADER = ("index", "re", "im", "exponent")


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write text to path through a temporary file in the same directory.

    Args:
        path: Destination file.
        text: Complete file contents.

    Returns:
        The destination path.

    Raises:
        OutputError: if the directory cannot be created or the file written.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.debug(f"Wrote {path}")
    return path


def _fmt(value: float) -> str:
    text = "%.12g" % value
    return "0" if text == "-0" else text


def coefficients_csv(eps: CoefficientSequence) -> str:
    """index,re,im,exponent rows with 1-based indices."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    values = eps.values
    for index, (value, exponent) in enumerate(zip(values.tolist(), eps.exponents.tolist()), start=1):
        writer.writerow([index, _fmt(value.real), _fmt(value.imag), exponent])
    return buffer.getvalue()


def coefficients_json(eps: CoefficientSequence, construction: Optional[str] = None) -> str:
    payload = {
        "construction": construction,
        "order": eps.order,
        "length": len(eps),
        "exponents": eps.exponents.tolist(),
    }
    return json.dumps(payload, indent=2) + "\n"


def word_tokens(word: Word, per_line: int = 32) -> str:
    """Token text, per_line tokens to a line."""
    tokens = word.tokens()
    lines = [" ".join(tokens[i:i + per_line]) for i in range(0, len(tokens), per_line)]
    return "\n".join(lines) + "\n"


def columns_text(rows: Iterable[Sequence[float]]) -> str:
    """Whitespace-separated numeric columns, one row per line."""
    return "".join(" ".join(_fmt(float(v)) for v in row) + "\n" for row in rows)


def write_plot_data(directory: PathLike, periodogram: np.ndarray, eta: np.ndarray,
                    sup_profile: Sequence[Tuple[int, float]]) -> List[Path]:
    """periodogram.dat (theta, I), autocorr.dat (m, Re eta) and supnorm.dat (N, sup/sqrt N)."""
    directory = Path(directory)
    size = len(periodogram)
    written = [
        atomic_write_text(
            directory / "periodogram.dat",
            columns_text((j / size, periodogram[j]) for j in range(size)),
        ),
        atomic_write_text(
            directory / "autocorr.dat",
            columns_text((m, eta[m].real) for m in range(len(eta))),
        ),
        atomic_write_text(directory / "supnorm.dat", columns_text(sup_profile)),
    ]
    logger.info(f"Plot data written to {directory}")
    return written


def write_report(path: PathLike, report: BaseModel) -> Path:
    return atomic_write_text(path, report.model_dump_json(indent=2, by_alias=True) + "\n")


def report_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2, by_alias=True)


def _exponents_from_values(values: np.ndarray, order: Optional[int]) -> Tuple[np.ndarray, int]:
    if order is None:
        if np.allclose(values.imag, 0.0, atol=1e-9) and np.allclose(np.abs(values.real), 1.0, atol=1e-9):
            order = 2
        else:
            raise RangeError("cannot infer the order of non-real coefficients; pass --order")
    if not np.allclose(np.abs(values), 1.0, atol=1e-9):
        raise RangeError("coefficients must lie on the unit circle")
    turns = np.angle(values) * order / (2.0 * np.pi)
    exponents = np.rint(turns).astype(np.int64)
    if not np.allclose(turns, exponents, atol=1e-6):
        raise RangeError(f"coefficients are not {order}-th roots of unity")
    return exponents % order, order


def _checked_exponents(exponents: Sequence[int], order: int, path: Path) -> List[int]:
    bad = [e for e in exponents if not 0 <= e < order]
    if bad:
        raise RangeError(f"{path}: exponent {bad[0]} is outside 0..{order - 1}")
    return list(exponents)


def read_coefficients(path: PathLike, order: Optional[int] = None) -> CoefficientSequence:
    """Load a coefficient file written by gen (CSV or JSON), or a plain CSV of re,im values.

    Args:
        path: A .csv or .json file.
        order: The root-of-unity order; inferred when the file carries it or
            when all values are +1/-1.

    Raises:
        OutputError: if the file cannot be read or has no coefficients.
        RangeError: if values are not roots of unity of the order.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot read {path}: {e}") from e

    if path.suffix.lower() == ".json":
        payload = json.loads(text)
        stored = int(payload["order"])
        if order is not None and order != stored:
            raise RangeError(f"{path} holds order-{stored} coefficients, not order {order}")
        eps = CoefficientSequence(_checked_exponents(payload["exponents"], stored, path), stored)
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise OutputError(f"{path} holds no coefficients")
        if "exponent" in rows[0] and order is not None:
            exponents = _checked_exponents([int(r["exponent"]) for r in rows], order, path)
            if "re" in rows[0]:
                values = np.array([complex(float(r["re"]), float(r.get("im") or 0.0)) for r in rows])
                if not np.allclose(values, unit_roots(order)[exponents], atol=1e-6):
                    raise RangeError(f"{path}: exponent column disagrees with re,im at order {order}")
            eps = CoefficientSequence(exponents, order)
        else:
            values = np.array([complex(float(r["re"]), float(r.get("im") or 0.0)) for r in rows])
            exponents, order = _exponents_from_values(values, order)
            eps = CoefficientSequence(exponents, order)
    if len(eps) == 0:
        raise OutputError(f"{path} holds no coefficients")
    logger.info(f"Read {len(eps)} coefficients of order {eps.order} from {path}")
    return eps


def render_word(word: Word, form: str = "tokens") -> str:
    """tokens, json or pretty rendering of a word."""
    if form == "json":
        return json.dumps(word.tokens())
    if form == "pretty":
        return word.pretty()
    return format_word(word)
