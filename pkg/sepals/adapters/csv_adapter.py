from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt
import pandas as pd

from sepals.exceptions import DataFormatError, DomainError
from sepals.logger import get_logger
from sepals.models import Dataset

logger = get_logger("sepals.csv_adapter")

FLOAT_FORMAT = "%.17g"
RESPONSE_COLUMN = "y"


class CsvAdapter:
    """Reads datasets and writes results as locale-independent CSV/JSON.

    The response is the column named by y_col, else a column called "y",
    else the last column; every other column is a covariate in file order.
    """

    def __init__(self, float_format: str = FLOAT_FORMAT):
        self.float_format = float_format

    def _load(self, path: Path, y_col: str | None) -> tuple[pd.DataFrame, str]:
        try:
            frame = pd.read_csv(path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
            raise DataFormatError(f"cannot parse {path}: {exc}") from exc
        if y_col is None:
            y_col = RESPONSE_COLUMN if RESPONSE_COLUMN in frame.columns else str(frame.columns[-1])
        if y_col not in frame.columns:
            raise DataFormatError(f"response column {y_col!r} not found in {path}")
        return frame, y_col

    def read_dataset(self, path: Path, y_col: str | None = None) -> Dataset:
        frame, y_col = self._load(path, y_col)
        covariates = frame.drop(columns=[y_col])
        try:
            X = covariates.to_numpy(dtype=float)
            Y = frame[y_col].to_numpy(dtype=float)
            data = Dataset(X, Y, tuple(str(c) for c in covariates.columns))
        except (ValueError, DomainError) as exc:
            raise DataFormatError(f"invalid dataset in {path}: {exc}") from exc
        logger.info(f"[csv {path}] {data.n} rows, {data.p} covariates, response {y_col!r}")
        return data

    def read_response(self, path: Path, y_col: str | None = None) -> npt.NDArray[np.float64]:
        frame, y_col = self._load(path, y_col)
        try:
            Y = frame[y_col].to_numpy(dtype=float)
        except ValueError as exc:
            raise DataFormatError(f"non-numeric response in {path}: {exc}") from exc
        if Y.size < 2 or not np.all(np.isfinite(Y)):
            raise DataFormatError(f"response in {path} needs at least two finite values")
        return Y

    def write_dataset(self, data: Dataset, path: Path) -> Path:
        frame = pd.DataFrame(data.X, columns=[f"x{j + 1}" for j in range(data.p)])
        frame[RESPONSE_COLUMN] = data.Y
        return self.write_frame(frame, path)

    def write_frame(self, frame: pd.DataFrame, path: Path) -> Path:
        frame.to_csv(path, index=False, float_format=self.float_format, lineterminator="\n", na_rep="")
        logger.info(f"[csv {path}] wrote {len(frame)} rows")
        return path

    @staticmethod
    def write_json(payload: dict[str, Any], path: Path) -> Path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(CsvAdapter.dumps(payload) + "\n")
        return path

    @staticmethod
    def dumps(payload: dict[str, Any]) -> str:
        return json.dumps(payload, ensure_ascii=False, indent=2, default=_json_default)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")
