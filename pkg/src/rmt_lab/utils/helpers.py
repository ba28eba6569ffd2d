"""
Run Management Utilities

This module provides logging setup, a parallel trial runner with
per-trial random substreams, and the CSV/JSON writers used by batch runs.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, TypeVar, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..config.settings import get_settings
from ..core.exceptions import InvalidArgumentError
from ..core.rng import RngStream

logger = logging.getLogger(__name__)

T = TypeVar("T")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Configure the package logger.

    Args:
        level: Level name, defaults to the configured log level

    Returns:
        The `rmt_lab` logger
    """
    settings = get_settings()
    if level is None:
        level = "DEBUG" if settings.debug else settings.log_level
    resolved = getattr(logging, str(level).upper(), logging.WARNING)

    root = logging.getLogger("rmt_lab")
    root.setLevel(resolved)
    if not root.handlers:
        # stderr only; stdout stays free for data
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    return root


class TrialRunner:
    """
    Runs independent Monte Carlo trials in a thread pool.

    Trial i always receives RngStream(seed, i), so results do not depend on
    the thread count or on scheduling order.
    """

    def __init__(self, seed: int, threads: Optional[int] = None, show_progress: Optional[bool] = None):
        """
        Initialize trial runner.

        Args:
            seed: Run seed
            threads: Worker count, defaults to the configured thread count
            show_progress: Show a tqdm bar, defaults to the configured value
        """
        settings = get_settings()
        self.seed = int(seed)
        self.threads = threads if threads is not None else settings.run.threads
        self.show_progress = settings.run.show_progress if show_progress is None else show_progress
        if self.threads < 1:
            raise InvalidArgumentError(f"threads must be at least 1, got {self.threads}")

    def stream(self, trial: int) -> RngStream:
        return RngStream(self.seed, trial)

    def run(self, trials: int, task: Callable[[RngStream], T], desc: str = "trials") -> List[T]:
        """
        Run `task` once per trial.

        Args:
            trials: Number of trials
            task: Callable receiving the trial's random stream
            desc: Progress bar label

        Returns:
            Results in trial order
        """
        if trials < 1:
            raise InvalidArgumentError(f"trials must be at least 1, got {trials}")
        logger.debug("Running %d %s on %d threads (seed %d)", trials, desc, self.threads, self.seed)

        def one(i: int) -> T:
            return task(self.stream(i))

        if self.threads == 1:
            indices: Iterable[int] = range(trials)
            if self.show_progress:
                indices = tqdm(indices, total=trials, desc=desc)
            return [one(i) for i in indices]

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            results = pool.map(one, range(trials))
            if self.show_progress:
                results = tqdm(results, total=trials, desc=desc)
            return list(results)


def _header_lines(metadata: Dict[str, Any]) -> List[str]:
    return [f"# {key}: {json.dumps(value, sort_keys=True, default=_json_default)}" for key, value in metadata.items()]


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_table(frame: pd.DataFrame, path: Union[str, Path], metadata: Optional[Dict[str, Any]] = None) -> Path:
    """
    Write a CSV table preceded by `# key: json` comment lines.

    Args:
        frame: Data with frozen column order
        path: Output file
        metadata: Header entries (version, run configuration)

    Returns:
        Path written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for line in _header_lines(metadata or {}):
            handle.write(line + "\n")
        frame.to_csv(handle, index=False, float_format="%.17g", lineterminator="\n")
    logger.info("Wrote %d rows to %s", len(frame), path)
    return path


def write_json(payload: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Write a JSON document with sorted keys."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True, default=_json_default)
        handle.write("\n")
    logger.info("Wrote %s", path)
    return path


def to_jsonable(value: Any) -> Any:
    """Round-trip through the JSON encoder used for output files."""
    return json.loads(json.dumps(value, default=_json_default))
