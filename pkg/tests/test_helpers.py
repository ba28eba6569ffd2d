"""Trial runner, output writers and logging setup."""

import json
import logging

import numpy as np
import pandas as pd
import pytest

from rmt_lab.core.exceptions import InvalidArgumentError
from rmt_lab.utils.helpers import TrialRunner, configure_logging, to_jsonable, write_json, write_table


class TestTrialRunner:
    def test_results_do_not_depend_on_threads(self):
        def task(rng):
            return float(rng.normal())

        serial = TrialRunner(17, threads=1, show_progress=False).run(12, task)
        pooled = TrialRunner(17, threads=4, show_progress=False).run(12, task)
        assert serial == pooled

    def test_trial_streams_are_distinct(self):
        values = TrialRunner(19, threads=1, show_progress=False).run(5, lambda rng: float(rng.normal()))
        assert len(set(values)) == 5

    def test_invalid_counts(self):
        with pytest.raises(InvalidArgumentError):
            TrialRunner(0, threads=0)
        with pytest.raises(InvalidArgumentError):
            TrialRunner(0, threads=1).run(0, lambda rng: None)


class TestWriters:
    def test_table_header_and_values(self, tmp_path, test_helpers):
        frame = pd.DataFrame({"x": [0.1, 1.0 / 3.0], "k": [1, 2]})
        path = write_table(frame, tmp_path / "nested" / "table.csv", {"version": "1.0.0", "config": {"n": 4}})
        assert test_helpers.read_csv_header(path) == ['# version: "1.0.0"', '# config: {"n": 4}']
        loaded = pd.read_csv(path, comment="#")
        assert list(loaded.columns) == ["x", "k"]
        assert loaded["x"].iloc[1] == 1.0 / 3.0

    def test_json_handles_numpy_and_complex(self, tmp_path):
        path = write_json({"z": 1 + 2j, "a": np.arange(3), "v": np.float64(0.5)}, tmp_path / "out.json")
        data = json.loads(path.read_text(encoding="utf-8"))
        assert data == {"a": [0, 1, 2], "v": 0.5, "z": [1.0, 2.0]}

    def test_to_jsonable_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            to_jsonable({"x": object()})


def test_configure_logging_level():
    logger = configure_logging("DEBUG")
    assert logger.name == "rmt_lab"
    assert logger.level == logging.DEBUG
    configure_logging("WARNING")
