"""Utility modules for logging, parallel trials and output files."""

from .helpers import TrialRunner, configure_logging, to_jsonable, write_json, write_table

__all__ = ["TrialRunner", "configure_logging", "write_table", "write_json", "to_jsonable"]
