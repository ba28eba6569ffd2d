"""Command-line batch driver."""

from .commands import execute, run
from .main import build_parser, main
from .schema import PARAM_MODELS, RunConfig

__all__ = ["RunConfig", "PARAM_MODELS", "run", "execute", "main", "build_parser"]
