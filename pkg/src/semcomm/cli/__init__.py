"""Command-line surface: ``semcomm data-fetch|data-verify|train|eval|sweep|plot``."""

from .config import ResolvedConfig, RunConfig, load_config
from .main import create_parser, main

__all__ = ["ResolvedConfig", "RunConfig", "create_parser", "load_config", "main"]
