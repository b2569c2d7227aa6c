"""
Utility functions for emforge
"""
import json
import logging
import time
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

# Root of every module logger (src.algebra.fin_ab, src.simplicial.core, ...)
PACKAGE_LOGGER = __name__.split('.')[0]


def setup_logging(log_level: str = 'INFO', log_file: str = None) -> logging.Logger:
    """
    Set up logging configuration

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Optional log file path

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    logger.setLevel(getattr(logging, log_level.upper()))

    # Drop handlers left by an earlier call
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # Console handler
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler (optional)
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """
    Create an independent, reproducible random generator

    Args:
        seed: Root seed recorded in reports
        stream: Integers naming the sub-stream (for example a level)

    Returns:
        numpy Generator seeded from the spawned SeedSequence
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.default_rng(sequence)


class Stopwatch:
    """Context manager measuring wall-clock time"""

    def __init__(self):
        self.started = None
        self.elapsed = 0.0

    def __enter__(self):
        self.started = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.started
        return False


def dump_json(document: Dict[str, Any], path: Optional[str] = None) -> str:
    """
    Serialize a report deterministically

    Args:
        document: JSON-compatible dictionary
        path: Optional output file; the text is returned either way

    Returns:
        The serialized text
    """
    text = json.dumps(document, indent=2, sort_keys=True) + '\n'
    if path:
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
    return text


def render_table(rows: Sequence[Dict[str, Any]], columns: List[str]) -> str:
    """
    Render result rows as an aligned text table

    Args:
        rows: One dictionary per row
        columns: Column order

    Returns:
        Table text without the index column
    """
    if not rows:
        return '(no rows)'
    frame = pd.DataFrame(list(rows), columns=columns)
    return frame.to_string(index=False)
