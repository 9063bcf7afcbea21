"""
On-disk cache of boundary matrices.
One file per (complex name, degree) in the ratlin text form:
    rows cols nnz
    row col num den
"""
from __future__ import annotations

import os
import re
from typing import Optional, Tuple

from complexes.ratlin import SparseMatrix, from_text, to_text
from utils.logger import setup_logger

logger = setup_logger(__name__)


class MatrixCache:
    """Directory-backed store keyed by complex name and source degree."""

    def __init__(self, directory: str) -> None:
        self.directory = directory
        os.makedirs(directory, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, name: str, degree: int) -> str:
        safe = re.sub(r"[^A-Za-z0-9_.=-]+", "_", name)
        return os.path.join(self.directory, f"{safe}__d{degree}.mat")

    def fetch(self, name: str, degree: int, shape: Tuple[int, int]) -> Optional[SparseMatrix]:
        path = self.path(name, degree)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with open(path) as fh:
                m = from_text(fh.read())
        except (OSError, ValueError) as exc:
            logger.warning(f"Ignoring unreadable cache file {path}: {exc}")
            self.misses += 1
            return None
        if m.shape != shape:
            logger.warning(f"Cache shape mismatch for {path}: {m.shape} != {shape}")
            self.misses += 1
            return None
        self.hits += 1
        logger.debug(f"cache hit {path}")
        return m

    def put(self, name: str, degree: int, matrix: SparseMatrix) -> None:
        path = self.path(name, degree)
        try:
            with open(path, "w") as fh:
                fh.write(to_text(matrix))
        except OSError as exc:
            logger.error(f"Failed to write cache file {path}: {exc}")
