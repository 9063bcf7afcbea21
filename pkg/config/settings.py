"""
Configuration settings, all loaded from .env via python-dotenv.
Flags given on the command line (and an optional permucell.toml) override these.
"""
import os
from dotenv import load_dotenv

load_dotenv()

# ── Paths ─────────────────────────────────────────────────────────────────────
LOG_DIR: str = os.getenv("PERMUCELL_LOG_DIR", "logs")
OUT_DIR: str = os.getenv("PERMUCELL_OUT_DIR", "out")
CACHE_DIR: str = os.getenv("PERMUCELL_CACHE", "")          # empty = no matrix cache

# ── Logging ───────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("PERMUCELL_LOG_LEVEL", "INFO").upper()

# ── Batch runs ────────────────────────────────────────────────────────────────
JOBS: int = int(os.getenv("PERMUCELL_JOBS", "1"))
SEED: int = int(os.getenv("PERMUCELL_SEED", "20240101"))

# ── Acceptance scales ─────────────────────────────────────────────────────────
MAX_PERM_N: int = int(os.getenv("MAX_PERM_N", "6"))               # P_{n-1}, n = 1..6
MAX_SIMPLEX_N: int = int(os.getenv("MAX_SIMPLEX_N", "8"))
EQUIVARIANCE_SAMPLES: int = int(os.getenv("EQUIVARIANCE_SAMPLES", "100"))
BRACKET_SAMPLES: int = int(os.getenv("BRACKET_SAMPLES", "20"))
HKR_PAIRS: int = int(os.getenv("HKR_PAIRS", "10"))
HOCH_MAX_DEG: int = int(os.getenv("HOCH_MAX_DEG", "6"))            # truncation D for chain maps
