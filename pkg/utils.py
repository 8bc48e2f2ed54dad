# utils.py
import json
import os
import time
from contextlib import contextmanager
from dataclasses import asdict, is_dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator

from dotenv import load_dotenv


load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent


def _env_int(key: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {raw!r}. Fix it in your .env file.")
    if value < minimum:
        raise ValueError(f"{key} must be >= {minimum}, got {value}.")
    return value


LOG_DIR = os.getenv("TAUFACT_LOG_DIR", "logs")
LOG_FILE = os.path.join(LOG_DIR, "taufact.jsonl")
LOG_LEVEL = os.getenv("TAUFACT_LOG_LEVEL", "INFO").upper()
BUG_REPORT_DIR = os.path.join(LOG_DIR, "bug_reports")

DEFAULT_MAX_LEN = _env_int("TAUFACT_MAX_LEN", 6, minimum=2)
IRR_MAX_LEN = _env_int("TAUFACT_IRR_MAX_LEN", 8, minimum=2)
BFR_SEARCH_LEN = _env_int("TAUFACT_BFR_SEARCH_LEN", 10, minimum=2)
CLIQUE_CENSUS_CAP = _env_int("TAUFACT_CENSUS_CAP", 1_000_000)
TABLE_LIMIT = _env_int("TAUFACT_TABLE_LIMIT", 2048)
EAGER_LIMIT = _env_int("TAUFACT_EAGER_LIMIT", 1 << 16)
SEARCH_NODE_BUDGET = _env_int("TAUFACT_SEARCH_BUDGET", 20_000_000)
SAMPLE_SEED = _env_int("TAUFACT_SAMPLE_SEED", 7, minimum=0)
PRODUCTS_FILE = os.getenv(
    "TAUFACT_PRODUCTS_FILE", str(PROJECT_ROOT / "data" / "corpus" / "products.json")
)


def to_jsonable(value: Any) -> Any:
    """Convert dataclasses, enums, sets and tuples into plain JSON values."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(value, key=repr)]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        # numpy scalars
        return value.item()
    return value


def write_bug_report(kind: str, report: Dict[str, Any]) -> str:
    """
    Persist a JSON bug report under BUG_REPORT_DIR and return its path.
    """
    os.makedirs(BUG_REPORT_DIR, exist_ok=True)
    stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
    path = os.path.join(BUG_REPORT_DIR, f"{kind}-{stamp}-{os.getpid()}.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(report), f, indent=2, sort_keys=True)
    return path


@contextmanager
def log_stage(log, stage: str, **ids: Any) -> Iterator[Dict[str, Any]]:
    """
    Emit `<stage>_start` / `<stage>_end` events around a block.

    The yielded dict is merged into the end event, so callers can attach
    result sizes. `ring` and `tau` ids are also set as top-level record fields.
    """
    top = {k: ids[k] for k in ("ring", "tau") if k in ids}
    log.info(f"{stage}_start", extra={"extra_data": dict(ids), **top})
    summary: Dict[str, Any] = {}
    started = time.perf_counter()
    try:
        yield summary
    except Exception as e:
        log.error(
            f"{stage}_error",
            extra={"extra_data": {**ids, "error": str(e), "error_type": type(e).__name__}, **top},
        )
        raise
    log.info(
        f"{stage}_end",
        extra={
            "extra_data": {
                **ids,
                **summary,
                "elapsed_ms": round((time.perf_counter() - started) * 1000, 2),
            },
            **top,
        },
    )
