"""
Corpus sweeps: range-spec parsing and the parallel runner.

Every entry runs the per-ring pipeline in `taufact.workflow`; entries are
independent, so `--jobs N` farms them out to a process pool while the
results are still emitted in input order.
"""

from __future__ import annotations

import asyncio
import json
import re
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations_with_replacement
from typing import Any, AsyncIterator, Dict, List, Optional, Sequence

from logger import get_logger
from taufact.errors import RingSpecError, TauRelationError
from taufact.structures.ring import parse_spec
from taufact.structures.taurel import CORPUS_TAUS
from taufact.workflow import run_corpus_entry
from utils import BFR_SEARCH_LEN, DEFAULT_MAX_LEN, PRODUCTS_FILE, log_stage

log = get_logger()

FIELD_ATOMS = ("GF(2)", "GF(3)", "GF(5)")

_RANGE_RE = re.compile(r"Z/(\d+)\.\.Z/(\d+)")
_FIELDS_RE = re.compile(r"products:fields:n<=(\d+)")


def load_products(path: Optional[str] = None) -> List[str]:
    """The configured product rings (a JSON list of spec strings)."""
    path = path or PRODUCTS_FILE
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise RingSpecError(f"cannot load configured products from {path}: {e}")
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise RingSpecError(f"{path} must hold a JSON list of ring specs")
    for spec in raw:
        parse_spec(spec)
    return raw


def field_products(max_factors: int) -> List[str]:
    """All multisets of 2..max_factors factors drawn from GF(2), GF(3), GF(5)."""
    if max_factors < 2:
        raise RingSpecError(f"products:fields:n<={max_factors} needs n >= 2")
    out = []
    for size in range(2, max_factors + 1):
        for combo in combinations_with_replacement(FIELD_ATOMS, size):
            out.append(" x ".join(combo))
    return out


def parse_range(text: str) -> List[str]:
    """
    Expand a range spec into ring specs, keeping order and dropping repeats.

    Items are comma separated: `Z/a..Z/b`, `products`, `products:fields:n<=N`
    or any single ring spec. A comma inside `GF(..)` never occurs, so a
    plain split is enough.
    """
    specs: List[str] = []
    for item in (part.strip() for part in (text or "").split(",")):
        if not item:
            continue
        compact = re.sub(r"\s+", "", item)
        m = _RANGE_RE.fullmatch(compact)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo < 2 or hi < lo:
                raise RingSpecError(f"bad range {item!r}: need 2 <= a <= b")
            specs += [f"Z/{n}" for n in range(lo, hi + 1)]
            continue
        if compact == "products":
            specs += load_products()
            continue
        m = _FIELDS_RE.fullmatch(compact)
        if m:
            specs += field_products(int(m.group(1)))
            continue
        specs.append(str(parse_spec(item)))

    if not specs:
        raise RingSpecError(f"range spec {text!r} names no rings")
    return list(dict.fromkeys(specs))


def parse_taus(text: str) -> List[str]:
    names = [name.strip() for name in (text or "").split(",") if name.strip()]
    unknown = [name for name in names if name not in CORPUS_TAUS]
    if unknown or not names:
        raise TauRelationError(
            f"unknown corpus relations {unknown or [text]!r}; choose from {', '.join(CORPUS_TAUS)}"
        )
    return list(dict.fromkeys(names))


def build_entries(
    specs: Sequence[str],
    taus: Sequence[str],
    max_len: Optional[int] = None,
    bfr_len: Optional[int] = None,
) -> List[Dict[str, Any]]:
    return [
        {
            "ring_spec": spec,
            "taus": list(taus),
            "max_len": max_len if max_len is not None else DEFAULT_MAX_LEN,
            "bfr_len": bfr_len if bfr_len is not None else BFR_SEARCH_LEN,
        }
        for spec in specs
    ]


async def aiter_corpus(entries: Sequence[Dict[str, Any]], jobs: int = 1) -> AsyncIterator[Dict[str, Any]]:
    """
    Yield one result per entry, in input order.

    With jobs > 1 all entries are submitted to a process pool up front and
    awaited in order; with jobs == 1 they run in this process.
    """
    if jobs <= 1:
        for entry in entries:
            yield run_corpus_entry(entry)
        return

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [loop.run_in_executor(pool, run_corpus_entry, entry) for entry in entries]
        for future in futures:
            yield await future


async def arun_corpus(entries: Sequence[Dict[str, Any]], jobs: int = 1) -> List[Dict[str, Any]]:
    with log_stage(log, "corpus", entries=len(entries), jobs=jobs) as counts:
        results = [result async for result in aiter_corpus(entries, jobs)]
        summary = summarize(results)
        counts.update({k: v for k, v in summary.items() if k not in ("violated", "bug_reports")})
    return results


def run_corpus(entries: Sequence[Dict[str, Any]], jobs: int = 1) -> List[Dict[str, Any]]:
    """
    Synchronous wrapper around `arun_corpus` for scripts.

    Inside an event loop (pytest-asyncio, notebooks) await `arun_corpus` instead.
    """
    return asyncio.run(arun_corpus(entries, jobs))


def summarize(results: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    """Counts plus every violated invariant, keyed `ring_spec / tau / check`."""
    violated: Dict[str, int] = {}
    skipped = 0
    records = 0
    for result in results:
        records += len(result.get("records", []))
        skipped += sum(1 for r in result.get("records", []) if r.get("status") == "skipped")
        for v in result.get("violations", []):
            key = f"{v['ring_spec']} / {v['tau']} / {v['check']}"
            violated[key] = violated.get(key, 0) + 1
    return {
        "rings": len(results),
        "records": records,
        "skipped": skipped,
        "violations": sum(violated.values()),
        "violated": violated,
        "bug_reports": [p for result in results for p in result.get("bug_reports", [])],
        "passed": not violated,
    }
