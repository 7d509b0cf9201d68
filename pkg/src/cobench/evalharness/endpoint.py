"""HTTP evaluation against an OpenAI-style chat completions endpoint.

Responses are persisted to JSONL as raw text keyed by instance id; metrics are
always rederived from the raw text, so a resumed run cannot drift from a fresh
one. Thinking blocks are stripped before parsing.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import requests

from ..problems.io import ReferenceSolution
from ..problems.types import Instance
from ..tai.encode import encode
from ..tai.parse import strip_thinking
from ..tai.render import render_prompt
from .metrics import EvalRecord, build_record, size_tier

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model_name: str
    temperature: float = 0.0
    top_p: float = 1.0
    max_tokens: int = 2048
    n_samples: int = 1
    timeout: float = 120.0
    max_parallel: int = 4
    retries: int = 3
    backoff: float = 1.0
    api_key_env: str = "COBENCH_API_KEY"

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be >= 1")


def _headers(cfg: EndpointConfig) -> Dict[str, str]:
    headers = {"Content-Type": "application/json"}
    key = os.environ.get(cfg.api_key_env, "")
    if key:
        headers["Authorization"] = f"Bearer {key}"
    return headers


def _post_once(cfg: EndpointConfig, prompt: str, n: int) -> List[str]:
    url = cfg.base_url.rstrip("/") + "/chat/completions"
    body = {
        "model": cfg.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature,
        "top_p": cfg.top_p,
        "max_tokens": cfg.max_tokens,
        "n": n,
    }
    resp = requests.post(url, json=body, headers=_headers(cfg), timeout=cfg.timeout)
    resp.raise_for_status()
    data = resp.json()
    return [c["message"]["content"] for c in data["choices"]]


def request_samples(cfg: EndpointConfig, prompt: str) -> List[str]:
    """Collect n_samples completions, retrying with exponential backoff and
    topping up one by one if the server returns fewer choices than asked."""
    texts: List[str] = []
    while len(texts) < cfg.n_samples:
        want = cfg.n_samples - len(texts)
        last_err: Optional[Exception] = None
        for attempt in range(cfg.retries + 1):
            try:
                got = _post_once(cfg, prompt, want)
                break
            except (requests.RequestException, KeyError, ValueError) as err:
                last_err = err
                if attempt == cfg.retries:
                    raise RuntimeError(
                        f"endpoint request failed after {cfg.retries + 1} attempts: {err}"
                    ) from err
                delay = cfg.backoff * (2**attempt)
                logger.warning("endpoint error (%s); retrying in %.1fs", err, delay)
                time.sleep(delay)
        if not got:
            raise RuntimeError(f"endpoint returned no choices: {last_err}")
        texts.extend(got[:want])
    return texts


def _load_existing(path: Path) -> Dict[str, List[str]]:
    rows: Dict[str, List[str]] = {}
    if not path.exists():
        return rows
    with path.open() as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            rows[row["instance_id"]] = row["raw_texts"]
    return rows


def _append_row(path: Path, instance_id: str, raw_texts: List[str], wall: float) -> None:
    with path.open("a") as fh:
        fh.write(
            json.dumps(
                {"instance_id": instance_id, "raw_texts": raw_texts, "wall_time": wall}
            )
            + "\n"
        )


def evaluate_endpoint(
    instances: Sequence[Instance],
    references: Dict[str, ReferenceSolution],
    cfg: EndpointConfig,
    out_path: Optional[Path] = None,
) -> List[EvalRecord]:
    """Sample completions for each instance and score them Best-of-N.

    When out_path is given, raw responses are appended there as JSONL and
    instances already present are not re-queried on a rerun. An instance whose
    requests fail even after retries yields a record with zero candidates (and
    is not persisted, so a rerun retries it); the batch itself never aborts."""
    existing: Dict[str, List[str]] = {}
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        existing = _load_existing(out_path)

    def fetch(inst: Instance) -> List[str]:
        prompt = render_prompt(encode(inst))
        return request_samples(cfg, prompt)

    records: List[EvalRecord] = []
    todo = [inst for inst in instances if inst.id not in existing]
    fetched: Dict[str, Optional[List[str]]] = {}
    times: Dict[str, float] = {}
    if todo:
        with ThreadPoolExecutor(max_workers=cfg.max_parallel) as pool:
            def timed(inst: Instance):
                t0 = time.perf_counter()
                try:
                    texts = fetch(inst)
                except RuntimeError as err:
                    logger.error("instance %s: %s", inst.id, err)
                    texts = None
                return inst.id, texts, time.perf_counter() - t0

            for iid, texts, wall in pool.map(timed, todo):
                fetched[iid] = texts
                times[iid] = wall
        if out_path is not None:
            for inst in todo:  # keep file order deterministic
                if fetched[inst.id] is not None:
                    _append_row(out_path, inst.id, fetched[inst.id], times[inst.id])
    for inst in instances:
        raw = existing.get(inst.id, fetched.get(inst.id))
        ref = references[inst.id]
        if raw is None:
            records.append(
                EvalRecord(
                    instance_id=inst.id,
                    kind=inst.kind,
                    size_tier=size_tier(inst),
                    candidates=(),
                    reference_objective=ref.objective,
                    selected_index=None,
                    gap=None,
                    wall_time=times.get(inst.id, 0.0),
                )
            )
            continue
        cleaned = [strip_thinking(t) for t in raw]
        records.append(
            build_record(inst, cleaned, ref.objective, times.get(inst.id, 0.0))
        )
    return records


def evaluate_with_policy(
    instances: Sequence[Instance],
    references: Dict[str, ReferenceSolution],
    policy: Callable[[Instance, int], str],
    n_samples: int,
    out_path: Optional[Path] = None,
) -> List[EvalRecord]:
    """Local twin of evaluate_endpoint driven by an in-process policy."""
    records: List[EvalRecord] = []
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
    for inst in instances:
        t0 = time.perf_counter()
        raw = [policy(inst, draw) for draw in range(n_samples)]
        wall = time.perf_counter() - t0
        if out_path is not None:
            _append_row(out_path, inst.id, raw, wall)
        ref = references[inst.id]
        cleaned = [strip_thinking(t) for t in raw]
        records.append(build_record(inst, cleaned, ref.objective, wall))
    return records
