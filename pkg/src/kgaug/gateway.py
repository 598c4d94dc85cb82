"""Chat-completion gateway: OpenAI-style wire protocol, persistent response
caching, bounded retry, and batch orchestration.

The gateway is provider-agnostic: anything serving the common
``/v1/chat/completions`` JSON shape works, including the local stub server
shipped for tests (see :mod:`kgaug.stub`).  Credentials come from the
``KGAUG_API_KEY`` (or ``OPENAI_API_KEY``) environment variable and are never
written to logs or to the cache.

Caching is keyed on (model, template, entity, temperature, prompt digest)
and persisted as an append-only JSON-lines file, so rerunning a batch with a
warm cache performs zero network calls and reproduces identical outputs.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import requests

from .corpus import KnowledgeGraph
from .errors import ConfigError, GatewayError, PromptError, ProtocolError
from .prompts import PromptTemplate, TemplateSet, default_templates, render
from .routing import Action, RouteDecision

log = logging.getLogger(__name__)

RETRIABLE_STATUS = {429, 500, 502, 503, 504}


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class GenerationParams:
    model: str = "stub"
    temperature: float = 0.5
    max_tokens: int = 256
    timeout: float = 30.0
    max_temperature: float = 2.0  # provider-declared upper bound

    def __post_init__(self) -> None:
        if not (0.0 <= self.temperature <= self.max_temperature):
            raise ConfigError(
                f"temperature {self.temperature} outside [0, {self.max_temperature}]"
            )
        if self.max_tokens < 1:
            raise ConfigError("max_tokens must be positive")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")


@dataclass
class PromptJob:
    entity: str
    template_id: str
    prompt: str
    params: GenerationParams
    raw_response: str | None = None
    attempt_count: int = 0
    from_cache: bool = False
    error: str | None = None

    @property
    def completed(self) -> bool:
        return self.raw_response is not None

    def to_dict(self) -> dict:
        """Stable fields only; volatile bookkeeping (attempts, cache hits)
        stays out so artifacts are byte-identical across cold and warm runs."""
        return {
            "entity": self.entity,
            "template_id": self.template_id,
            "model": self.params.model,
            "temperature": self.params.temperature,
            "prompt_digest": prompt_digest(self.prompt),
            "prompt": self.prompt,
            "response": self.raw_response,
            "error": self.error,
        }


class ResponseCache:
    """Append-only on-disk response cache (JSON lines, one record per entry)."""

    def __init__(self, cache_dir: str | Path):
        self.path = Path(cache_dir) / "responses.jsonl"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: dict[tuple, str] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    self._entries[self._key_of(record)] = record["response"]

    @staticmethod
    def _key_of(record: dict) -> tuple:
        return (
            record["model"],
            record["template_id"],
            record["entity"],
            f"{record['temperature']:g}",
            record["digest"],
        )

    def key(self, model: str, template_id: str, entity: str, temperature: float, digest: str) -> tuple:
        return (model, template_id, entity, f"{temperature:g}", digest)

    def get(self, key: tuple) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def put(self, key: tuple, response: str) -> None:
        record = {
            "model": key[0],
            "template_id": key[1],
            "entity": key[2],
            "temperature": float(key[3]),
            "digest": key[4],
            "response": response,
            "ts": time.time(),
        }
        with self._lock:
            if key in self._entries:
                return
            self._entries[key] = response
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    def __len__(self) -> int:
        return len(self._entries)


def _api_key() -> str | None:
    return os.environ.get("KGAUG_API_KEY") or os.environ.get("OPENAI_API_KEY")


def complete(
    prompt: str,
    params: GenerationParams,
    endpoint: str,
    retries: int = 3,
    backoff: float = 1.0,
) -> tuple[str, int]:
    """Send one chat completion; return (content, attempts used).

    Network failures, timeouts, and retriable HTTP statuses back off
    exponentially; a malformed body is a protocol error and is not retried.
    """
    headers = {"Content-Type": "application/json"}
    key = _api_key()
    if key:
        headers["Authorization"] = f"Bearer {key}"
    body = {
        "model": params.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": params.temperature,
        "max_tokens": params.max_tokens,
    }
    attempts = 0
    last_error = "no attempts made"
    while attempts < max(1, retries):
        attempts += 1
        try:
            response = requests.post(endpoint, json=body, headers=headers, timeout=params.timeout)
        except requests.RequestException as exc:
            last_error = f"network error: {exc.__class__.__name__}"
            log.warning("completion attempt %d failed: %s", attempts, last_error)
        else:
            if response.status_code == 200:
                try:
                    payload = response.json()
                    content = payload["choices"][0]["message"]["content"]
                except (ValueError, KeyError, IndexError, TypeError) as exc:
                    raise ProtocolError(f"malformed completion body: {exc}") from exc
                if not isinstance(content, str):
                    raise ProtocolError("completion content is not a string")
                log.debug("completion ok (%d bytes, attempt %d)", len(content), attempts)
                return content, attempts
            if response.status_code in RETRIABLE_STATUS:
                last_error = f"HTTP {response.status_code}"
                log.warning("completion attempt %d got %s", attempts, last_error)
            else:
                raise GatewayError(f"endpoint rejected request: HTTP {response.status_code}")
        if attempts < max(1, retries):
            time.sleep(backoff * (2 ** (attempts - 1)))
    raise GatewayError(f"retries exhausted after {attempts} attempts ({last_error})")


@dataclass
class ChatGateway:
    """Drives batches of prompt jobs against one endpoint with caching."""

    endpoint: str
    cache: ResponseCache | None = None
    retries: int = 3
    backoff: float = 1.0
    max_concurrency: int = 4
    templates: TemplateSet = field(default_factory=default_templates)
    compress_template: str = "compress_generic"
    expand_template: str = "expand_freebase"
    request_count: int = 0

    def __post_init__(self) -> None:
        if self.max_concurrency < 1:
            raise ConfigError("max_concurrency must be >= 1")
        self._count_lock = threading.Lock()

    def _template_for(self, action: Action) -> PromptTemplate:
        if action == Action.COMPRESS:
            return self.templates.get(self.compress_template)
        return self.templates.get(self.expand_template)

    def _run_one(self, job: PromptJob) -> PromptJob:
        digest = prompt_digest(job.prompt)
        key = None
        if self.cache is not None:
            key = self.cache.key(
                job.params.model, job.template_id, job.entity, job.params.temperature, digest
            )
            hit = self.cache.get(key)
            if hit is not None:
                job.raw_response = hit
                job.from_cache = True
                job.attempt_count = 0
                return job
        try:
            content, attempts = complete(
                job.prompt, job.params, self.endpoint, retries=self.retries, backoff=self.backoff
            )
        except GatewayError as exc:
            job.error = str(exc)
            return job
        job.raw_response = content
        job.attempt_count = attempts
        with self._count_lock:
            self.request_count += attempts
        if self.cache is not None and key is not None:
            self.cache.put(key, content)
        return job

    def run_jobs(self, jobs: list[PromptJob]) -> list[PromptJob]:
        """Execute jobs concurrently; output order equals input order and a
        failed job never aborts the batch."""
        runnable = [j for j in jobs if j.error is None]
        with ThreadPoolExecutor(max_workers=self.max_concurrency) as pool:
            list(pool.map(self._run_one, runnable))
        return jobs

    def batch_augment(
        self,
        decisions: list[RouteDecision],
        graph: KnowledgeGraph,
        params: GenerationParams,
    ) -> list[PromptJob]:
        """One completed job per compress/expand decision; keeps are skipped."""
        jobs: list[PromptJob] = []
        for decision in decisions:
            if decision.action == Action.KEEP:
                continue
            record = graph.entities[graph.entity_index[decision.entity]]
            template = self._template_for(decision.action)
            job = PromptJob(entity=decision.entity, template_id=template.id, prompt="", params=params)
            try:
                job.prompt = render(template, record.name, record.description)
            except PromptError as exc:
                job.error = str(exc)
            jobs.append(job)
        return self.run_jobs(jobs)

    def temperature_sweep(
        self,
        decisions: list[RouteDecision],
        graph: KnowledgeGraph,
        temps: list[float],
        params: GenerationParams,
    ) -> dict[float, list[PromptJob]]:
        """One complete batch per temperature, each cached independently."""
        if not temps:
            raise ConfigError("temperature sweep needs at least one temperature")
        results: dict[float, list[PromptJob]] = {}
        for temp in temps:
            results[temp] = self.batch_augment(decisions, graph, replace(params, temperature=temp))
        return results
