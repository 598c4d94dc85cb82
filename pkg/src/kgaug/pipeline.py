"""End-to-end pipeline: stats -> route -> augment -> clean -> export ->
train -> eval -> compare, driven by one declarative TOML config.

Each stage persists its artifacts in the run directory and records input
digests, output digests, and timing in ``manifest.json``.  A stage whose
inputs, parameters, and outputs all match the manifest is skipped on rerun,
so deleting one stage's outputs and rerunning reproduces exactly that stage.

Transport knobs (endpoint URL, concurrency, retry policy) are deliberately
excluded from stage parameter digests: they do not change artifact content
(the response cache pins that), so manifests stay comparable across runs
against different servers.  The response cache lives outside the run
directory (default: ``cache/`` next to the config file) for the same reason.

One run directory is owned by one process at a time, enforced by a lockfile.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import assembly, cleaning, corpus, gateway, prompts, ranking, routing, training
from .errors import ConfigError, RunLockError
from .models import load_model, save_model
from .wordpiece import SubwordVocabulary, default_vocabulary

log = logging.getLogger(__name__)

STAGES = ("stats", "route", "augment", "clean", "export", "train", "eval", "compare")


@dataclass
class RunConfig:
    dataset_dir: Path
    adapter: str = "generic"
    vocab_path: Path | None = None
    budget: int = 30
    endpoint: str = ""
    model: str = "stub"
    temperature: float = 0.5
    max_tokens: int = 256
    timeout: float = 30.0
    max_concurrency: int = 4
    retries: int = 3
    backoff: float = 1.0
    cache_dir: Path | None = None
    template_file: Path | None = None
    compress_template: str = "compress_generic"
    expand_template: str = "expand_freebase"
    rules_path: Path | None = None
    export_format: str = "tsv"
    train: training.TrainConfig = field(default_factory=training.TrainConfig)
    train_family: str = "transe"
    eval_split: str = "test"
    eval_ties: str = "pessimistic"
    compare_baseline: Path | None = None
    seed: int = 0

    def validate(self) -> None:
        if not self.dataset_dir.is_dir():
            raise ConfigError(f"dataset directory not found: {self.dataset_dir}")
        for label, path in (
            ("vocab", self.vocab_path),
            ("template file", self.template_file),
            ("cleaning rules", self.rules_path),
            ("compare baseline", self.compare_baseline),
        ):
            if path is not None and not path.exists():
                raise ConfigError(f"{label} not found: {path}")
        if self.budget < 1:
            raise ConfigError("routing budget must be >= 1")
        if self.export_format not in ("tsv", "jsonl"):
            raise ConfigError(f"unknown export format {self.export_format!r}")
        corpus.get_adapter(self.adapter)


def _resolve(base: Path, value: str | None) -> Path | None:
    if not value:
        return None
    path = Path(value)
    return path if path.is_absolute() else (base / path)


def load_config(path: str | Path, overrides: dict[str, Any] | None = None) -> RunConfig:
    """Parse a TOML run config; ``overrides`` (CLI flags) win over the file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    base = path.parent.resolve()
    overrides = overrides or {}

    dataset = raw.get("dataset", {})
    tokenizer = raw.get("tokenizer", {})
    route_cfg = raw.get("routing", {})
    augment = raw.get("augment", {})
    clean_cfg = raw.get("cleaning", {})
    export_cfg = raw.get("export", {})
    train_cfg = raw.get("train", {})
    eval_cfg = raw.get("eval", {})
    compare_cfg = raw.get("compare", {})

    seed = int(overrides.get("seed", raw.get("seed", 0)))
    dataset_dir = _resolve(base, overrides.get("dataset_dir") or dataset.get("dir"))
    if dataset_dir is None:
        raise ConfigError("config is missing [dataset].dir")

    train_fields = {
        key: train_cfg[key]
        for key in (
            "dimension",
            "epochs",
            "batch_size",
            "learning_rate",
            "negatives",
            "margin",
            "adv_temperature",
            "reg_weight",
            "norm_order",
            "lr_decay",
        )
        if key in train_cfg
    }
    config = RunConfig(
        dataset_dir=dataset_dir,
        adapter=dataset.get("adapter", "generic"),
        vocab_path=_resolve(base, tokenizer.get("vocab")),
        budget=int(overrides.get("budget", route_cfg.get("budget", 30))),
        endpoint=str(overrides.get("endpoint", augment.get("endpoint", ""))),
        model=augment.get("model", "stub"),
        temperature=float(augment.get("temperature", 0.5)),
        max_tokens=int(augment.get("max_tokens", 256)),
        timeout=float(augment.get("timeout", 30.0)),
        max_concurrency=int(augment.get("max_concurrency", 4)),
        retries=int(augment.get("retries", 3)),
        backoff=float(augment.get("backoff", 1.0)),
        cache_dir=_resolve(base, augment.get("cache_dir")) or base / "cache",
        template_file=_resolve(base, augment.get("template_file")),
        compress_template=augment.get("compress_template", "compress_generic"),
        expand_template=augment.get("expand_template", "expand_freebase"),
        rules_path=_resolve(base, clean_cfg.get("rules")),
        export_format=export_cfg.get("format", "tsv"),
        train=training.TrainConfig(seed=seed, **train_fields),
        train_family=train_cfg.get("family", "transe"),
        eval_split=eval_cfg.get("split", "test"),
        eval_ties=eval_cfg.get("ties", "pessimistic"),
        compare_baseline=_resolve(base, compare_cfg.get("baseline")),
        seed=seed,
    )
    config.validate()
    return config


def file_digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def params_digest(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class RunLock:
    def __init__(self, run_dir: Path):
        self.path = run_dir / ".lock"

    def __enter__(self) -> "RunLock":
        try:
            fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise RunLockError(
                f"run directory is locked by another process ({self.path}); "
                "remove the lockfile if that process is gone"
            ) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        return self

    def __exit__(self, *exc) -> None:
        try:
            self.path.unlink()
        except FileNotFoundError:
            pass


class PipelineRun:
    """Executes the stage sequence against one run directory."""

    def __init__(self, config: RunConfig, run_dir: str | Path):
        self.config = config
        self.run_dir = Path(run_dir)
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.run_dir / "manifest.json"
        self.manifest: dict = {"version": 1, "stages": {}}
        if self.manifest_path.exists():
            self.manifest = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        self._graph: corpus.KnowledgeGraph | None = None
        self._vocab: SubwordVocabulary | None = None
        self._stub_requests = 0

    # --- shared lazy state -------------------------------------------------
    @property
    def graph(self) -> corpus.KnowledgeGraph:
        if self._graph is None:
            self._graph = corpus.load_dataset(self.config.dataset_dir, self.config.adapter)
        return self._graph

    @property
    def vocab(self) -> SubwordVocabulary:
        if self._vocab is None:
            if self.config.vocab_path is not None:
                self._vocab = SubwordVocabulary.load(self.config.vocab_path)
            else:
                self._vocab = default_vocabulary()
        return self._vocab

    def _templates(self) -> prompts.TemplateSet:
        if self.config.template_file is not None:
            return prompts.TemplateSet.load(self.config.template_file)
        return prompts.default_templates()

    def _rules(self) -> cleaning.RuleSet:
        if self.config.rules_path is not None:
            return cleaning.RuleSet.load(self.config.rules_path)
        return cleaning.default_rules()

    # --- digest helpers ----------------------------------------------------
    def _dataset_inputs(self) -> dict[str, str]:
        adapter = corpus.get_adapter(self.config.adapter)
        inputs: dict[str, str] = {}
        names = list(corpus.SPLIT_FILES.values()) + [
            adapter.entity_file,
            adapter.description_file,
            adapter.relation_file,
        ]
        for name in names:
            path = self.config.dataset_dir / name
            if path.exists():
                inputs[f"dataset/{name}"] = file_digest(path)
        return inputs

    def _vocab_input(self) -> dict[str, str]:
        path = self.config.vocab_path or (Path(__file__).parent / "resources" / "vocab.txt")
        return {"vocab": file_digest(path)}

    def _templates_input(self) -> dict[str, str]:
        path = self.config.template_file or (Path(__file__).parent / "resources" / "templates.json")
        return {"templates": file_digest(path)}

    def _rules_input(self) -> dict[str, str]:
        path = self.config.rules_path or (Path(__file__).parent / "resources" / "clean_rules.json")
        return {"rules": file_digest(path)}

    def _run_input(self, *relpaths: str) -> dict[str, str]:
        out = {}
        for rel in relpaths:
            path = self.run_dir / rel
            if path.exists():
                out[f"run/{rel}"] = file_digest(path)
        return out

    # --- stage framework ----------------------------------------------------
    def _record(self, name: str, record: dict) -> None:
        self.manifest["stages"][name] = record
        self.manifest_path.write_text(
            json.dumps(self.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def _up_to_date(self, name: str, inputs: dict[str, str], params: str) -> bool:
        prior = self.manifest["stages"].get(name)
        if not prior or prior.get("status") not in ("ran", "skipped"):
            return False
        if prior.get("params") != params or prior.get("inputs") != inputs:
            return False
        for rel, digest in prior.get("outputs", {}).items():
            path = self.run_dir / rel
            if not path.exists() or file_digest(path) != digest:
                return False
        return True

    def _run_stage(
        self,
        name: str,
        inputs: dict[str, str],
        params: dict,
        action: Callable[[], list[Path]],
    ) -> None:
        digest = params_digest(params)
        if self._up_to_date(name, inputs, digest):
            prior = self.manifest["stages"][name]
            self._record(
                name,
                {**prior, "status": "skipped", "elapsed_s": 0.0},
            )
            log.info("stage %s: up to date, skipped", name)
            return
        start = time.time()
        try:
            outputs = action()
        except Exception as exc:
            self._record(
                name,
                {
                    "status": "failed",
                    "params": digest,
                    "inputs": inputs,
                    "outputs": {},
                    "elapsed_s": round(time.time() - start, 3),
                    "error": f"{exc.__class__.__name__}: {exc}",
                },
            )
            raise
        output_digests = {
            str(path.relative_to(self.run_dir)): file_digest(path) for path in outputs
        }
        self._record(
            name,
            {
                "status": "ran",
                "params": digest,
                "inputs": inputs,
                "outputs": output_digests,
                "elapsed_s": round(time.time() - start, 3),
            },
        )
        log.info("stage %s: ran (%d outputs)", name, len(output_digests))

    # --- stages --------------------------------------------------------------
    def stage_stats(self) -> None:
        inputs = {**self._dataset_inputs(), **self._vocab_input()}
        params = {"adapter": self.config.adapter}

        def action() -> list[Path]:
            stats = corpus.graph_stats(self.graph, self.vocab)
            poly = corpus.polysemy_groups(self.graph)
            payload = {
                "stats": stats.to_dict(),
                "polysemy": poly.to_dict(),
                "reference_mismatches": (
                    corpus.check_reference_stats(stats)
                    if stats.dataset in corpus.REFERENCE_STATS
                    else None
                ),
            }
            out = self.run_dir / "stats.json"
            out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            return [out]

        self._run_stage("stats", inputs, params, action)

    def stage_route(self) -> None:
        inputs = {**self._dataset_inputs(), **self._vocab_input()}
        params = {"budget": self.config.budget, "adapter": self.config.adapter}

        def action() -> list[Path]:
            decisions = routing.route(self.graph, self.config.budget, self.vocab)
            out = self.run_dir / "decisions.jsonl"
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                for decision in decisions:
                    fh.write(json.dumps(decision.to_dict(), ensure_ascii=False) + "\n")
            return [out]

        self._run_stage("route", inputs, params, action)

    def _read_decisions(self) -> list[routing.RouteDecision]:
        path = self.run_dir / "decisions.jsonl"
        decisions = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    record = json.loads(line)
                    decisions.append(
                        routing.RouteDecision(
                            entity=record["entity"],
                            length=record["length"],
                            budget=record["budget"],
                            action=routing.Action(record["action"]),
                        )
                    )
        return decisions

    def stage_augment(self) -> None:
        inputs = {
            **self._run_input("decisions.jsonl"),
            **self._dataset_inputs(),
            **self._templates_input(),
        }
        params = {
            "model": self.config.model,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
            "compress_template": self.config.compress_template,
            "expand_template": self.config.expand_template,
        }

        def action() -> list[Path]:
            if not self.config.endpoint:
                raise ConfigError("augment stage requires [augment].endpoint")
            cache = gateway.ResponseCache(self.config.cache_dir)
            gw = gateway.ChatGateway(
                endpoint=self.config.endpoint,
                cache=cache,
                retries=self.config.retries,
                backoff=self.config.backoff,
                max_concurrency=self.config.max_concurrency,
                templates=self._templates(),
                compress_template=self.config.compress_template,
                expand_template=self.config.expand_template,
            )
            params_obj = gateway.GenerationParams(
                model=self.config.model,
                temperature=self.config.temperature,
                max_tokens=self.config.max_tokens,
                timeout=self.config.timeout,
            )
            jobs = gw.batch_augment(self._read_decisions(), self.graph, params_obj)
            self._stub_requests = gw.request_count
            out = self.run_dir / "jobs.jsonl"
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                for job in jobs:
                    fh.write(json.dumps(job.to_dict(), ensure_ascii=False) + "\n")
            return [out]

        self._run_stage("augment", inputs, params, action)

    def stage_clean(self) -> None:
        inputs = {
            **self._run_input("jobs.jsonl"),
            **self._dataset_inputs(),
            **self._rules_input(),
        }
        params = {"rules": "custom" if self.config.rules_path else "default"}

        def action() -> list[Path]:
            rules = self._rules()
            templates = self._templates()
            outcomes: list[cleaning.CleanOutcome] = []
            failed: list[str] = []
            with open(self.run_dir / "jobs.jsonl", encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    job = json.loads(line)
                    if job.get("response") is None:
                        failed.append(job["entity"])
                        continue
                    record = self.graph.entities[self.graph.entity_index[job["entity"]]]
                    kind = templates.get(job["template_id"]).kind
                    action_kind = (
                        routing.Action.COMPRESS if kind == prompts.COMPRESS else routing.Action.EXPAND
                    )
                    outcomes.append(
                        cleaning.clean_response(
                            job["response"],
                            action_kind,
                            record.name,
                            record.description,
                            entity=job["entity"],
                            rules=rules,
                        )
                    )
            out_path = self.run_dir / "outcomes.jsonl"
            with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
                for outcome in outcomes:
                    fh.write(json.dumps(outcome.to_dict(), ensure_ascii=False) + "\n")
            report = {
                "counts": cleaning.reason_counts(outcomes),
                "effective_rate": cleaning.effective_rate(outcomes) if outcomes else None,
                "failed_jobs": failed,
            }
            report_path = self.run_dir / "clean_report.json"
            report_path.write_text(
                json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            return [out_path, report_path]

        self._run_stage("clean", inputs, params, action)

    def _augmented_graph(self) -> corpus.KnowledgeGraph:
        texts: dict[str, str] = {}
        outcomes_path = self.run_dir / "outcomes.jsonl"
        if outcomes_path.exists():
            with open(outcomes_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        record = json.loads(line)
                        if record["effective"]:
                            texts[record["entity"]] = record["text"]
        return corpus.with_augmentations(self.graph, texts)

    def stage_export(self) -> None:
        inputs = {**self._run_input("outcomes.jsonl"), **self._dataset_inputs()}
        params = {"format": self.config.export_format}

        def action() -> list[Path]:
            return assembly.export(
                self._augmented_graph(), self.config.export_format, self.run_dir / "export"
            )

        self._run_stage("export", inputs, params, action)

    def stage_train(self) -> None:
        export_inputs = self._run_input(
            *[f"export/{name}" for name in corpus.SPLIT_FILES.values()]
        )
        params = {
            "family": self.config.train_family,
            "seed": self.config.seed,
            **{k: getattr(self.config.train, k) for k in (
                "dimension", "epochs", "batch_size", "learning_rate", "negatives",
                "margin", "adv_temperature", "reg_weight", "norm_order", "lr_decay",
            )},
        }

        def action() -> list[Path]:
            model = training.train(self._augmented_graph(), self.config.train_family, self.config.train)
            out = self.run_dir / "model.kgem"
            save_model(model, out)
            return [out]

        self._run_stage("train", export_inputs, params, action)

    def stage_eval(self) -> None:
        inputs = self._run_input("model.kgem")
        params = {"split": self.config.eval_split, "ties": self.config.eval_ties}

        def action() -> list[Path]:
            model = load_model(self.run_dir / "model.kgem")
            report = ranking.evaluate(
                model, self.graph, split=self.config.eval_split, ties=self.config.eval_ties
            )
            out = self.run_dir / "eval.json"
            report.save(out)
            table = self.run_dir / "eval.txt"
            table.write_text(report.table() + "\n", encoding="utf-8")
            return [out, table]

        self._run_stage("eval", inputs, params, action)

    def stage_compare(self) -> None:
        inputs = self._run_input("eval.json")
        baseline = self.config.compare_baseline
        if baseline is not None:
            inputs["baseline"] = file_digest(baseline)
        params = {"baseline": str(baseline) if baseline else None}

        def action() -> list[Path]:
            out = self.run_dir / "compare.json"
            if baseline is None:
                out.write_text(
                    json.dumps({"baseline": None, "note": "no baseline configured"}, indent=2)
                    + "\n",
                    encoding="utf-8",
                )
                return [out]
            base_report = ranking.RankReport.load(baseline)
            this_report = ranking.RankReport.load(self.run_dir / "eval.json")
            delta = ranking.compare_reports(base_report, this_report)
            payload = {"baseline": baseline.name, **delta.to_dict()}
            out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
            table = self.run_dir / "compare.txt"
            table.write_text(delta.table() + "\n", encoding="utf-8")
            return [out, table]

        self._run_stage("compare", inputs, params, action)

    def execute(self) -> dict:
        with RunLock(self.run_dir):
            self.stage_stats()
            self.stage_route()
            self.stage_augment()
            self.stage_clean()
            self.stage_export()
            self.stage_train()
            self.stage_eval()
            self.stage_compare()
        return self.manifest


def run_pipeline(config: RunConfig, run_dir: str | Path) -> dict:
    """Execute the full pipeline; returns the manifest."""
    return PipelineRun(config, run_dir).execute()
