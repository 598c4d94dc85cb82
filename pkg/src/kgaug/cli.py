"""Command-line entry point.

Every subcommand is a thin file-I/O wrapper over one library operation; the
`run` subcommand executes the whole pipeline from a TOML config into a run
directory.  Errors exit with one code per class: 2 configuration, 3 dataset
parsing, 4 endpoint/network, 5 training divergence, 6 I/O or locking.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import assembly, cleaning, corpus, gateway, pipeline, prompts, ranking, routing, training
from .errors import KgaugError
from .models import load_model, save_model
from .wordpiece import SubwordVocabulary, default_vocabulary


def _vocab(path: str | None) -> SubwordVocabulary:
    return SubwordVocabulary.load(path) if path else default_vocabulary()


def _graph(data: str, adapter: str) -> corpus.KnowledgeGraph:
    return corpus.load_dataset(data, adapter)


data_opt = click.option("--data", required=True, help="dataset directory")
adapter_opt = click.option("--adapter", default="generic", show_default=True, help="dataset adapter")
vocab_opt = click.option("--vocab", default=None, help="vocabulary file (default: shipped)")


@click.group()
def cli() -> None:
    """Entity-description augmentation and link-prediction evaluation."""


@cli.command()
@data_opt
@adapter_opt
@vocab_opt
@click.option("--check", is_flag=True, help="compare counts against reference statistics")
def stats(data: str, adapter: str, vocab: str | None, check: bool) -> None:
    """Dataset statistics (counts, description lengths, polysemy) as JSON."""
    graph = _graph(data, adapter)
    report = corpus.graph_stats(graph, _vocab(vocab))
    payload = report.to_dict()
    payload["polysemy"] = corpus.polysemy_groups(graph).to_dict()
    if check:
        mismatches = corpus.check_reference_stats(report)
        payload["reference_mismatches"] = mismatches
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
        if mismatches:
            raise KgaugError("reference statistics mismatch: " + "; ".join(mismatches))
        return
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@cli.command()
@data_opt
@adapter_opt
@vocab_opt
@click.option("--budget", type=int, required=True, help="truncation budget L_max")
@click.option("--out", default="decisions.jsonl", show_default=True)
def route(data: str, adapter: str, vocab: str | None, budget: int, out: str) -> None:
    """Route each entity to compress / expand / keep by token length."""
    decisions = routing.route(_graph(data, adapter), budget, _vocab(vocab))
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for decision in decisions:
            fh.write(json.dumps(decision.to_dict(), ensure_ascii=False) + "\n")
    click.echo(json.dumps(routing.route_counts(decisions)))


def _read_decisions(path: str) -> list[routing.RouteDecision]:
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


@cli.command()
@data_opt
@adapter_opt
@click.option("--decisions", "decisions_path", required=True, help="decisions.jsonl from `route`")
@click.option("--endpoint", required=True, help="chat-completions URL")
@click.option("--model", default="stub", show_default=True)
@click.option(
    "--temperature",
    default="0.5",
    show_default=True,
    help="sampling temperature; a comma-separated list runs a sweep",
)
@click.option("--max-tokens", type=int, default=256, show_default=True)
@click.option("--max-concurrency", type=int, default=4, show_default=True)
@click.option("--cache-dir", default="cache", show_default=True)
@click.option("--template-file", default=None, help="custom template JSON")
@click.option("--compress-template", default="compress_generic", show_default=True)
@click.option("--expand-template", default="expand_freebase", show_default=True)
@click.option("--out", default="jobs.jsonl", show_default=True)
def augment(
    data: str,
    adapter: str,
    decisions_path: str,
    endpoint: str,
    model: str,
    temperature: str,
    max_tokens: int,
    max_concurrency: int,
    cache_dir: str,
    template_file: str | None,
    compress_template: str,
    expand_template: str,
    out: str,
) -> None:
    """Generate augmentation responses for routed entities."""
    graph = _graph(data, adapter)
    decisions = _read_decisions(decisions_path)
    templates = prompts.TemplateSet.load(template_file) if template_file else prompts.default_templates()
    gw = gateway.ChatGateway(
        endpoint=endpoint,
        cache=gateway.ResponseCache(cache_dir),
        max_concurrency=max_concurrency,
        templates=templates,
        compress_template=compress_template,
        expand_template=expand_template,
    )
    temps = [float(item) for item in temperature.split(",")]
    params = gateway.GenerationParams(model=model, temperature=temps[0], max_tokens=max_tokens)
    if len(temps) == 1:
        jobs = gw.batch_augment(decisions, graph, params)
        _write_jobs(out, jobs)
        click.echo(f"{sum(1 for j in jobs if j.completed)}/{len(jobs)} jobs completed -> {out}")
        return
    sweeps = gw.temperature_sweep(decisions, graph, temps, params)
    base = Path(out)
    for temp, jobs in sweeps.items():
        path = base.with_name(f"{base.stem}_t{temp:g}{base.suffix}")
        _write_jobs(path, jobs)
        click.echo(f"t={temp:g}: {sum(1 for j in jobs if j.completed)}/{len(jobs)} jobs -> {path}")


def _write_jobs(path: str | Path, jobs: list[gateway.PromptJob]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for job in jobs:
            fh.write(json.dumps(job.to_dict(), ensure_ascii=False) + "\n")


@cli.command()
@data_opt
@adapter_opt
@click.option("--jobs", "jobs_path", required=True, help="jobs.jsonl from `augment`")
@click.option("--rules", default=None, help="cleaning rule file (default: shipped)")
@click.option("--template-file", default=None, help="custom template JSON")
@click.option("--out", default="outcomes.jsonl", show_default=True)
@click.option("--report", "report_path", default=None, help="also write a reason-count report")
def clean(
    data: str,
    adapter: str,
    jobs_path: str,
    rules: str | None,
    template_file: str | None,
    out: str,
    report_path: str | None,
) -> None:
    """Clean raw responses into effective/ineffective outcomes."""
    graph = _graph(data, adapter)
    rule_set = cleaning.RuleSet.load(rules) if rules else cleaning.default_rules()
    templates = prompts.TemplateSet.load(template_file) if template_file else prompts.default_templates()
    outcomes: list[cleaning.CleanOutcome] = []
    failed: list[str] = []
    with open(jobs_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            job = json.loads(line)
            if job.get("response") is None:
                failed.append(job["entity"])
                continue
            record = graph.entities[graph.entity_index[job["entity"]]]
            kind = templates.get(job["template_id"]).kind
            action = routing.Action.COMPRESS if kind == prompts.COMPRESS else routing.Action.EXPAND
            outcomes.append(
                cleaning.clean_response(
                    job["response"], action, record.name, record.description,
                    entity=job["entity"], rules=rule_set,
                )
            )
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for outcome in outcomes:
            fh.write(json.dumps(outcome.to_dict(), ensure_ascii=False) + "\n")
    summary = {
        "counts": cleaning.reason_counts(outcomes),
        "effective_rate": cleaning.effective_rate(outcomes) if outcomes else None,
        "failed_jobs": failed,
    }
    if report_path:
        Path(report_path).write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    click.echo(json.dumps(summary["counts"]))


@cli.command()
@data_opt
@adapter_opt
@click.option("--outcomes", "outcomes_path", default=None, help="outcomes.jsonl from `clean`")
@click.option("--format", "format_id", type=click.Choice(["tsv", "jsonl"]), default="tsv", show_default=True)
@click.option("--out", required=True, help="output directory")
def export(data: str, adapter: str, outcomes_path: str | None, format_id: str, out: str) -> None:
    """Export the (augmented) dataset for downstream trainers."""
    graph = _graph(data, adapter)
    if outcomes_path:
        texts = {}
        with open(outcomes_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    record = json.loads(line)
                    if record["effective"]:
                        texts[record["entity"]] = record["text"]
        graph = corpus.with_augmentations(graph, texts)
    written = assembly.export(graph, format_id, out)
    click.echo(f"wrote {len(written)} files to {out}")


@cli.command()
@data_opt
@adapter_opt
@click.option("--family", type=click.Choice(list(training.FAMILIES)), required=True)
@click.option("--dim", type=int, default=128, show_default=True)
@click.option("--epochs", type=int, default=200, show_default=True)
@click.option("--batch-size", type=int, default=256, show_default=True)
@click.option("--lr", type=float, default=0.05, show_default=True)
@click.option("--negatives", type=int, default=8, show_default=True)
@click.option("--margin", type=float, default=4.0, show_default=True)
@click.option("--adv-temperature", type=float, default=1.0, show_default=True)
@click.option("--reg-weight", type=float, default=1e-4, show_default=True)
@click.option("--norm-order", type=click.Choice(["1", "2"]), default="1", show_default=True)
@click.option("--lr-decay", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, help="checkpoint path")
def train(
    data: str, adapter: str, family: str, dim: int, epochs: int, batch_size: int,
    lr: float, negatives: int, margin: float, adv_temperature: float, reg_weight: float,
    norm_order: str, lr_decay: float, seed: int, out: str,
) -> None:
    """Train an embedding model on the dataset's train split."""
    config = training.TrainConfig(
        dimension=dim, epochs=epochs, batch_size=batch_size, learning_rate=lr,
        negatives=negatives, margin=margin, adv_temperature=adv_temperature,
        reg_weight=reg_weight, norm_order=int(norm_order), lr_decay=lr_decay, seed=seed,
    )
    model = training.train(_graph(data, adapter), family, config)
    save_model(model, out)
    click.echo(f"trained {family} (d={dim}) -> {out}")


@cli.command()
@data_opt
@adapter_opt
@click.option("--checkpoint", default=None, help="model checkpoint from `train`")
@click.option("--split", default="test", show_default=True)
@click.option("--ties", type=click.Choice(list(ranking.TIE_MODES)), default="pessimistic", show_default=True)
@click.option(
    "--scorer",
    type=click.Choice(["model", "perfect"]),
    default="model",
    show_default=True,
    help="'perfect' is a test hook that ranks every true answer first",
)
@click.option("--out", default=None, help="write the JSON report here")
def eval(
    data: str, adapter: str, checkpoint: str | None, split: str, ties: str,
    scorer: str, out: str | None,
) -> None:
    """Filtered MRR / Hits@k over head and tail predictions."""
    graph = _graph(data, adapter)
    if scorer == "perfect":
        model = ranking.PerfectScorer(graph)
    else:
        if not checkpoint:
            raise KgaugError("--checkpoint is required unless --scorer perfect")
        model = load_model(checkpoint)
    report = ranking.evaluate(model, graph, split=split, ties=ties)
    if out:
        report.save(out)
    click.echo(report.table())


@cli.command()
@click.argument("report_a")
@click.argument("report_b")
def compare(report_a: str, report_b: str) -> None:
    """Signed per-metric deltas between two eval reports (B minus A)."""
    a = ranking.RankReport.load(report_a)
    b = ranking.RankReport.load(report_b)
    click.echo(ranking.compare_reports(a, b).table())


@cli.command()
@click.option("--checkpoint", required=True)
@data_opt
@adapter_opt
@click.option("--head", required=True)
@click.option("--relation", required=True)
@click.option("--tail", required=True)
def score(checkpoint: str, data: str, adapter: str, head: str, relation: str, tail: str) -> None:
    """Score one triple (ids as they appear in the dataset files)."""
    graph = _graph(data, adapter)
    model = load_model(checkpoint)
    for label, value in (("head", head), ("tail", tail)):
        if value not in graph.entity_index:
            raise KgaugError(f"unknown {label} entity id {value!r}")
    if relation not in graph.relation_index:
        raise KgaugError(f"unknown relation id {relation!r}")
    value = model.score(
        graph.entity_index[head], graph.relation_index[relation], graph.entity_index[tail]
    )
    click.echo(f"{value:.6f}")


@cli.command("checkpoint")
@click.argument("path")
def checkpoint_info(path: str) -> None:
    """Print a checkpoint's header (family, sizes, training metadata)."""
    model = load_model(path)
    click.echo(
        json.dumps(
            {
                "family": model.family,
                "dim": model.dim,
                "n_entities": model.n_entities,
                "n_relations": model.n_relations,
                "norm_order": model.norm_order,
                "meta": model.meta,
            },
            indent=2,
            sort_keys=True,
        )
    )


@cli.command()
@click.option("--config", "config_path", required=True, help="TOML run config")
@click.option("--run-dir", required=True, help="run directory for artifacts + manifest")
@click.option("--budget", type=int, default=None, help="override [routing].budget")
@click.option("--endpoint", default=None, help="override [augment].endpoint")
@click.option("--seed", type=int, default=None, help="override the run seed")
def run(config_path: str, run_dir: str, budget: int | None, endpoint: str | None, seed: int | None) -> None:
    """Execute the full pipeline; stages with up-to-date digests are skipped."""
    overrides = {}
    if budget is not None:
        overrides["budget"] = budget
    if endpoint is not None:
        overrides["endpoint"] = endpoint
    if seed is not None:
        overrides["seed"] = seed
    config = pipeline.load_config(config_path, overrides)
    manifest = pipeline.run_pipeline(config, run_dir)
    statuses = {name: record["status"] for name, record in manifest["stages"].items()}
    click.echo(json.dumps(statuses))


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(130)
    except KgaugError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)


if __name__ == "__main__":
    main()
