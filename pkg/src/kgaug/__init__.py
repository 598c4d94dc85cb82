"""Entity-description augmentation for knowledge graphs, plus embedding-based
completion models and filtered link-prediction evaluation.

The public surface mirrors the pipeline order: load a corpus, route entities
by token length, render constrained prompts, drive a chat endpoint, clean
responses, assemble/export the augmented dataset, then train and evaluate
embedding scorers on it.
"""

from .assembly import AssembledInput, assemble_input, export, truncate
from .cleaning import (
    CleanOutcome,
    RuleSet,
    clean_compression,
    clean_expansion,
    default_rules,
    effective_rate,
)
from .corpus import (
    EntityRecord,
    KnowledgeGraph,
    RelationRecord,
    Triple,
    graph_stats,
    load_dataset,
    load_entity_texts,
    parse_triples,
    polysemy_groups,
    save_dataset,
)
from .errors import KgaugError
from .gateway import ChatGateway, GenerationParams, PromptJob, ResponseCache, complete
from .models import EmbeddingModel, load_model, save_model
from .pipeline import RunConfig, load_config, run_pipeline
from .prompts import PromptTemplate, TemplateSet, default_templates, render
from .ranking import (
    FilterIndex,
    RankQuery,
    RankReport,
    compare_reports,
    evaluate,
    exhaustive_rank,
    filtered_rank,
)
from .routing import Action, RouteDecision, entity_length, route
from .stub import StubServer
from .training import TrainConfig, gradient_check, train
from .wordpiece import SubwordVocabulary, default_vocabulary, token_length, tokenize

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AssembledInput",
    "ChatGateway",
    "CleanOutcome",
    "EmbeddingModel",
    "EntityRecord",
    "FilterIndex",
    "GenerationParams",
    "KgaugError",
    "KnowledgeGraph",
    "PromptJob",
    "PromptTemplate",
    "RankQuery",
    "RankReport",
    "RelationRecord",
    "ResponseCache",
    "RouteDecision",
    "RuleSet",
    "RunConfig",
    "StubServer",
    "SubwordVocabulary",
    "TemplateSet",
    "TrainConfig",
    "Triple",
    "assemble_input",
    "clean_compression",
    "clean_expansion",
    "compare_reports",
    "complete",
    "default_rules",
    "default_templates",
    "default_vocabulary",
    "effective_rate",
    "entity_length",
    "evaluate",
    "exhaustive_rank",
    "export",
    "filtered_rank",
    "gradient_check",
    "graph_stats",
    "load_config",
    "load_dataset",
    "load_entity_texts",
    "load_model",
    "parse_triples",
    "polysemy_groups",
    "render",
    "route",
    "run_pipeline",
    "save_dataset",
    "save_model",
    "token_length",
    "tokenize",
    "train",
    "truncate",
]
