"""Constrained prompt templates and rendering.

Templates live in a versioned JSON file, not in code, so datasets can
register their own without touching the library.  The three shipped
defaults are frozen byte-for-byte; any whitespace normalization belongs to
the response cleaner, never here.

A template body embeds the entity context through ``{name}`` and
``{description}`` placeholders.  Both must appear at least once (the
description acts as the generation constraint); placeholders may repeat.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, PromptError

PLACEHOLDER = re.compile(r"\{(name|description)\}")

COMPRESS = "compress"
EXPAND = "expand"


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    kind: str  # "compress" | "expand"
    body: str

    def __post_init__(self) -> None:
        if self.kind not in (COMPRESS, EXPAND):
            raise ConfigError(f"template {self.id!r}: kind must be compress or expand")
        markers = [m.group(1) for m in PLACEHOLDER.finditer(self.body)]
        if "name" not in markers or "description" not in markers:
            raise ConfigError(
                f"template {self.id!r}: body must contain both {{name}} and {{description}}"
            )


class TemplateSet:
    def __init__(self, templates: list[PromptTemplate]):
        self._by_id = {}
        for template in templates:
            if template.id in self._by_id:
                raise ConfigError(f"duplicate template id {template.id!r}")
            self._by_id[template.id] = template

    def __iter__(self):
        return iter(self._by_id.values())

    def ids(self) -> list[str]:
        return list(self._by_id)

    def get(self, template_id: str) -> PromptTemplate:
        try:
            return self._by_id[template_id]
        except KeyError:
            raise ConfigError(
                f"unknown template {template_id!r}; have {sorted(self._by_id)}"
            ) from None

    @classmethod
    def load(cls, path: str | Path) -> "TemplateSet":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if payload.get("version") != 1:
            raise ConfigError(f"unsupported template file version in {path}")
        return cls([PromptTemplate(**item) for item in payload["templates"]])


def default_templates() -> TemplateSet:
    return TemplateSet.load(Path(__file__).parent / "resources" / "templates.json")


def render(template: PromptTemplate, name: str, description: str) -> str:
    """Substitute the entity context into the template, verbatim.

    Compression of an empty description is rejected: with nothing to
    constrain the generation, the call belongs to the expansion route.
    """
    if not name:
        raise PromptError("entity name must be non-empty")
    if template.kind == COMPRESS and not description:
        raise PromptError(
            f"template {template.id!r}: cannot compress an empty description"
        )
    values = {"name": name, "description": description}
    return PLACEHOLDER.sub(lambda m: values[m.group(1)], template.body)
