"""Search phrases: natural-language templates bound to stored queries.

A template is plain words with optional ``$slot`` placeholders. Each slot
names a query parameter and a value-source query whose column supplies the
allowed values; a slot only accepts one of those values verbatim. Template
words match case-insensitively, slot values case-sensitively.

Registry document::

    {"registry_version": 1,
     "phrases": [{"id": 1, "template": "...", "description": "...", "query": "...",
                  "params": {"slot": {"source": "MATCH ... RETURN n.x", "column": "n.x"}}}]}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Iterator

from .graph.store import PropertyGraph
from .query import QueryError, ResultTable, execute, parse

SLOT_RE = re.compile(r"\$([A-Za-z_][A-Za-z0-9_]*)")
REGISTRY_VERSION = 1


class PhraseError(Exception):
    pass


class DuplicateTemplate(PhraseError):
    pass


class InvalidQuery(PhraseError):
    pass


class SlotMismatch(PhraseError):
    pass


class NoMatch(PhraseError):
    pass


class AmbiguousMatch(PhraseError):
    pass


class SlotUnfilled(PhraseError):
    pass


@dataclass(frozen=True)
class ParamSpec:
    source: str
    column: str


@dataclass
class SearchPhrase:
    template: str
    query: str
    description: str = ""
    params: dict[str, ParamSpec] = field(default_factory=dict)

    def slots(self) -> list[str]:
        return SLOT_RE.findall(self.template)

    @property
    def dynamic(self) -> bool:
        return bool(self.slots())

    def parts(self) -> list[tuple[str, str]]:
        """Template split into ("lit", text) and ("slot", name) pieces, whitespace collapsed."""
        out = []
        pos = 0
        text = _squash(self.template)
        for m in SLOT_RE.finditer(text):
            if m.start() > pos:
                out.append(("lit", text[pos : m.start()]))
            out.append(("slot", m.group(1)))
            pos = m.end()
        if pos < len(text):
            out.append(("lit", text[pos:]))
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "template": self.template,
            "description": self.description,
            "query": self.query,
            "params": {k: {"source": v.source, "column": v.column} for k, v in sorted(self.params.items())},
        }

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "SearchPhrase":
        params = {k: ParamSpec(v["source"], v["column"]) for k, v in (doc.get("params") or {}).items()}
        return cls(doc["template"], doc["query"], doc.get("description", ""), params)


@dataclass(frozen=True)
class Suggestion:
    kind: str  # "phrase" | "value"
    text: str
    completion: str  # full input line after accepting the suggestion


def _squash(text: str) -> str:
    return " ".join(text.split())


class PhraseRegistry:
    def __init__(self):
        self._phrases: dict[int, SearchPhrase] = {}
        self._next_id = 1

    def __len__(self) -> int:
        return len(self._phrases)

    def __iter__(self) -> Iterator[tuple[int, SearchPhrase]]:
        return iter(sorted(self._phrases.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, PhraseRegistry) and self.to_dict() == other.to_dict()

    def get(self, phrase_id: int) -> SearchPhrase:
        return self._phrases[phrase_id]

    def templates(self) -> list[str]:
        return sorted((p.template for p in self._phrases.values()), key=lambda t: (t.casefold(), t))

    def register(self, phrase: SearchPhrase, phrase_id: int | None = None) -> int:
        key = _squash(phrase.template).casefold()
        if any(_squash(p.template).casefold() == key for p in self._phrases.values()):
            raise DuplicateTemplate(f"template already registered: {phrase.template!r}")
        try:
            query = parse(phrase.query)
        except QueryError as exc:
            raise InvalidQuery(f"query for {phrase.template!r} does not parse: {exc}") from None
        slots = phrase.slots()
        if len(set(slots)) != len(slots):
            raise SlotMismatch(f"template {phrase.template!r} repeats a slot")
        if set(slots) != query.parameters():
            raise SlotMismatch(
                f"template slots {sorted(slots)} do not match query parameters {sorted(query.parameters())}"
            )
        if set(slots) != set(phrase.params):
            raise SlotMismatch(f"template slots {sorted(slots)} do not match value sources {sorted(phrase.params)}")
        for name, spec in phrase.params.items():
            try:
                source = parse(spec.source)
            except QueryError as exc:
                raise InvalidQuery(f"value source for ${name} does not parse: {exc}") from None
            if source.parameters():
                raise InvalidQuery(f"value source for ${name} must not take parameters")
            if spec.column not in source.columns():
                raise InvalidQuery(f"value source for ${name} has no column {spec.column!r}")
        if phrase_id is None:
            phrase_id = self._next_id
        elif phrase_id in self._phrases:
            raise DuplicateTemplate(f"phrase id {phrase_id} already in use")
        self._phrases[phrase_id] = phrase
        self._next_id = max(self._next_id, phrase_id + 1)
        return phrase_id

    # -- persistence ---------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "registry_version": REGISTRY_VERSION,
            "phrases": [{"id": pid, **phrase.to_dict()} for pid, phrase in self],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "PhraseRegistry":
        reg = cls()
        for item in doc.get("phrases", []):
            reg.register(SearchPhrase.from_dict(item), item.get("id"))
        return reg

    @classmethod
    def loads(cls, text: str) -> "PhraseRegistry":
        return cls.from_dict(json.loads(text))

    # -- matching ------------------------------------------------------------

    def slot_values(self, graph: PropertyGraph, phrase: SearchPhrase, slot: str) -> list[str]:
        """Distinct candidate values for ``slot``, sorted case-insensitively."""
        spec = phrase.params[slot]
        values = {str(v) for v in execute(graph, spec.source).column(spec.column) if v is not None}
        return sorted(values, key=lambda v: (v.casefold(), v))

    def _walk(self, graph, phrase: SearchPhrase, text: str, cache: dict) -> Iterator[tuple[str, Any]]:
        """Yield ("full", bindings), ("unfilled", slot), or ("in_slot", (slot, typed, prefix)) states."""
        parts = phrase.parts()

        def values(slot):
            if slot not in cache:
                cache[slot] = self.slot_values(graph, phrase, slot)
            return cache[slot]

        def go(i: int, pos: int, bound: dict[str, str]):
            if i == len(parts):
                if pos == len(text):
                    yield ("full", dict(bound))
                return
            kind, piece = parts[i]
            rest = text[pos:]
            if kind == "lit":
                if rest.casefold().startswith(piece.casefold()):
                    yield from go(i + 1, pos + len(piece), bound)
                elif piece.rstrip() and rest.casefold() == piece.rstrip().casefold() and i + 1 < len(parts):
                    # input stops right before a slot
                    yield ("unfilled", parts[i + 1][1])
                    yield ("in_slot", (parts[i + 1][1], "", text + " "))
                return
            if rest == "":
                yield ("unfilled", piece)
            # greedy: longest candidates first
            consumed = [c for c in sorted(values(piece), key=len, reverse=True) if rest.startswith(c)]
            if not any(len(c) < len(rest) for c in consumed):
                # the cursor is still inside this slot
                yield ("in_slot", (piece, rest, text[:pos]))
            for cand in consumed:
                bound[piece] = cand
                yield from go(i + 1, pos + len(cand), bound)
                del bound[piece]

        yield from go(0, 0, {})

    def match(self, graph: PropertyGraph, phrase_input: str) -> tuple[int, dict[str, str]]:
        text = _squash(phrase_input)
        full = []
        unfilled = []
        for pid, phrase in self:
            for state, payload in self._walk(graph, phrase, text, {}):
                if state == "full":
                    full.append((pid, payload))
                    break
                if state == "unfilled":
                    unfilled.append((pid, payload))
        if len(full) > 1:
            names = ", ".join(repr(self.get(pid).template) for pid, _ in full)
            raise AmbiguousMatch(f"input matches several phrases: {names}")
        if full:
            return full[0]
        if unfilled:
            pid, slot = unfilled[0]
            raise SlotUnfilled(f"slot ${slot} of {self.get(pid).template!r} needs a value")
        raise NoMatch(f"no search phrase matches {phrase_input!r}")

    def resolve_and_run(self, graph: PropertyGraph, phrase_input: str) -> ResultTable:
        pid, params = self.match(graph, phrase_input)
        return execute(graph, self.get(pid).query, params)

    def suggest(self, graph: PropertyGraph, partial_input: str) -> list[Suggestion]:
        """Matching templates (alphabetical), then slot values (alphabetical)."""
        text = " ".join(partial_input.split())
        typed = text.casefold()
        phrases: dict[str, Suggestion] = {}
        values: dict[str, Suggestion] = {}
        for _, phrase in self:
            if _squash(phrase.template).casefold().startswith(typed):
                phrases.setdefault(phrase.template, Suggestion("phrase", phrase.template, phrase.template))
            cache: dict = {}
            for state, payload in self._walk(graph, phrase, text, cache):
                if state != "in_slot":
                    continue
                slot, fragment, prefix = payload
                needle = fragment.casefold()
                for cand in cache.get(slot) or self.slot_values(graph, phrase, slot):
                    if needle in cand.casefold():
                        values.setdefault(cand, Suggestion("value", cand, prefix + cand))
        order = lambda s: (s.text.casefold(), s.text)  # noqa: E731
        return sorted(phrases.values(), key=order) + sorted(values.values(), key=order)


def load_registry(path=None) -> PhraseRegistry:
    if path is None:
        text = resources.files("windkg.data").joinpath("phrases.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return PhraseRegistry.loads(text)


def save_registry(registry: PhraseRegistry, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(registry.dumps())
