"""Interactive shell: raw queries, search phrases, and phrase suggestions.

Lines starting with MATCH run as queries. Anything else is resolved as a
search phrase. Commands start with a colon; ``:help`` lists them.
"""

from __future__ import annotations

import re
import sys
from typing import Any, TextIO

from .graph.store import GraphError, NodeRecord, PropertyGraph
from .phrases import NoMatch, PhraseError, PhraseRegistry
from .query import QueryError, ResultTable, execute

HELP = """\
MATCH ...            run a query (use :param to set $parameters)
<phrase text>        run a search phrase
:suggest <text>      list phrase and value suggestions for partial input
:phrases             list phrase templates
:param name=value    set a query parameter (value parsed as JSON when possible)
:params              show parameters
:help                this text
:quit                leave the shell
TAB completes phrases and slot values."""


def format_value(value: Any) -> str:
    if isinstance(value, NodeRecord):
        labels = ":".join(value.labels)
        props = ", ".join(f"{k}: {format_value(v)}" for k, v in sorted(value.properties.items()))
        return f"({value.id}:{labels} {{{props}}})"
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def format_table(table: ResultTable) -> str:
    lines = [" | ".join(table.columns)]
    for row in table.rows:
        lines.append(" | ".join(format_value(row[c]) for c in table.columns))
    lines.append(f"({len(table)} row{'s' if len(table) != 1 else ''})")
    return "\n".join(lines)


def parse_param_value(text: str) -> Any:
    import json

    try:
        value = json.loads(text)
    except ValueError:
        return text
    if isinstance(value, (str, int, float, bool)):
        return value
    return text


_MATCH_START = re.compile(r"match\b", re.IGNORECASE)


class Repl:
    def __init__(self, graph: PropertyGraph, registry: PhraseRegistry | None = None):
        self.graph = graph
        self.registry = registry or PhraseRegistry()
        self.params: dict[str, Any] = {}
        self.done = False
        self._matches: list[str] = []

    def handle(self, line: str) -> str:
        text = line.strip()
        if not text:
            return ""
        try:
            if text.startswith(":"):
                return self._command(text)
            if _MATCH_START.match(text):
                return format_table(execute(self.graph, text, self.params))
            try:
                return format_table(self.registry.resolve_and_run(self.graph, text))
            except NoMatch as exc:
                hints = self.registry.suggest(self.graph, text)
                msg = f"error: {exc}"
                if hints:
                    msg += "\nsuggestions:\n" + "\n".join(f"  {s.completion}" for s in hints[:20])
                return msg
        except (QueryError, PhraseError, GraphError, KeyError, TypeError, ValueError) as exc:
            return f"error: {exc}"

    def _command(self, text: str) -> str:
        cmd, _, arg = text.partition(" ")
        arg = arg.strip()
        if cmd in (":quit", ":exit", ":q"):
            self.done = True
            return ""
        if cmd == ":help":
            return HELP
        if cmd == ":phrases":
            return "\n".join(self.registry.templates())
        if cmd == ":suggest":
            return "\n".join(s.completion for s in self.registry.suggest(self.graph, arg)) or "(no suggestions)"
        if cmd == ":param":
            name, eq, raw = arg.partition("=")
            if not eq or not name.strip():
                return "error: usage :param name=value"
            self.params[name.strip()] = parse_param_value(raw.strip())
            return f"${name.strip()} = {format_value(self.params[name.strip()])}"
        if cmd == ":params":
            return "\n".join(f"${k} = {format_value(v)}" for k, v in sorted(self.params.items())) or "(none)"
        return f"error: unknown command {cmd}; try :help"

    def completions(self, buffer: str) -> list[str]:
        """Full-line completions for the current input buffer."""
        if buffer.startswith(":"):
            cmds = [":help", ":quit", ":phrases", ":suggest ", ":param ", ":params"]
            return [c for c in cmds if c.startswith(buffer)]
        return [s.completion for s in self.registry.suggest(self.graph, buffer)]

    def _readline_complete(self, text: str, state: int):
        import readline

        if state == 0:
            buffer = readline.get_line_buffer()
            start = readline.get_begidx()
            # readline replaces only the current word, so hand back the tail from it
            self._matches = [c[start:] for c in self.completions(buffer) if len(c) >= start]
        return self._matches[state] if state < len(self._matches) else None

    def run(self, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> None:
        interactive = stdin.isatty()
        if interactive:
            try:
                import readline

                readline.set_completer_delims("")
                readline.set_completer(self._readline_complete)
                readline.parse_and_bind("tab: complete")
            except ImportError:
                pass
        while not self.done:
            if interactive:
                try:
                    line = input("windkg> ")
                except EOFError:
                    break
            else:
                line = stdin.readline()
                if not line:
                    break
            out = self.handle(line)
            if out:
                print(out, file=stdout)
