"""Reader and writer for ``.scn`` scenario files.

The language is line-friendly and brace-delimited::

    scenario jack_hill
    agent jack
    world W_HIT {
      assert jack.pain@3 = 5
    }
    desire jack wants jack.pain@any = 0 weight 1 mode concurrent
    objective health >= 0.5 weight 1
    group committee {
      function select-candidates provenance designed
      member ana role chair from 0 to 6 optional
    }
    activity a1 {
      agent ana role chair group committee world W_HIT time 2 attempted degree 0.4
    }
    config lambda = 5

``#`` starts a comment that runs to the end of the line. Keywords are
contextual, so ``world`` is a legal agent name. Numbers are plain decimals
and are kept exact.
"""

from __future__ import annotations

import re
from typing import NamedTuple
from decimal import Decimal, InvalidOperation

from .errors import ParseError
from .groups import Activity, Group, GroupFunction, RoleBinding
from .scenario import MODES, THEORY_KINDS, Desire, Diagnostic, ObjectiveItem, Scenario
from .world import (
    RESERVED_BOOLEAN,
    RESERVED_NUMERIC,
    Agent,
    Interval,
    PropertyAssertion,
    World,
    format_value,
)

_TOKEN_RE = re.compile(
    r"[ \t\r\f\v]*(?:"
    r"(?P<nl>\n)"
    r"|(?P<comment>\#[^\n]*)"
    r"|(?P<number>-?[0-9]+(?:\.[0-9]+)?(?![A-Za-z0-9_]))"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)"
    r"|(?P<punct>>=|[{}.@=])"
    r"|(?P<bad>.)"
    r"|(?P<end>\Z))"
)

MAX_TICK_DIGITS = 9


# config keys with a fixed value domain; anything else is free-form
_NUMERIC_CONFIG = ("lambda", "lambda_group", "epsilon", "event_time", "event_at",
                   "interval_from", "interval_to")
_BOOLEAN_CONFIG = ("allow_posthumous", "allow_memberless_groups")
_CHOICE_CONFIG = {
    "policy": ("unique", "ties"),
    "aggregator": ("sum", "mean"),
    "sync_aggregator": ("sum", "mean"),
    "theory": THEORY_KINDS,
}


class Token(NamedTuple):
    kind: str  # ident | number | punct | eof
    text: str
    line: int
    column: int


class _Abort(Exception):
    pass


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" or kind == "number" or kind == "punct":
            start = m.start(kind)
            tokens.append(Token(kind, source[start:m.end()], line, start - line_start + 1))
        elif kind == "bad":
            raise ParseError([Diagnostic("error", line, m.start(kind) - line_start + 1, "syntax",
                                         f"unexpected character {m.group(kind)!r}")])
        elif kind == "end":
            break
    tokens.append(Token("eof", "", line, len(source) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.diagnostics: list[Diagnostic] = []
        self.positions: dict = {}

    # -- token helpers ---------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, message: str, tok: Token | None = None, code: str = "syntax"):
        tok = tok or self.tok
        found = "end of file" if tok.kind == "eof" else repr(tok.text[:40])
        self.diagnostics.append(Diagnostic("error", tok.line, tok.column, code,
                                           f"{message}, found {found}"))
        raise _Abort

    def error(self, tok: Token, code: str, message: str):
        self.diagnostics.append(Diagnostic("error", tok.line, tok.column, code, message))

    def keyword(self, word: str) -> Token:
        if self.tok.kind == "ident" and self.tok.text == word:
            return self.advance()
        self.fail(f"expected '{word}'")

    def punct(self, symbol: str) -> Token:
        if self.tok.kind == "punct" and self.tok.text == symbol:
            return self.advance()
        self.fail(f"expected '{symbol}'")

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind == "ident":
            return self.advance()
        self.fail(f"expected {what}")

    def number(self) -> tuple[Decimal, Token]:
        if self.tok.kind != "number":
            self.fail("expected a number")
        tok = self.advance()
        return Decimal(tok.text), tok

    def integer(self) -> tuple[int, Token]:
        if self.tok.kind != "number" or not self.tok.text.isdigit():
            self.fail("expected a non-negative integer")
        if len(self.tok.text.lstrip("0")) > MAX_TICK_DIGITS:
            self.fail(f"ticks are limited to {MAX_TICK_DIGITS} digits", code="bad-value")
        tok = self.advance()
        return int(tok.text), tok

    def value(self):
        tok = self.tok
        if tok.kind == "number":
            return self.number()
        if tok.kind == "ident":
            self.advance()
            if tok.text == "true":
                return True, tok
            if tok.text == "false":
                return False, tok
            return tok.text, tok
        self.fail("expected a value")

    # -- grammar -----------------------------------------------------------

    def parse(self) -> dict:
        raw = {"worlds": [], "agents": [], "desires": [], "objectives": [], "groups": [],
               "activities": [], "config": []}
        if self.tok.kind == "eof":
            self.fail("a scenario must start with 'scenario <name>'")
        self.keyword("scenario")
        raw["name"] = self.ident("scenario name")
        while self.tok.kind != "eof":
            tok = self.tok
            if tok.kind != "ident":
                self.fail("expected a declaration")
            handler = {
                "world": self.world_block,
                "agent": self.agent_decl,
                "desire": self.desire_decl,
                "objective": self.objective_decl,
                "group": self.group_block,
                "activity": self.activity_block,
                "config": self.config_decl,
            }.get(tok.text)
            if handler is None:
                self.fail("expected world, agent, desire, objective, group, activity or config")
            handler(raw)
        return raw

    def world_block(self, raw):
        self.keyword("world")
        name = self.ident("world name")
        self.punct("{")
        assertions = []
        while not (self.tok.kind == "punct" and self.tok.text == "}"):
            start = self.keyword("assert")
            subject = self.ident("subject")
            self.punct(".")
            key = self.ident("property key")
            self.punct("@")
            time, _ = self.integer()
            self.punct("=")
            value, vtok = self.value()
            assertions.append((start, subject, key, time, value, vtok))
        self.punct("}")
        raw["worlds"].append((name, assertions))

    def agent_decl(self, raw):
        self.keyword("agent")
        raw["agents"].append(self.ident("agent name"))

    def desire_decl(self, raw):
        start = self.keyword("desire")
        agent = self.ident("agent name")
        self.keyword("wants")
        subject = self.ident("subject")
        self.punct(".")
        key = self.ident("property key")
        self.punct("@")
        if self.at_keyword("any"):
            self.advance()
            time = None
        else:
            time, _ = self.integer()
        self.punct("=")
        value, _ = self.value()
        self.keyword("weight")
        weight, wtok = self.number()
        mode = "concurrent"
        if self.at_keyword("mode"):
            self.advance()
            mtok = self.ident("desire mode")
            if mtok.text not in MODES:
                self.fail("expected 'concurrent' or 'achievement'", mtok)
            mode = mtok.text
        raw["desires"].append((start, agent, subject, key, time, value, weight, wtok, mode))

    def objective_decl(self, raw):
        start = self.keyword("objective")
        key = self.ident("property key")
        self.punct(">=")
        threshold, _ = self.number()
        self.keyword("weight")
        weight, wtok = self.number()
        raw["objectives"].append((start, key, threshold, weight, wtok))

    def group_block(self, raw):
        self.keyword("group")
        name = self.ident("group name")
        self.punct("{")
        self.keyword("function")
        fn = self.ident("function name")
        self.keyword("provenance")
        provenance = self.ident("provenance")
        members = []
        while self.at_keyword("member"):
            start = self.advance()
            agent = self.ident("agent name")
            self.keyword("role")
            role = self.ident("role name")
            self.keyword("from")
            lo, _ = self.integer()
            self.keyword("to")
            hi, _ = self.integer()
            optional = False
            if self.at_keyword("optional"):
                self.advance()
                optional = True
            members.append((start, agent, role, lo, hi, optional))
        self.punct("}")
        raw["groups"].append((name, fn, provenance, members))

    def activity_block(self, raw):
        self.keyword("activity")
        name = self.ident("activity name")
        self.punct("{")
        self.keyword("agent")
        agent = self.ident("agent name")
        self.keyword("role")
        role = self.ident("role name")
        self.keyword("group")
        group = self.ident("group name")
        world = None
        if self.at_keyword("world"):
            self.advance()
            world = self.ident("world name")
        self.keyword("time")
        time, _ = self.integer()
        flag = self.ident("'attempted' or 'unattempted'")
        if flag.text not in ("attempted", "unattempted"):
            self.fail("expected 'attempted' or 'unattempted'", flag)
        self.keyword("degree")
        degree, dtok = self.number()
        self.punct("}")
        raw["activities"].append((name, agent, role, group, world, time,
                                  flag.text == "attempted", degree, dtok))

    def config_decl(self, raw):
        self.keyword("config")
        key = self.ident("config key")
        self.punct("=")
        value, vtok = self.value()
        raw["config"].append((key, value, vtok))


def _build(raw: dict, p: _Parser) -> Scenario:
    pos = p.positions
    seen: dict[tuple, Token] = {}

    def declare(kind: str, tok: Token) -> bool:
        if (kind, tok.text) in seen:
            first = seen[(kind, tok.text)]
            p.error(tok, "dup-decl", f"{kind} {tok.text} already declared on line {first.line}")
            return False
        seen[(kind, tok.text)] = tok
        pos[(kind, tok.text)] = (tok.line, tok.column)
        return True

    agents = [Agent(t.text) for t in raw["agents"] if declare("agent", t)]
    agent_ids = {a.id for a in agents}
    group_ids = {g[0].text for g in raw["groups"]}
    world_ids = {w[0].text for w in raw["worlds"]}
    subjects = agent_ids | group_ids

    def resolve(tok_or_text, pool, kind, anchor: Token) -> bool:
        text = tok_or_text.text if isinstance(tok_or_text, Token) else tok_or_text
        if text in pool:
            return True
        at = tok_or_text if isinstance(tok_or_text, Token) else anchor
        p.error(at, "unresolved", f"unknown {kind} {text!r}")
        return False

    worlds = []
    for name, assertions in raw["worlds"]:
        declare("world", name)
        slots: dict[tuple, Token] = {}
        kept = []
        for start, subject, key, time, value, vtok in assertions:
            slot = (subject.text, key.text, time)
            if slot in slots:
                p.error(start, "dup-assert",
                        f"{subject.text}.{key.text}@{time} asserted twice in world {name.text} "
                        f"(lines {slots[slot].line} and {start.line})")
                continue
            slots[slot] = start
            resolve(subject, subjects, "subject", start)
            if key.text in RESERVED_NUMERIC and not (isinstance(value, Decimal) and value >= 0):
                p.error(vtok, "bad-value", f"{key.text} must be a non-negative number")
                continue
            if key.text in RESERVED_BOOLEAN and not isinstance(value, bool):
                p.error(vtok, "bad-value", f"{key.text} must be true or false")
                continue
            kept.append(PropertyAssertion(subject.text, key.text, value, time))
        worlds.append(World(name.text, tuple(kept)))

    desires = []
    for start, agent, subject, key, time, value, weight, wtok, mode in raw["desires"]:
        ok = resolve(agent, agent_ids, "agent", start) & resolve(subject, subjects, "subject", start)
        if weight <= 0:
            p.error(wtok, "bad-value", "desire weight must be positive")
            ok = False
        if ok:
            desires.append(Desire(agent.text, subject.text, key.text, time, value, weight, mode))

    objectives = []
    for start, key, threshold, weight, wtok in raw["objectives"]:
        if weight <= 0:
            p.error(wtok, "bad-value", "objective weight must be positive")
            continue
        objectives.append(ObjectiveItem(key.text, threshold, weight))

    groups = []
    roles: dict[str, set[str]] = {}
    for name, fn, provenance, members in raw["groups"]:
        declare("group", name)
        bindings = []
        for start, agent, role, lo, hi, optional in members:
            pos[("member", name.text, len(bindings))] = (start.line, start.column)
            if not resolve(agent, agent_ids, "agent", start):
                continue
            if lo > hi:
                p.error(start, "bad-value", f"member span {lo}..{hi} runs backwards")
                continue
            bindings.append(RoleBinding(agent.text, role.text, name.text, Interval(lo, hi), optional))
            roles.setdefault(name.text, set()).add(role.text)
        groups.append(Group(name.text, GroupFunction(fn.text, provenance.text), tuple(bindings)))

    activities = []
    for name, agent, role, group, world, time, attempted, degree, dtok in raw["activities"]:
        if not declare("activity", name):
            continue
        ok = resolve(agent, agent_ids, "agent", name) & resolve(group, group_ids, "group", name)
        if ok:
            ok = resolve(role, roles.get(group.text, set()), f"role of {group.text}", name)
        if world is not None:
            ok = resolve(world, world_ids, "world", name) and ok
        if not 0 <= degree <= 1:
            p.error(dtok, "bad-value", "activity degree must lie in [0, 1]")
            ok = False
        elif not attempted and degree != 0:
            p.error(dtok, "bad-value", "an unattempted activity must have degree 0")
            ok = False
        if ok:
            activities.append(Activity(name.text, agent.text, role.text, group.text, time,
                                       attempted, degree, world.text if world else None))

    config = {}
    for key, value, vtok in raw["config"]:
        if not declare("config", key):
            continue
        problem = _check_config(key.text, value)
        if problem:
            p.error(vtok, "bad-value", f"config {key.text}: {problem}")
            continue
        config[key.text] = value

    if not worlds:
        name = raw["name"]
        p.error(name, "syntax", "a scenario needs at least one world")

    return Scenario(raw["name"].text, tuple(worlds), tuple(agents), tuple(desires),
                    tuple(objectives), tuple(groups), tuple(activities), config, pos)


def _check_config(key: str, value) -> str | None:
    if key in _NUMERIC_CONFIG:
        if not isinstance(value, Decimal):
            return "expected a number"
        if key == "epsilon" and not 0 < value < 1:
            return "must lie strictly between 0 and 1"
        if key in ("lambda", "lambda_group") and value < 0:
            return "must be non-negative"
        if key in ("event_time", "event_at", "interval_from", "interval_to") and (
                value < 0 or value != int(value)):
            return "must be a non-negative integer"
    elif key in _BOOLEAN_CONFIG:
        if not isinstance(value, bool):
            return "expected true or false"
    elif key in _CHOICE_CONFIG and value not in _CHOICE_CONFIG[key]:
        return f"expected one of {', '.join(_CHOICE_CONFIG[key])}"
    return None


def _decode(source) -> str:
    if isinstance(source, str):
        return source
    try:
        return bytes(source).decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = bytes(source)[: exc.start]
        line = prefix.count(b"\n") + 1
        column = exc.start - (prefix.rfind(b"\n") + 1) + 1
        raise ParseError([Diagnostic("error", line, column, "syntax", "input is not valid UTF-8")])


def parse(source: str | bytes) -> Scenario:
    """Parse scenario text into a :class:`Scenario`.

    Raises :class:`ParseError` carrying one or more error diagnostics. No
    other exception escapes for any ``str`` or ``bytes`` input.
    """
    text = _decode(source)
    parser = _Parser(tokenize(text))
    try:
        raw = parser.parse()
    except _Abort:
        raise ParseError(parser.diagnostics) from None
    try:
        doc = _build(raw, parser)
    except (ValueError, InvalidOperation) as exc:  # pragma: no cover - guarded above
        tok = raw["name"]
        parser.error(tok, "bad-value", str(exc))
        doc = None
    if any(d.severity == "error" for d in parser.diagnostics):
        raise ParseError(sorted(parser.diagnostics, key=lambda d: (d.line, d.column)))
    return doc


def parse_file(path) -> Scenario:
    with open(path, "rb") as fh:
        return parse(fh.read())


# -- serialization ---------------------------------------------------------


def serialize(doc: Scenario) -> str:
    """Canonical text for ``doc``; stable under reordering of declarations."""
    out = [f"scenario {doc.name}", ""]

    for agent in sorted(doc.agents, key=lambda a: a.id):
        out.append(f"agent {agent.id}")
    if doc.agents:
        out.append("")

    for world in sorted(doc.worlds, key=lambda w: w.id):
        out.append(f"world {world.id} {{")
        for a in sorted(world.assertions, key=lambda a: a.slot):
            out.append(f"  assert {a}")
        out.append("}")
        out.append("")

    for d in sorted(doc.desires, key=Desire.sort_key):
        when = "any" if d.time is None else str(d.time)
        out.append(f"desire {d.agent} wants {d.subject}.{d.key}@{when} = {format_value(d.value)} "
                   f"weight {format_value(d.weight)} mode {d.mode}")
    if doc.desires:
        out.append("")

    for o in sorted(doc.objective_items, key=ObjectiveItem.sort_key):
        out.append(f"objective {o.key} >= {format_value(o.threshold)} weight {format_value(o.weight)}")
    if doc.objective_items:
        out.append("")

    for g in sorted(doc.groups, key=lambda g: g.id):
        out.append(f"group {g.id} {{")
        out.append(f"  function {g.function.id} provenance {g.function.provenance}")
        for b in sorted(g.bindings, key=lambda b: (b.agent, b.role, b.span, b.optional_context)):
            flag = " optional" if b.optional_context else ""
            out.append(f"  member {b.agent} role {b.role} from {b.span.start} to {b.span.end}{flag}")
        out.append("}")
        out.append("")

    for a in sorted(doc.activities, key=lambda a: a.id):
        where = f" world {a.world}" if a.world is not None else ""
        flag = "attempted" if a.attempted else "unattempted"
        out.append(f"activity {a.id} {{")
        out.append(f"  agent {a.agent} role {a.role} group {a.group}{where} "
                   f"time {a.time} {flag} degree {format_value(a.realization_degree)}")
        out.append("}")
    if doc.activities:
        out.append("")

    for key in sorted(doc.config):
        out.append(f"config {key} = {format_value(doc.config[key])}")

    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"
