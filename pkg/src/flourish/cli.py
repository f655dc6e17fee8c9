"""Command-line entry point.

Exit codes: 0 success, 1 evaluation error or failed expectation, 2 input
error (unreadable file, parse or validation failure, unknown id).
"""

from __future__ import annotations

import argparse
import datetime
import json
import re
import sys
from decimal import Decimal
from fractions import Fraction

from .counterfactual import NearestPolicy, event_value
from .dsl import parse
from .errors import EvaluationError, NoCounterfactualWorld, ParseError
from .group_calculus import GroupCalcConfig, group_life_value
from .individual import WelfareConfig, life_value
from .oracle import full_scan
from .scenario import THEORY_KINDS, Diagnostic, Scenario, validate_scenario
from .theories import make_theory
from .world import Event, Interval

EXIT_OK, EXIT_EVAL, EXIT_INPUT = 0, 1, 2

_EVENT_RE = re.compile(r"^([A-Za-z_][\w\-]*)\.([A-Za-z_][\w\-]*)@([0-9]+)=(\S+)$")


class InputError(Exception):
    def __init__(self, code: str, message: str, diagnostics=()):
        super().__init__(message)
        self.code = code
        self.diagnostics = list(diagnostics)


# -- helpers ------------------------------------------------------------------


def number(x):
    """JSON-friendly rendering of an exact value: int when integral, else float."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, Decimal):
        return number(Fraction(x))
    return x


def sign_of(x) -> str:
    return "positive" if x > 0 else "negative" if x < 0 else "zero"


def parse_value(text: str):
    if text in ("true", "false"):
        return text == "true"
    if re.fullmatch(r"-?[0-9]+(\.[0-9]+)?", text):
        return Decimal(text)
    if re.fullmatch(r"[A-Za-z_][\w\-]*", text):
        return text
    raise InputError("bad-value", f"cannot read value {text!r}")


def parse_event(text: str) -> Event:
    m = _EVENT_RE.match(text.replace(" ", ""))
    if not m:
        raise InputError("bad-event", f"event must look like subject.key@tick=value, got {text!r}")
    return Event(m.group(1), m.group(2), parse_value(m.group(4)), int(m.group(3)))


def parse_interval(text: str) -> Interval:
    m = re.fullmatch(r"\s*([0-9]+)\s*\.\.\s*([0-9]+)\s*", text)
    if not m:
        raise InputError("bad-interval", f"interval must look like A..B, got {text!r}")
    try:
        return Interval(int(m.group(1)), int(m.group(2)))
    except ValueError as exc:
        raise InputError("bad-interval", str(exc)) from None


def load(path: str) -> Scenario:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError("io-error", f"cannot read {path}: {exc.strerror or exc}",
                         [Diagnostic("error", 0, 0, "io-error", f"cannot read {path}")]) from None
    try:
        doc = parse(data)
    except ParseError as exc:
        raise InputError("parse", f"{path}: scenario does not parse", exc.diagnostics) from None
    diagnostics = validate_scenario(doc)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        raise InputError("invalid", f"{path}: scenario does not validate", diagnostics)
    for d in diagnostics:
        print(f"{path}:{d}", file=sys.stderr)
    return doc


class Run:
    """Resolved parameters: command-line flags first, then scenario config, then defaults."""

    def __init__(self, args, doc: Scenario):
        self.args = args
        self.doc = doc
        cfg = doc.config

        def pick(flag, key, default):
            value = getattr(args, flag, None)
            if value is not None:
                return value
            return cfg.get(key, default)

        self.theory_kind = pick("theory", "theory", "hedonic")
        self.allow_posthumous = bool(getattr(args, "allow_posthumous", False)
                                     or cfg.get("allow_posthumous", False) is True)
        self.policy = NearestPolicy.parse(pick("policy", "policy", "unique"))
        try:
            self.welfare = WelfareConfig(pick("lam", "lambda", Fraction(1)),
                                         pick("aggregator", "aggregator", "sum"))
            self.group = GroupCalcConfig(pick("epsilon", "epsilon", Fraction(1, 100)),
                                         pick("sync_aggregator", "sync_aggregator", "sum"),
                                         pick("lam_group", "lambda_group", Fraction(1)))
        except ValueError as exc:
            raise InputError("bad-value", str(exc)) from None

    def world(self, world_id=None):
        world_id = world_id or getattr(self.args, "world", None) or self.doc.config.get("actual") \
            or self.doc.worlds[0].id
        try:
            return self.doc.world(world_id)
        except KeyError:
            raise InputError("unresolved", f"unknown world {world_id!r}") from None

    def agent(self, config_key: str, fallback=None) -> str:
        agent = getattr(self.args, "agent", None) or self.doc.config.get(config_key) or fallback
        if agent is None:
            raise InputError("missing", f"name an agent with --agent or config {config_key}")
        if agent not in self.doc.agent_ids:
            raise InputError("unresolved", f"unknown agent {agent!r}")
        return agent

    def interval(self, world) -> Interval:
        text = getattr(self.args, "interval", None)
        if text:
            return parse_interval(text)
        cfg = self.doc.config
        lo = int(cfg.get("interval_from", 0))
        hi = int(cfg.get("interval_to", world.horizon))
        try:
            return Interval(lo, hi)
        except ValueError as exc:
            raise InputError("bad-interval", str(exc)) from None

    def baseline(self, config_key: str):
        baseline = getattr(self.args, "baseline", None) or self.doc.config.get(config_key)
        if baseline is not None and baseline not in self.doc.world_ids:
            raise InputError("unresolved", f"unknown baseline world {baseline!r}")
        return baseline

    def theory(self, kind=None):
        return make_theory(kind or self.theory_kind, self.doc, self.allow_posthumous)

    def configured_event(self):
        text = getattr(self.args, "event", None)
        if text:
            return parse_event(text)
        cfg = self.doc.config
        keys = ("event_subject", "event_key", "event_time", "event_value")
        if not all(k in cfg for k in keys):
            return None
        return Event(cfg["event_subject"], cfg["event_key"], cfg["event_value"], int(cfg["event_time"]))


def emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
        return
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{key}:")
            for row in value:
                print("  " + "  ".join(f"{k}={_text(v)}" for k, v in row.items()))
        else:
            print(f"{key}: {_text(value)}")


def _text(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(_text(v) for v in value) if value else "-"
    if isinstance(value, dict):
        return " ".join(f"{k}={_text(v)}" for k, v in value.items())
    if value is None:
        return "-"
    return str(value)


def _stamp(report: dict, args) -> dict:
    if getattr(args, "verbose", False):
        report["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return report


# -- commands -----------------------------------------------------------------


def cmd_eval_event(args) -> int:
    doc = load(args.scenario)
    run = Run(args, doc)
    world = run.world()
    event = run.configured_event()
    if event is None:
        raise InputError("missing", "name an event with --event or config event_*")
    agent = run.agent("event_agent", fallback=event.subject)
    at = args.at if args.at is not None else int(doc.config.get("event_at", event.time))
    theory = run.theory()
    result = event_value(doc, world, event, agent, at, theory, run.policy)
    emit(_stamp({
        "command": "eval event",
        "scenario": doc.name,
        "world": world.id,
        "event": str(event),
        "agent": agent,
        "time": at,
        "theory": theory.name,
        "allow_posthumous": run.allow_posthumous,
        "policy": run.policy.value,
        "value": number(result.value),
        "comparison_worlds": list(result.comparison_worlds),
        "notes": list(result.notes),
    }, args), args.json)
    return EXIT_OK


def cmd_eval_life(args) -> int:
    doc = load(args.scenario)
    run = Run(args, doc)
    world = run.world()
    agent = run.agent("life_agent")
    interval = run.interval(world)
    theory = run.theory()
    result = life_value(doc, agent, world, interval, theory, run.welfare, run.policy,
                        run.baseline("baseline"))
    emit(_stamp({
        "command": "eval life",
        "scenario": doc.name,
        "world": world.id,
        "agent": agent,
        "interval": str(interval),
        "theory": theory.name,
        "allow_posthumous": run.allow_posthumous,
        "policy": run.policy.value,
        "lambda": number(run.welfare.shape_weight),
        "aggregator": run.welfare.aggregator,
        "subject_welfare": number(result.subject_welfare),
        "comparison_welfare": number(result.comparison_welfare),
        "value": number(result.value),
        "comparison_worlds": list(result.comparison_worlds),
    }, args), args.json)
    return EXIT_OK


def _group_id(run: Run, args) -> str:
    group_id = getattr(args, "group", None) or run.doc.config.get("eval_group")
    if group_id is None:
        if len(run.doc.groups) != 1:
            raise InputError("missing", "name a group with --group or config eval_group")
        group_id = run.doc.groups[0].id
    if group_id not in run.doc.group_ids:
        raise InputError("unresolved", f"unknown group {group_id!r}")
    return group_id


def cmd_eval_group(args) -> int:
    doc = load(args.scenario)
    run = Run(args, doc)
    world = run.world()
    group = doc.group(_group_id(run, args))
    interval = run.interval(world)
    report = group_life_value(doc, group, world, interval, run.group, run.policy,
                              run.baseline("group_baseline"))
    emit(_stamp({
        "command": "eval group",
        "scenario": doc.name,
        "world": world.id,
        "group": group.id,
        "function": group.function.id,
        "interval": str(interval),
        "policy": run.policy.value,
        "epsilon": number(run.group.epsilon),
        "lambda_group": number(run.group.shape_weight),
        "sync_aggregator": run.group.sync_aggregator,
        "synchronic": [number(s) for s in report.synchronic],
        "diachronic": number(report.diachronic),
        "welfare": number(report.welfare),
        "comparison_welfare": number(report.comparison_welfare),
        "value": number(report.life_value),
        "comparison_worlds": list(report.comparison_worlds),
    }, args), args.json)
    return EXIT_OK


def _expected(doc: Scenario, kind: str, theory: str):
    return doc.config.get(f"expect_sign_{kind}_{theory}", doc.config.get(f"expect_sign_{kind}"))


def neutrality_report(doc: Scenario, run: Run) -> dict:
    """Evaluate every configured case under each theory and compare the results."""
    world = run.world()
    interval = run.interval(world)
    event = run.configured_event()
    life_agent = doc.config.get("life_agent")
    group_ids = [doc.config["eval_group"]] if "eval_group" in doc.config \
        else sorted(doc.group_ids)

    individual, violations = [], []
    group_values: dict[str, dict[str, Fraction]] = {g: {} for g in group_ids}
    for kind in THEORY_KINDS:
        theory = run.theory(kind)
        cases = []
        if event is not None:
            agent = doc.config.get("event_agent", event.subject)
            at = int(doc.config.get("event_at", event.time))
            cases.append(("event", lambda: event_value(doc, world, event, agent, at, theory,
                                                       run.policy).value))
        if life_agent is not None:
            cases.append(("life", lambda: life_value(doc, life_agent, world, interval, theory,
                                                     run.welfare, run.policy,
                                                     run.baseline("baseline")).value))
        for what, compute in cases:
            value = compute()
            expected = _expected(doc, what, kind)
            ok = expected is None or expected == sign_of(value)
            if not ok:
                key = f"expect_sign_{what}_{kind}" if f"expect_sign_{what}_{kind}" in doc.config \
                    else f"expect_sign_{what}"
                violations.append(f"{key} = {expected} but {what} value under {kind} is "
                                  f"{sign_of(value)}")
            individual.append({"theory": kind, "evaluation": what, "value": number(value),
                               "sign": sign_of(value), "expected": expected, "ok": ok})
        for gid in group_ids:
            result = group_life_value(doc, doc.group(gid), world, interval, run.group,
                                      run.policy, run.baseline("group_baseline"))
            group_values[gid][kind] = result.life_value

    groups = []
    for gid, values in group_values.items():
        distinct = set(values.values())
        identical = len(distinct) == 1
        if not identical:
            violations.append(f"group {gid}: values differ across theories")
        value = values[THEORY_KINDS[0]]
        expected = _expected(doc, "group", THEORY_KINDS[0]) if "eval_group" in doc.config else None
        ok = identical and (expected is None or expected == sign_of(value))
        if identical and not ok:
            violations.append(f"expect_sign_group = {expected} but group {gid} value is {sign_of(value)}")
        row = {"group": gid}
        row.update({k: number(v) for k, v in values.items()})
        row.update({"identical": identical, "sign": sign_of(value), "expected": expected, "ok": ok})
        groups.append(row)

    return {
        "command": "neutrality",
        "scenario": doc.name,
        "world": world.id,
        "interval": str(interval),
        "policy": run.policy.value,
        "allow_posthumous": run.allow_posthumous,
        "individual": individual,
        "group": groups,
        "violations": violations,
        "result": "fail" if violations else "pass",
    }


def cmd_neutrality(args) -> int:
    doc = load(args.scenario)
    run = Run(args, doc)
    report = neutrality_report(doc, run)
    emit(_stamp(report, args), args.json)
    for v in report["violations"]:
        print(f"neutrality: violation: {v}", file=sys.stderr)
    return EXIT_EVAL if report["violations"] else EXIT_OK


def cmd_oracle(args) -> int:
    doc = load(args.scenario)
    run = Run(args, doc)
    world = run.world()
    event = run.configured_event()
    if event is None:
        raise InputError("missing", "name an event with --event or config event_*")
    if event.time < 1:
        raise InputError("bad-event", "events need a tick of at least 1")
    scan = full_scan(doc.worlds, world, event)
    rows = [{"world": r.world,
             "similarity": r.similarity,
             "occurs": r.event_occurs,
             "candidate": "reference" if r.is_reference else r.candidate,
             "maximal": r.world in scan.maximizers} for r in scan.rows]
    emit(_stamp({
        "command": "oracle",
        "scenario": doc.name,
        "reference": world.id,
        "event": str(event),
        "rows": rows,
        "maximizers_ties": list(scan.maximizers),
        "maximizer_unique": list(scan.unique),
    }, args), args.json)
    if not scan.maximizers:
        print(f"oracle: {NoCounterfactualWorld.code}: every other world contains {event}",
              file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        with open(args.scenario, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        print(f"{args.scenario}:0:0: error: io-error: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        diagnostics = validate_scenario(parse(data))
    except ParseError as exc:
        diagnostics = exc.diagnostics
    for d in diagnostics:
        print(f"{args.scenario}:{d}", file=sys.stderr)
    errors = sum(d.severity == "error" for d in diagnostics)
    warnings = len(diagnostics) - errors
    print(f"{args.scenario}: {errors} error(s), {warnings} warning(s)")
    return EXIT_INPUT if errors else EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("scenario", help="path to a .scn file")
    p.add_argument("--world", help="world to evaluate in (default: config actual, else the first world)")
    p.add_argument("--theory", choices=THEORY_KINDS)
    p.add_argument("--allow-posthumous", action="store_true",
                   help="let desires satisfied after death count")
    p.add_argument("--policy", choices=("unique", "ties"))
    p.add_argument("--lambda", dest="lam", type=Fraction, help="weight of the slope term in welfare")
    p.add_argument("--aggregator", choices=("sum", "mean"))
    p.add_argument("--lambda-group", dest="lam_group", type=Fraction,
                   help="weight of the slope term in group welfare")
    p.add_argument("--epsilon", type=Fraction, help="floor for attempted activities")
    p.add_argument("--sync-aggregator", choices=("sum", "mean"))
    p.add_argument("--interval", help="ticks A..B")
    p.add_argument("--baseline", help="explicit comparison world")
    p.add_argument("--json", action="store_true", help="emit a JSON object")
    p.add_argument("--verbose", action="store_true", help="add a generation timestamp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flourish", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate an event, a life, or a group life")
    ev_sub = ev.add_subparsers(dest="target", required=True)
    p = ev_sub.add_parser("event", help="counterfactual value of an event for an agent")
    _add_common(p)
    p.add_argument("--event", help="subject.key@tick=value")
    p.add_argument("--agent")
    p.add_argument("--at", type=int, help="tick at which well-being is compared")
    p.set_defaults(func=cmd_eval_event)
    p = ev_sub.add_parser("life", help="value of a life against its counterpart")
    _add_common(p)
    p.add_argument("--agent")
    p.set_defaults(func=cmd_eval_life)
    p = ev_sub.add_parser("group", help="value of a group's life against its counterpart")
    _add_common(p)
    p.add_argument("--group")
    p.set_defaults(func=cmd_eval_group)

    p = sub.add_parser("neutrality", help="run the configured cases under every theory")
    _add_common(p)
    p.set_defaults(func=cmd_neutrality)

    p = sub.add_parser("oracle", help="full-scan nearest-world table for an event")
    _add_common(p)
    p.add_argument("--event", help="subject.key@tick=value")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", help="parse and validate a scenario")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        for d in exc.diagnostics:
            print(f"{args.scenario}:{d}", file=sys.stderr)
        print(f"flourish: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EvaluationError as exc:
        op = {"event": "event_value", "life": "life_value", "group": "group_life_value"}.get(
            getattr(args, "target", None), args.command)
        print(f"flourish: {op}: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":
    sys.exit(main())
