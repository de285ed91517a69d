"""Command line entry point ``dscosc``.

Exit status: 0 on success, 1 when a report records a property violation,
2 on unreadable input, parse errors or unresolvable tasks.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dsl import Document, DSLError, Task, parse
from .report import TaskError, dumps, run_document, run_task, violations

VERBS = ("eval", "osc", "dnorm", "indices", "glue", "stepapprox", "series", "classify", "continuity", "check")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dscosc", description="Oscillation ranks, D-norms and DSC indices.")
    p.add_argument("verb", choices=VERBS + ("run",),
                   help="task to run; 'run' executes every task declared in the file")
    p.add_argument("target", nargs="?", help="a .dsc file (for 'check': a criterion name or 'all')")
    p.add_argument("args", nargs="*", help="task arguments, e.g. a function name and a stage")
    p.add_argument("--json", action="store_true", help="print the full JSON report")
    p.add_argument("--budget", type=int, default=3, help="enumeration budget for per-point tables")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    p.add_argument("--alpha", type=int, default=None, help="default stage for osc and series tasks")
    return p


def _summary(report: dict) -> str:
    lines = []
    for r in report["reports"]:
        head = f"{r['task']}({', '.join(r['args'])})"
        if "criteria" in r:
            lines.append(head)
            for name, c in r["criteria"].items():
                lines.append(f"  {name}: {'PASS' if c['passed'] else 'FAIL'}  {c['detail']}")
            continue
        scalars = {k: v for k, v in r.items() if k not in ("task", "args") and not isinstance(v, (dict, list))}
        body = ", ".join(f"{k}={v}" for k, v in scalars.items())
        lines.append(f"{head}: {body}" if body else head)
        for k, v in r.items():
            if isinstance(v, dict) and k not in ("tail_bound", "grouping"):
                lines.append(f"  {k}: " + ", ".join(f"{a}={b}" for a, b in v.items()))
            elif k in ("tail_bound", "grouping"):
                flat = {a: b for a, b in v.items() if not isinstance(b, list)}
                lines.append(f"  {k}: " + ", ".join(f"{a}={b}" for a, b in flat.items()))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ns = _parser().parse_args(argv)
    if ns.budget < 0:
        print("dscosc: --budget must be nonnegative", file=sys.stderr)
        return 2
    try:
        if ns.verb == "check":
            names = [a for a in ([ns.target] if ns.target else []) + ns.args if a != "all"]
            doc = Document(tasks=[Task("check", tuple(names) or ("all",))])
            report = run_document(doc, ns.budget, ns.seed, ns.alpha)
        else:
            if not ns.target:
                print(f"dscosc: {ns.verb} needs a .dsc file", file=sys.stderr)
                return 2
            text = Path(ns.target).read_text(encoding="utf-8")
            doc = parse(text)
            if ns.verb == "run":
                report = run_document(doc, ns.budget, ns.seed, ns.alpha)
            else:
                task = Task(ns.verb, tuple(ns.args))
                report = {"reports": [run_task(doc, task, ns.budget, ns.seed, ns.alpha)]}
    except (OSError, UnicodeDecodeError) as exc:
        print(f"dscosc: cannot read input: {exc}", file=sys.stderr)
        return 2
    except DSLError as exc:
        print(f"dscosc: {ns.target}:{exc}", file=sys.stderr)
        return 2
    except (TaskError, KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"dscosc: {msg}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(report) if ns.json else _summary(report))
    return 1 if violations(report) else 0


if __name__ == "__main__":
    sys.exit(main())
