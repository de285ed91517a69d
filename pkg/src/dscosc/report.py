"""Running document tasks and rendering deterministic JSON reports."""
from __future__ import annotations

import json
from fractions import Fraction

from .constructions import (
    check_stabilizing,
    grouping_check,
    glue_stabilizing,
    tail_bound_check,
    step_approximation,
    step_is_ps,
)
from .dsl import Document, Task, format_rational
from .func import INF, FuncTree, evaluate
from .oracle import certified_depth, dnorm_bounds, oracle_osc_alpha
from .oscillation import dbsc_norm, dsc_index, osc_alpha, uv_decomposition, check_strong_continuity
from .space import classify_subset, enumerate_points, format_address, is_valid_address, parse_address


class TaskError(ValueError):
    """A task that cannot be run on its document (bad verb, names or arguments)."""


def jvalue(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return v
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return format_rational(v)


def table(tree, budget: int, space=None) -> dict:
    """Address string -> value over the budget enumeration."""
    sp = space or tree.shape
    out = {}
    for addr in enumerate_points(sp, budget):
        node = tree.at(addr)
        out[format_address(addr, sp)] = jvalue(node.value) if isinstance(tree, FuncTree) else node.member
    return out


def members(s, budget: int) -> list[str]:
    return [format_address(a, s.shape) for a in s.members(budget)]


def _int(arg: str, what: str) -> int:
    try:
        return int(arg)
    except ValueError:
        raise TaskError(f"{what} must be an integer, got {arg!r}") from None


def _need(args, lo: int, hi: int, verb: str):
    if not lo <= len(args) <= hi:
        raise TaskError(f"{verb} takes {lo}..{hi} arguments, got {len(args)}")


def _func(doc: Document, name: str) -> FuncTree:
    try:
        return doc.func(name)
    except KeyError as exc:
        raise TaskError(str(exc.args[0])) from None


def run_task(doc: Document, task: Task, budget: int = 3, seed: int = 0, alpha=None) -> dict:
    verb, args = task.verb, task.args
    out = {"task": verb, "args": list(args)}
    if verb == "eval":
        _need(args, 1, 64, verb)
        f = _func(doc, args[0])
        rest = args[1:]
        if len(rest) == 1 and rest[0].isdigit():
            out["values"] = table(f, int(rest[0]))
        elif rest:
            vals = {}
            for text in rest:
                try:
                    addr = parse_address(text)
                except ValueError as exc:
                    raise TaskError(str(exc)) from None
                if not is_valid_address(f.shape, addr):
                    raise TaskError(f"address {text!r} is not a point of the space")
                vals[format_address(addr, f.shape)] = jvalue(evaluate(f, addr))
            out["values"] = vals
        else:
            out["values"] = table(f, budget)
    elif verb == "osc":
        _need(args, 1, 2, verb)
        f = _func(doc, args[0])
        n = _int(args[1], "stage") if len(args) > 1 else (alpha if alpha is not None else 1)
        prof = osc_alpha(f, n)
        out["alpha"] = n
        out["profile"] = table(prof, budget, f.shape)
        if f.drift_free:
            k = certified_depth(f)
            orc = oracle_osc_alpha(f, n, k)
            out["oracle_depth"] = k
            out["oracle_agrees"] = all(prof.at(a).value == v for a, v in orc.items())
    elif verb == "dnorm":
        _need(args, 1, 1, verb)
        f = _func(doc, args[0])
        norm = dbsc_norm(f)
        out["d_norm"] = jvalue(norm)
        uv = uv_decomposition(f)
        if uv is not None:
            out["tau"] = uv.tau
            b = dnorm_bounds(f, (uv.u, uv.v))
            out["oracle_lower"] = jvalue(b.lower)
            out["oracle_upper"] = jvalue(b.upper)
            out["u"] = table(uv.u, budget)
            out["v"] = table(uv.v, budget)
    elif verb == "indices":
        _need(args, 1, 1, verb)
        f = _func(doc, args[0])
        tr = dsc_index(f)
        out["d_index"] = tr.d_index
        out["dsc_index"] = tr.dsc_index
        out["verdict"] = tr.verdict
        out["chain"] = [{"K": members(st.K, budget), "eta": st.eta} for st in tr.dsc_chain]
    elif verb == "glue":
        _need(args, 2, 64, verb)
        f = _func(doc, args[0])
        try:
            sets = [doc.set(a) for a in args[1:]]
        except KeyError as exc:
            raise TaskError(str(exc.args[0])) from None
        seq = glue_stabilizing([(s, f) for s in sets])
        rep = check_stabilizing(seq, budget)
        out["stabilizing"] = rep.ok
        out["violations"] = list(rep.violations)
        out["settle"] = {format_address(a, f.shape): seq.settle(a) for a in enumerate_points(f.shape, budget)}
    elif verb == "stepapprox":
        _need(args, 2, 2, verb)
        f = _func(doc, args[0])
        n = _int(args[1], "n")
        sa = step_approximation(f, n)
        out["n"] = n
        out["error"] = jvalue(sa.error)
        out["bound"] = jvalue(Fraction(3, n))
        out["pieces"] = [{"m": p.m, "j": p.j, "level": jvalue(p.level(n)), "members": members(p.set, budget)}
                         for p in sa.pieces]
        out["step"] = table(sa.step, budget)
        out["ps_verified"] = step_is_ps(sa, budget).ok
    elif verb == "series":
        _need(args, 1, 2, verb)
        try:
            spec = doc.get_series(args[0])
        except KeyError as exc:
            raise TaskError(str(exc.args[0])) from None
        g = _int(args[1], "gamma") if len(args) > 1 else (alpha if alpha is not None else 4)
        lem = tail_bound_check(spec, g)
        cor = grouping_check(spec)
        out["tail_bound"] = {"hypothesis": lem.hypothesis_ok, "checks": lem.checks,
                          "violations": list(lem.violations), "max_slack": jvalue(lem.max_slack),
                          "equality_at_root": lem.equality_at_root}
        out["grouping"] = {"hypothesis": cor.hypothesis_ok, "verdict": cor.verdict, "dsc_index": cor.dsc_index,
                        "violations": list(cor.violations),
                        "blocks": [[{"start": b.start, "stop": b.stop, "bound": jvalue(b.bound)} for b in bl]
                                   for bl in cor.blocks]}
    elif verb == "classify":
        _need(args, 1, 1, verb)
        try:
            s = doc.set(args[0])
        except KeyError as exc:
            raise TaskError(str(exc.args[0])) from None
        c = classify_subset(s)
        out.update(closed=c.is_closed, open=c.is_open, ambiguous=c.is_ambiguous,
                   difference_of_closed=c.is_difference_of_closed)
    elif verb == "continuity":
        _need(args, 1, 2, verb)
        f = _func(doc, args[0])
        rep = check_strong_continuity(f, _int(args[1], "size") if len(args) > 1 else 12)
        out["closed_sets"] = rep.checked
        out["violations"] = list(rep.violations)
    elif verb == "check":
        from .checks import run_checks
        names = [a for a in args if a and a != "all"]
        results = run_checks(names or None, seed=seed)
        out["criteria"] = {r.name: {"passed": r.passed, "detail": r.detail} for r in results}
        out["violations"] = sum(not r.passed for r in results)
    else:
        raise TaskError(f"unknown task {verb!r}")
    return out


def run_document(doc: Document, budget: int = 3, seed: int = 0, alpha=None) -> dict:
    return {"reports": [run_task(doc, t, budget, seed, alpha) for t in doc.tasks]}


def dumps(report) -> str:
    return json.dumps(report, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def violations(report: dict) -> int:
    """Number of failed properties recorded anywhere in a report."""
    n = 0
    if isinstance(report, dict):
        for k, v in report.items():
            if k == "violations":
                n += v if isinstance(v, int) else len(v)
            elif k in ("oracle_agrees", "stabilizing", "ps_verified") and v is False:
                n += 1
            else:
                n += violations(v)
    elif isinstance(report, list):
        n += sum(violations(v) for v in report)
    return n
