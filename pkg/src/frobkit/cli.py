"""Session files (.frk): parsing, execution and deterministic reports.

A session is line oriented::

    char 2
    ring R vars u
    ring S vars v ideal { v^3 }
    map phi : R -> S { u = v }
    module M over S gens 0, 1 rels { [v, 0]; [v^2, v] }
    cmd betti k --cutoff 5

Module names usable in commands: a declared module, a ring name (the ring
as a module over itself), ``k`` (residue field of the most recently declared
ring) and ``F*Name`` (Frobenius pushforward of a ring).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import click

from . import __version__
from .invariants import (INCONCLUSIVE, PASS, FAIL, blimp_split_check, classify_growth,
                         deviations_from_poincare, eth_check, gorenstein_theorem_check,
                         kunz_test, radu_andre_test, theorem_main_check)
from .modules import FiniteModule, ModuleError
from .poly import PolynomialSyntaxError
from .pushforward import NotModuleFinite, RelativeFrobenius, frobenius_pushforward
from .resolution import BettiTable, betti_and_poincare, hilbert_series
from .rings import RingError, make_quotient_ring, make_ring_map

COMMANDS = ("betti", "pushforward", "relfrob", "test-kunz", "test-regular", "test-ci",
            "test-gorenstein", "check-main", "check-eth", "check-blimp", "deviations", "hilbert")
ARITY = {"betti": 1, "pushforward": 1, "relfrob": 1, "test-kunz": 1, "test-regular": 1,
         "test-ci": 1, "test-gorenstein": 1, "check-main": 1, "check-eth": 2, "check-blimp": 2,
         "deviations": 1, "hilbert": 1}
OPTIONS = {"--cutoff": int, "--e": int, "--delta": Fraction}
DEFAULT_CUTOFF = 8


def _message(exc) -> str:
    text = str(exc)
    code = getattr(exc, "code", None)
    return text[len(code) + 2:] if code and text.startswith(f"{code}: ") else text


class SessionError(ValueError):
    """Parse or resolution failure with a 1-based line and column."""

    def __init__(self, code: str, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{code} at {line}:{column}: {message}")
        self.code = code
        self.message = message
        self.line = line
        self.column = column


# --- declarations ----------------------------------------------------------------------

@dataclass(frozen=True)
class RingDecl:
    name: str
    variables: tuple          # ((name, Fraction weight), ...)
    ideal: tuple              # canonical polynomial strings


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: str
    target: str
    images: tuple             # ((source variable, canonical polynomial string), ...)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    ring: str
    degrees: tuple
    relations: tuple          # tuple of tuples of canonical polynomial strings


@dataclass(frozen=True)
class CommandDecl:
    command: str
    args: tuple
    options: tuple            # ((flag, value), ...) in source order
    context: str | None       # most recent ring before the command


@dataclass
class SessionFile:
    char: int | None = None
    statements: list = field(default_factory=list)
    rings: dict = field(default_factory=dict, repr=False, compare=False)
    maps: dict = field(default_factory=dict, repr=False, compare=False)
    modules: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def commands(self) -> list:
        return [s for s in self.statements if isinstance(s, CommandDecl)]


# --- parsing ------------------------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RING = re.compile(rf"ring\s+({_NAME})\s+vars\s+(.*?)\s*(?:ideal\s*\{{(.*)\}})?\s*$")
_MAP = re.compile(rf"map\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*\{{(.*)\}}\s*$")
_MODULE = re.compile(rf"module\s+({_NAME})\s+over\s+({_NAME})\s+gens\s+(.*?)\s*"
                     rf"(?:rels\s*\{{(.*)\}})?\s*$")
_VAR = re.compile(rf"\s*({_NAME})\s*(?::\s*(\d+(?:/\d+)?))?\s*$")


def _fmt_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _split_items(body: str, sep: str = ";"):
    """Split on sep, yielding (offset, item) with offsets into body."""
    pos = 0
    for part in body.split(sep):
        if part.strip():
            yield pos + len(part) - len(part.lstrip()), part.strip()
        pos += len(part) + 1


def _poly(ring, text, line, col):
    try:
        return ring.P(text)
    except PolynomialSyntaxError as exc:
        raise SessionError("SYNTAX", exc.message, line, col + exc.column) from None
    except ValueError as exc:
        raise SessionError("SYNTAX", str(exc), line, col) from None


def parse_session(text: str) -> SessionFile:
    s = SessionFile()
    last_ring = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        keyword = body.split()[0]
        col0 = indent + 1
        if keyword == "char":
            parts = body.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise SessionError("SYNTAX", "expected 'char <p>'", lineno, col0)
            p = int(parts[1])
            if s.char is not None and s.char != p:
                raise SessionError("CHARACTERISTIC", "a session has a single characteristic",
                                   lineno, col0)
            if s.rings:
                raise SessionError("SYNTAX", "char must precede ring declarations", lineno, col0)
            from .field import is_prime
            if not is_prime(p):
                raise SessionError("CHARACTERISTIC", f"{p} is not prime", lineno, col0 + 5)
            s.char = p
        elif keyword == "ring":
            last_ring = _parse_ring(s, body, lineno, col0)
        elif keyword == "map":
            _parse_map(s, body, lineno, col0)
        elif keyword == "module":
            _parse_module(s, body, lineno, col0)
        elif keyword == "cmd":
            _parse_command(s, body, lineno, col0, last_ring)
        else:
            raise SessionError("SYNTAX", f"unknown statement '{keyword}'", lineno, col0)
    return s


def _need_char(s, lineno, col):
    if s.char is None:
        raise SessionError("CHARACTERISTIC", "declare 'char <p>' first", lineno, col)
    return s.char


def _parse_ring(s: SessionFile, body, lineno, col0):
    m = _RING.match(body)
    if not m:
        raise SessionError("SYNTAX", "expected 'ring <Name> vars <v:w, ...> [ideal { ... }]'",
                           lineno, col0)
    name, vars_text, ideal_text = m.group(1), m.group(2), m.group(3)
    if name in s.rings or name in s.maps or name in s.modules or name == "k":
        raise SessionError("DUPLICATE", f"name '{name}' already used", lineno, col0)
    p = _need_char(s, lineno, col0)
    variables = []
    for off, item in _split_items(vars_text, ","):
        vm = _VAR.match(item)
        if not vm:
            raise SessionError("SYNTAX", f"bad variable '{item}'", lineno,
                               col0 + m.start(2) + off)
        w = Fraction(vm.group(2)) if vm.group(2) else Fraction(1)
        if w <= 0:
            raise SessionError("SYNTAX", "weights must be positive", lineno,
                               col0 + m.start(2) + off)
        variables.append((vm.group(1), w))
    try:
        ring = make_quotient_ring(p, variables, (), name)
    except ValueError as exc:
        raise SessionError("SYNTAX", str(exc), lineno, col0 + m.start(2)) from None
    gens = []
    if ideal_text is not None:
        base = col0 + m.start(3)
        for off, item in _split_items(ideal_text):
            f = _poly(ring, item, lineno, base + off)
            gens.append((f, base + off))
    try:
        ring = make_quotient_ring(p, variables, [f for f, _ in gens], name)
    except RingError as exc:
        bad = next((c for f, c in gens if exc.code == "NONHOMOGENEOUS" and str(f) in str(exc)),
                   col0)
        raise SessionError(exc.code, _message(exc), lineno, bad) from None
    s.rings[name] = ring
    s.statements.append(RingDecl(name, tuple(variables), tuple(str(f) for f, _ in gens)))
    return name


def _lookup_ring(s, name, lineno, col):
    if name not in s.rings:
        raise SessionError("UNKNOWN_IDENTIFIER", f"unknown ring '{name}'", lineno, col)
    return s.rings[name]


def _parse_map(s: SessionFile, body, lineno, col0):
    m = _MAP.match(body)
    if not m:
        raise SessionError("SYNTAX", "expected 'map <Name> : <Src> -> <Tgt> { v = poly; ... }'",
                           lineno, col0)
    name, src_name, tgt_name, assigns = m.groups()
    if name in s.rings or name in s.maps or name in s.modules:
        raise SessionError("DUPLICATE", f"name '{name}' already used", lineno, col0)
    src = _lookup_ring(s, src_name, lineno, col0 + m.start(2))
    tgt = _lookup_ring(s, tgt_name, lineno, col0 + m.start(3))
    base = col0 + m.start(4)
    images = {}
    for off, item in _split_items(assigns):
        if "=" not in item:
            raise SessionError("SYNTAX", "expected '<var> = <poly>'", lineno, base + off)
        var, rhs = item.split("=", 1)
        var = var.strip()
        if var not in src.names:
            raise SessionError("UNKNOWN_IDENTIFIER", f"'{var}' is not a variable of {src_name}",
                               lineno, base + off)
        rcol = base + off + item.index("=") + 1 + (len(rhs) - len(rhs.lstrip()))
        images[var] = _poly(tgt, rhs.strip(), lineno, rcol)
    missing = [v for v in src.names if v not in images]
    if missing:
        raise SessionError("UNASSIGNED", f"no image for {', '.join(missing)}", lineno, base)
    try:
        phi = make_ring_map(src, tgt, images, name=name)
    except RingError as exc:
        raise SessionError(exc.code, _message(exc), lineno, base) from None
    s.maps[name] = phi
    s.statements.append(MapDecl(name, src_name, tgt_name,
                                tuple((v, str(images[v])) for v in src.names)))


def _parse_module(s: SessionFile, body, lineno, col0):
    m = _MODULE.match(body)
    if not m:
        raise SessionError("SYNTAX", "expected 'module <Name> over <Ring> gens <d, ...> "
                                     "[rels { [f, ...]; ... }]'", lineno, col0)
    name, ring_name, degs_text, rels_text = m.groups()
    if name in s.rings or name in s.maps or name in s.modules or name == "k":
        raise SessionError("DUPLICATE", f"name '{name}' already used", lineno, col0)
    ring = _lookup_ring(s, ring_name, lineno, col0 + m.start(2))
    try:
        degrees = [Fraction(d.strip()) for d in degs_text.split(",") if d.strip()]
    except ValueError:
        raise SessionError("SYNTAX", "bad generator degree", lineno, col0 + m.start(3)) from None
    rels, rel_strs = [], []
    if rels_text is not None:
        base = col0 + m.start(4)
        for off, item in _split_items(rels_text):
            if not (item.startswith("[") and item.endswith("]")):
                raise SessionError("SYNTAX", "relations are written [f_1, ..., f_g]", lineno,
                                   base + off)
            entries = item[1:-1].split(",")
            if len(entries) != len(degrees):
                raise SessionError("ARITY", f"relation needs {len(degrees)} entries", lineno,
                                   base + off)
            vec, strs, pos = {}, [], base + off + 1
            for j, e in enumerate(entries):
                f = _poly(ring, e.strip(), lineno, pos + len(e) - len(e.lstrip()))
                pos += len(e) + 1
                strs.append(str(f))
                for mono, c in f.as_dict().items():
                    vec[(j, mono)] = c
            rels.append(vec)
            rel_strs.append(tuple(strs))
    try:
        M = FiniteModule(ring, degrees, rels, name=name)
    except (ModuleError, ValueError) as exc:
        code = getattr(exc, "code", "SYNTAX")
        raise SessionError(code, _message(exc), lineno, col0) from None
    s.modules[name] = M
    s.statements.append(ModuleDecl(name, ring_name, tuple(degrees), tuple(rel_strs)))


def _parse_command(s: SessionFile, body, lineno, col0, context):
    toks = body.split()[1:]
    if not toks:
        raise SessionError("SYNTAX", "expected 'cmd <command> <args...>'", lineno, col0)
    name = toks[0]
    if name not in COMMANDS:
        raise SessionError("UNKNOWN_COMMAND", f"unknown command '{name}'", lineno,
                           col0 + body.index(name))
    args, options = [], []
    i = 1
    while i < len(toks):
        t = toks[i]
        if t.startswith("--"):
            if t not in OPTIONS or i + 1 >= len(toks):
                raise SessionError("SYNTAX", f"bad option '{t}'", lineno, col0 + body.index(t))
            try:
                val = OPTIONS[t](toks[i + 1])
            except ValueError:
                raise SessionError("SYNTAX", f"bad value for {t}", lineno,
                                   col0 + body.index(t)) from None
            options.append((t, val))
            i += 2
        else:
            args.append(t)
            i += 1
    if len(args) != ARITY[name]:
        raise SessionError("ARITY", f"{name} takes {ARITY[name]} argument(s)", lineno, col0)
    for a in args:
        if not _resolvable(s, a, context):
            raise SessionError("UNKNOWN_IDENTIFIER", f"unknown identifier '{a}'", lineno,
                               col0 + body.index(a))
    s.statements.append(CommandDecl(name, tuple(args), tuple(options), context))


def _resolvable(s, a, context) -> bool:
    if a in s.rings or a in s.maps or a in s.modules:
        return True
    if a == "k":
        return context is not None
    return a.startswith("F*") and a[2:] in s.rings


# --- printing ----------------------------------------------------------------------------

def format_session(s: SessionFile) -> str:
    out = []
    if s.char is not None:
        out.append(f"char {s.char}")
    for st in s.statements:
        if isinstance(st, RingDecl):
            vs = ", ".join(f"{n}:{_fmt_rat(w)}" for n, w in st.variables)
            line = f"ring {st.name} vars {vs}"
            if st.ideal:
                line += " ideal { " + "; ".join(st.ideal) + " }"
            out.append(line)
        elif isinstance(st, MapDecl):
            body = "; ".join(f"{v} = {h}" for v, h in st.images)
            out.append(f"map {st.name} : {st.source} -> {st.target} {{ {body} }}")
        elif isinstance(st, ModuleDecl):
            line = f"module {st.name} over {st.ring} gens " + ", ".join(
                _fmt_rat(d) for d in st.degrees)
            if st.relations:
                line += " rels { " + "; ".join("[" + ", ".join(r) + "]"
                                               for r in st.relations) + " }"
            out.append(line)
        else:
            opts = "".join(f" {k} {_fmt_rat(v)}" for k, v in st.options)
            out.append(f"cmd {st.command} {' '.join(st.args)}{opts}")
    return "\n".join(out) + "\n"


# --- execution -----------------------------------------------------------------------------

@dataclass
class RunOptions:
    cutoff: int = DEFAULT_CUTOFF
    e: int = 1
    delta: Fraction = Fraction(1, 10)
    strict: bool = False
    fail_fast: bool = False
    jobs: int = 1
    timings: bool = False


def default_cutoff() -> int:
    env = os.environ.get("FROBKIT_DEFAULT_CUTOFF")
    return int(env) if env else DEFAULT_CUTOFF


def _module(s: SessionFile, name: str, context: str | None, e: int) -> FiniteModule:
    if name in s.modules:
        return s.modules[name]
    if name in s.rings:
        return FiniteModule(s.rings[name], [0], [])
    if name == "k":
        return FiniteModule.residue_field(s.rings[context])
    return frobenius_pushforward(s.rings[name[2:]], e)


def _ring(s, name):
    if name not in s.rings:
        raise SessionError("TYPE", f"'{name}' is not a ring")
    return s.rings[name]


def _map(s, name):
    if name not in s.maps:
        raise SessionError("TYPE", f"'{name}' is not a map")
    return s.maps[name]


def _table_data(name, table: BettiTable) -> dict:
    return {"object": name, "totals": table.totals(),
            "table": [[n, d, c] for n, d, c in table.rows()]}


def _verdict_result(v) -> tuple:
    data = {"claim": v.claim, "outcome": v.outcome, "evidence": v.evidence}
    if v.witness is not None:
        data["witness"] = v.witness
    return v.verdict, v.outcome, data, v.cutoffs


def run_command(s: SessionFile, cmd: CommandDecl, opts: RunOptions) -> dict:
    o = dict(cmd.options)
    N = o.get("--cutoff", opts.cutoff)
    e = o.get("--e", opts.e)
    delta = float(o.get("--delta", opts.delta))
    args = cmd.args
    name = cmd.command
    start = time.perf_counter()
    try:
        verdict, outcome, data, cutoffs = _dispatch(s, cmd, name, args, N, e, delta)
    except (SessionError, RingError, ModuleError, NotModuleFinite, ValueError) as exc:
        verdict, outcome = "ERROR", "ERROR"
        data = {"error": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
        cutoffs = {"N": N, "e": e}
    ms = round((time.perf_counter() - start) * 1000) if opts.timings else None
    data = dict(data, args=list(args))
    return {"command": name, "verdict": verdict, "outcome": outcome, "data": data,
            "cutoffs": cutoffs, "ms": ms}


def _dispatch(s, cmd, name, args, N, e, delta):
    ctx = cmd.context
    if name == "betti":
        M = _module(s, args[0], ctx, e)
        table, P = betti_and_poincare(M, N)
        data = _table_data(args[0], table)
        data["poincare"] = P.coefficients
        if N >= 4:
            data["growth"] = classify_growth(P, delta).label
        return "COMPUTED", PASS, data, {"N": N, "e": e}
    if name == "pushforward":
        M = frobenius_pushforward(_ring(s, args[0]), e)
        data = {"ngens": M.ngens, "degrees": list(M.degrees), "nrelations": len(M.relations),
                "free": not M.relations}
        return "COMPUTED", PASS, data, {"e": e}
    if name == "relfrob":
        rf = RelativeFrobenius(_map(s, args[0]), e)
        M = rf.module
        data = {"ring": repr(rf.A), "ngens": M.ngens, "degrees": list(M.degrees),
                "nrelations": len(M.relations), "free": not M.relations}
        return "COMPUTED", PASS, data, {"e": e}
    if name == "test-kunz":
        return _verdict_result(kunz_test(_ring(s, args[0]), e))
    if name in ("test-regular", "test-ci"):
        v = radu_andre_test(_map(s, args[0]), e, N, delta=delta)
        verdict, outcome, data, cut = _verdict_result(v)
        if name == "test-ci" and outcome != INCONCLUSIVE:
            from .rings import fiber_ring
            fib = fiber_ring(_map(s, args[0]))
            _, Pk = betti_and_poincare(FiniteModule.residue_field(fib), N)
            eps = deviations_from_poincare(Pk).eps
            data["fiber_deviations"] = eps
            data["fiber_ci_in_window"] = not any(eps[2:])
        return verdict, outcome, data, cut
    if name == "test-gorenstein":
        return _verdict_result(gorenstein_theorem_check(_map(s, args[0]), e, N))
    if name == "check-main":
        return _verdict_result(theorem_main_check(_map(s, args[0]), e, N, delta=delta))
    if name == "check-eth":
        S = _ring(s, args[0])
        return _verdict_result(eth_check(S, _module_over(s, args[1], S, e), e, N, delta=delta))
    if name == "check-blimp":
        S = _ring(s, args[0])
        kw = {"e": e} if "--e" in dict(cmd.options) else {}
        return _verdict_result(blimp_split_check(S, _module_over(s, args[1], S, e), N=N, **kw))
    if name == "deviations":
        S = _ring(s, args[0])
        _, P = betti_and_poincare(FiniteModule.residue_field(S), N)
        eps = deviations_from_poincare(P).eps
        return "COMPUTED", PASS, {"poincare": P.coefficients, "deviations": eps,
                                  "complete_intersection_in_window": not any(eps[2:])}, {"N": N}
    if name == "hilbert":
        a = args[0]
        M = _module(s, a, ctx, e) if a not in s.maps else None
        if M is None:
            raise SessionError("TYPE", f"'{a}' is not a ring or module")
        hs = hilbert_series(M)
        top = max(Fraction(N), max(M.degrees, default=0) + N)
        coeffs = [[d, c] for d, c in hs.coefficients(top).items()]
        return "COMPUTED", PASS, {"series": str(hs), "coefficients": coeffs}, {"N": N}
    raise SessionError("UNKNOWN_COMMAND", name)


def _module_over(s, name, S, e):
    ctx_ring = None
    for rn, r in s.rings.items():
        if r is S:
            ctx_ring = rn
    M = _module(s, name, ctx_ring, e)
    if M.ring != S:
        raise SessionError("TYPE", f"'{name}' is not a module over {S.name}")
    return M


def _run_one(payload):
    text, index, opts = payload
    s = parse_session(text)
    return run_command(s, s.commands[index], opts)


@dataclass
class Report:
    version: str
    input_sha256: str
    results: list

    def exit_code(self, strict: bool = False) -> int:
        outcomes = {r["outcome"] for r in self.results}
        if outcomes & {FAIL, "ERROR"}:
            return 2
        if INCONCLUSIVE in outcomes:
            return 2 if strict else 3
        return 0


def execute(session: SessionFile, opts: RunOptions | None = None, text: str | None = None,
            source: bytes | None = None) -> Report:
    opts = opts or RunOptions(cutoff=default_cutoff())
    if source is None:
        source = (text if text is not None else format_session(session)).encode()
    digest = hashlib.sha256(source).hexdigest()
    cmds = session.commands
    results = []
    if opts.jobs > 1 and len(cmds) > 1 and not opts.fail_fast:
        payload_text = text if text is not None else format_session(session)
        with ProcessPoolExecutor(max_workers=opts.jobs) as pool:
            results = list(pool.map(_run_one, [(payload_text, i, opts) for i in range(len(cmds))]))
    else:
        for cmd in cmds:
            r = run_command(session, cmd, opts)
            results.append(r)
            if opts.fail_fast and r["outcome"] in (FAIL, "ERROR"):
                break
    return Report(__version__, digest, results)


# --- emitting ---------------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return _fmt_rat(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return _fmt_rat(Fraction(x).limit_denominator(10**6))
    if isinstance(x, dict):
        return {str(_jsonable(k)): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


def _public(r: dict) -> dict:
    return {k: r[k] for k in ("command", "verdict", "data", "cutoffs", "ms")}


def emit(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        doc = {"version": report.version, "input_sha256": report.input_sha256,
               "results": [_public(r) for r in report.results]}
        return (json.dumps(_jsonable(doc), sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["object", "n", "internal_degree", "beta"])
        for r in report.results:
            for obj, rows in _tables_of(r):
                for n, d, c in rows:
                    w.writerow([obj, n, _fmt_rat(d), c])
        return buf.getvalue().encode()
    if fmt == "text":
        return _emit_text(report).encode()
    raise ValueError(f"unknown format {fmt}")


def _tables_of(r):
    data = r["data"]
    if "table" in data:
        yield data.get("object", r["command"]), data["table"]
    ev = data.get("evidence", {})
    for side in ("relative", "fiber", "pushforward", "residue_field"):
        t = ev.get(side)
        if isinstance(t, dict) and "table" in t:
            yield f"{'/'.join(data['args'])}:{side}", t["table"]


def _emit_text(report: Report) -> str:
    lines = [f"frobkit {report.version}  input {report.input_sha256[:16]}"]
    for r in report.results:
        head = f"{r['command']} {' '.join(r['data'].get('args', []))}: {r['verdict']}"
        if r["ms"] is not None:
            head += f"  ({r['ms']} ms)"
        lines.append(head)
        for obj, rows in _tables_of(r):
            lines.append(f"  [{obj}]")
            lines.extend("  " + ln for ln in _betti_text(rows).splitlines())
        for k, v in sorted(r["data"].items()):
            if k in ("table", "args", "evidence"):
                continue
            lines.append(f"  {k}: {_jsonable(v)}")
        for k, v in sorted(r["data"].get("evidence", {}).items()):
            if isinstance(v, dict) and "table" in v:
                continue
            lines.append(f"  {k}: {_jsonable(v)}")
    return "\n".join(lines) + "\n"


def _betti_text(rows) -> str:
    ent = {(n, Fraction(d)): c for n, d, c in rows}
    if not ent:
        return "(empty)"
    ns = range(0, max(n for n, _ in ent) + 1)
    degs = sorted({d for _, d in ent})
    w = max(5, max(len(_fmt_rat(d)) for d in degs) + 1)
    out = [" " * w + "".join(f"{n:>6}" for n in ns)]
    for d in degs:
        out.append(f"{_fmt_rat(d):>{w}}" + "".join(f"{ent.get((n, d), '.'):>6}" for n in ns))
    out.append(f"{'total':>{w}}" + "".join(
        f"{sum(c for (k, _), c in ent.items() if k == n):>6}" for n in ns))
    return "\n".join(out)


# --- entry point -------------------------------------------------------------------------------

@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("session", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
@click.option("--cutoff", type=int, default=None, help="Homological cutoff (default 8).")
@click.option("--e", "e", type=int, default=1, show_default=True, help="Frobenius iterate.")
@click.option("--delta", type=str, default="1/10", show_default=True,
              help="Polynomial-growth slack on Betti ratios.")
@click.option("--strict", is_flag=True, help="Treat INCONCLUSIVE results as failures.")
@click.option("--fail-fast", is_flag=True, help="Stop at the first FAIL or ERROR.")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Run independent commands in parallel.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write report here.")
@click.option("--timings", is_flag=True, help="Record per-command wall time (breaks determinism).")
def main(session, cutoff, e, delta, strict, fail_fast, jobs, fmt, out, timings):
    """Run the commands of a .frk SESSION file and print a report."""
    raw = click.open_file(session, "rb").read()
    text = raw.decode("utf-8")
    try:
        s = parse_session(text)
    except SessionError as exc:
        click.echo(f"{session}:{exc.line}:{exc.column}: {exc.code}: {exc.message}", err=True)
        sys.exit(2)
    opts = RunOptions(cutoff=cutoff if cutoff is not None else default_cutoff(), e=e,
                      delta=Fraction(delta), strict=strict, fail_fast=fail_fast, jobs=jobs,
                      timings=timings)
    report = execute(s, opts, text=text, source=raw)
    data = emit(report, fmt)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    sys.exit(report.exit_code(strict))


if __name__ == "__main__":
    main()
