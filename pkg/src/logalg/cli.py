"""Command-line front end.

``logalg run FILE`` executes the commands of a ``.logalg`` script;
``logalg parse FILE`` re-prints it canonically; any other verb
(``gp``, ``cotangent``, ``sqz verify`` ...) runs one command against the
declarations of ``--file`` (the shipped corpus by default)::

    logalg gp "<a,b | 2a = 2b>"
    logalg cotangent x5 --char 5
    logalg lift x5 dual --mode etale
    logalg verify-corpus group-completion

Output is JSON (``"schema": 1``, sorted keys) on stdout, diagnostics go to
stderr.  Exit codes: 0 success, 1 command error, 2 parse or usage error,
3 resource cap hit (takes priority).
"""

from __future__ import annotations

import argparse
import contextvars
import json
import re
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from . import corpus as cp
from . import cotangent as ct
from . import dsl
from . import kahler
from . import limits
from . import monoid as mon
from . import prelog as pl
from . import simplicial as simp
from . import sqzero as sz
from .errors import LogAlgError, ParseError, ResourceExceeded, TooLarge
from .monoid import MonoidHom, MonoidPresentation

SCHEMA = 1
EXIT_OK, EXIT_COMMAND, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(LogAlgError):
    pass


@dataclass
class Config:
    char: int | None = None
    mode: str = "exact"  # point | exact
    points: str = "default"
    seed: int = 0
    max_gb: int | None = None
    max_hilbert: int | None = None
    deadline_ms: int | None = None
    jobs: int = 1
    timing: bool = False

    def to_json(self) -> dict:
        return {k: v for k, v in vars(self).items() if k != "timing"}


@dataclass
class Verdict:
    command: str
    ok: bool
    result: object = None
    error: dict | None = None
    mode: dict = field(default_factory=dict)
    millis: float | None = None

    def to_json(self) -> dict:
        out = {"command": self.command, "ok": self.ok, "result": self.result, "error": self.error, "mode": self.mode}
        if self.millis is not None:
            out["millis"] = round(self.millis, 3)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        return cls(d["command"], d["ok"], d.get("result"), d.get("error"), d.get("mode", {}), d.get("millis"))


def corpus_source() -> str:
    return resources.files("logalg").joinpath("data/corpus.logalg").read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# execution


class Runner:
    def __init__(self, script: dsl.Script, config: Config):
        self.script = script
        self.config = config
        self._envs: dict = {}
        self._lock = threading.Lock()
        self.env(None)  # resolve eagerly: resolution errors are parse-level

    def env(self, char: int | None) -> dict:
        with self._lock:
            if char not in self._envs:
                self._envs[char] = dsl.resolve(self.script, char)
            return self._envs[char]

    def run(self) -> list[Verdict]:
        return self._map(self.execute, list(self.script.commands))

    def _map(self, fn, items: list) -> list:
        """Order-preserving map, threaded when ``--jobs`` > 1."""
        if self.config.jobs > 1 and len(items) > 1:
            with ThreadPoolExecutor(self.config.jobs) as ex:
                futs = [ex.submit(contextvars.copy_context().run, fn, x) for x in items]
                return [f.result() for f in futs]
        return [fn(x) for x in items]

    def execute(self, cmd: dsl.Command) -> Verdict:
        echo = dsl.statement_source(cmd)
        opts = dict(cmd.options)
        mode = {"mode": opts.get("mode", self.config.mode)}
        t0 = time.perf_counter()
        try:
            with limits.limited(self.config.max_gb, self.config.max_hilbert, self.config.deadline_ms):
                result, ok = self._dispatch(cmd, opts, mode)
            v = Verdict(echo, ok, result, None, mode)
        except (ResourceExceeded, TooLarge) as exc:
            v = Verdict(echo, False, None, {"type": type(exc).__name__, "message": str(exc), "resource": True}, mode)
        except (UsageError, ParseError) as exc:
            v = Verdict(echo, False, None, {"type": type(exc).__name__, "message": str(exc), "usage": True}, mode)
        except (LogAlgError, ValueError) as exc:
            v = Verdict(echo, False, None, {"type": type(exc).__name__, "message": str(exc)}, mode)
        except KeyError as exc:
            v = Verdict(echo, False, None, {"type": "KeyError", "message": str(exc.args[0]) if exc.args else ""}, mode)
        if self.config.timing:
            v.millis = (time.perf_counter() - t0) * 1000
        return v

    # -- argument helpers
    def _char(self, opts) -> int | None:
        c = opts.get("char")
        return int(c) if c is not None else self.config.char

    def _obj(self, arg, kinds, label, opts):
        if isinstance(arg, (dsl.MonoidLit, dsl.GensLit)):
            obj = dsl.monoid_from_literal(arg)
        elif isinstance(arg, dsl.Ref):
            obj = self.env(self._char(opts)).get(arg.name)
            if obj is None:
                raise dsl.ResolveError(f"unknown name {arg.name!r}", arg.span.line, arg.span.col)
        else:
            raise UsageError(f"expected a {label}, got {arg!r}")
        if not isinstance(obj, kinds):
            raise UsageError(f"{getattr(arg, 'name', arg)!s} is not a {label}")
        return obj

    def _args(self, cmd, n_min, n_max=None):
        n_max = n_min if n_max is None else n_max
        if not n_min <= len(cmd.args) <= n_max:
            want = str(n_min) if n_min == n_max else f"{n_min}-{n_max}"
            raise UsageError(f"{cmd.verb} takes {want} argument(s), got {len(cmd.args)}")
        return cmd.args

    def _points(self, f: pl.PreLogMorphism, opts):
        """``default`` or a comma list of ``unit``, ``zeros``, ``zero-one`` and declared points."""
        spec = str(opts.get("points", self.config.points))
        R = f.target.ring
        if spec == "default":
            return None
        pts = []
        for item in (s.strip() for s in spec.split(",")):
            if item == "unit":
                pts.append(R.unit_point())
            elif item == "zeros":
                pts.append(tuple(R.field.zero for _ in range(R.nvars)))
            elif item == "zero-one":
                pts.extend(R.zero_one_points())
            else:
                obj = self.env(self._char(opts)).get(item)
                if not isinstance(obj, dsl.PointValue):
                    raise UsageError(f"unknown point specification {item!r}")
                pts.append(tuple(obj.values))
        bad = [p for p in pts if not R.is_point(p)]
        if bad:
            raise UsageError(f"not a point of the target: {[str(x) for x in bad[0]]}")
        return pts

    # -- commands
    def _dispatch(self, cmd: dsl.Command, opts: dict, mode: dict):
        v = cmd.verb
        if v == "gp":
            (a,) = self._args(cmd, 1)
            M = self._obj(a, (MonoidPresentation,), "monoid", opts)
            gc = mon.group_completion(M)
            return {"monoid": M.to_json(), "group": gc.group.to_json(), "text": str(gc.group), "generator_images": [list(x) for x in gc.generator_images]}, True
        if v == "replete":
            (a,) = self._args(cmd, 1)
            f = self._obj(a, (MonoidHom,), "monoid map", opts)
            r = mon.repletion(f)
            exact = mon.exactness_witness(r.augmentation) is None
            return {
                "monoid": r.monoid.to_json(),
                "generators": [list(x) for x in r.embedded.vectors],
                "moduli": list(r.embedded.moduli),
                "unit": [list(x) for x in r.unit.images],
                "augmentation": [list(x) for x in r.augmentation.images],
                "source_was_exact": mon.exactness_witness(f) is None,
                "augmentation_exact": exact,
            }, exact
        if v == "omega":
            (a,) = self._args(cmd, 1)
            f = self._obj(a, (pl.PreLogMorphism,), "pre-log morphism", opts)
            Om = kahler.omega_log(f)
            pts = self._points(f, opts) or ct.default_points(f.target.ring)
            return {"module": Om.to_json(), "text": str(Om), "dims": [[[str(x) for x in p], Om.evaluate(p)] for p in pts]}, True
        if v in ("cotangent", "etale", "smooth"):
            (a,) = self._args(cmd, 1)
            f = self._obj(a, (pl.PreLogMorphism,), "pre-log morphism", opts)
            pts = self._points(f, opts)
            out = {"field": repr(f.target.field)}
            if v == "cotangent":
                T = ct.rognes_pushout(f).complex
                inv = ct.invariants(T, pts).to_json()
                out["complex"] = T.to_json()
                out["pi0"] = inv["pi0"]
                out["pi0_samples"] = inv["pi0_at_points"]
                out["pi1_samples"] = inv["pi1_at_points"]
                out["provenance"] = inv["provenance"]
            if mode["mode"] == "exact":
                if v in ("cotangent", "etale"):
                    out["etale"] = ct.is_derived_log_etale(f, pts).to_json()
                if v in ("cotangent", "smooth"):
                    out["smooth"] = ct.is_derived_log_smooth(f, pts).to_json()
                main = out["smooth" if v == "smooth" else "etale"]
                out["verdict"], out["certificate"], out["witness"] = main["verdict"], main["certificate"], main["witness"]
            return out, True
        if v == "bar-homology":
            args = self._args(cmd, 1, 2)
            M = self._obj(args[0], (MonoidPresentation,), "monoid", opts)
            d = args[1] if len(args) > 1 else 3
            if not isinstance(d, int):
                raise UsageError("the degree must be an integer")
            H = simp.bar_homology(M, d)
            return {"degrees": [h.to_json() for h in H], "text": [str(h) for h in H]}, True
        if v == "pi1-bar":
            (a,) = self._args(cmd, 1)
            M = self._obj(a, (MonoidPresentation,), "monoid", opts)
            G = simp.pi1_of_bar(M)
            same = G.is_isomorphic(mon.group_completion(M).group)
            return {"group": G.to_json(), "text": str(G), "matches_group_completion": same}, same
        if v.startswith("sqz "):
            (a,) = self._args(cmd, 1)
            E = self._obj(a, (sz.LogSquareZero,), "square-zero extension", opts)
            sub = v.split()[1]
            if sub == "verify":
                r = sz.verify_strict_exact(E)
                out = {"strict_exact": r.to_json()}
                if r.ok:
                    x = sz.exp_square(E)
                    out["exp_square"] = x.to_json()
                    return out, r.ok and x.verdict == (True, True)
                return out, False
            route = opts.get("route") or ("cdga" if E.field.char == 0 else "tor")
            if sub == "classify":
                D = sz.classify(E, route)
                return {"derivation": D.to_json(), "trivial_class": sz.is_trivial_class(D)}, True
            rt = sz.roundtrip(E, route)
            return rt.to_json(), rt.ok
        if v == "lift":
            a, b = self._args(cmd, 2)
            f = self._obj(a, (pl.PreLogMorphism,), "pre-log morphism", opts)
            E = self._obj(b, (sz.LogSquareZero,), "square-zero extension", opts)
            lm = opts.get("mode", "etale")
            if lm not in ("etale", "smooth"):
                raise UsageError("lift --mode must be etale or smooth")
            mode["mode"] = lm
            r = sz.lifting_test(f, E, lm)
            ok = r.verdict == "UniqueLift" if lm == "etale" else r.verdict != "NoLift"
            return r.to_json(), ok
        if v == "verify-corpus":
            (a,) = self._args(cmd, 1)
            if not isinstance(a, dsl.Ref) or not a.name:
                raise UsageError(f"verify-corpus needs a suite name: {', '.join(cp.SUITES)}")
            seed = int(opts.get("seed", self.config.seed))
            if a.name == "all":
                reps = self._map(lambda n: cp.verify_corpus(n, seed=seed), list(cp.SUITES))
                docs = [r.to_json() for r in reps]
                out = {"suites": docs, "passed": sum(d["passed"] for d in docs), "total": sum(d["total"] for d in docs), "suite": "all"}
                return out, all(r.ok for r in reps)
            rep = cp.verify_corpus(a.name, seed=seed)
            return rep.to_json(), rep.ok
        raise UsageError(f"unknown command {v!r}")  # pragma: no cover - parser rejects it


def run(script: dsl.Script, config: Config | None = None) -> list[Verdict]:
    return Runner(script, config or Config()).run()


def exit_code(verdicts: list[Verdict]) -> int:
    if any(v.error and v.error.get("resource") for v in verdicts):
        return EXIT_RESOURCE
    if any(v.error and v.error.get("usage") for v in verdicts):
        return EXIT_PARSE
    if any(v.error for v in verdicts):
        return EXIT_COMMAND
    return EXIT_OK


def render(verdicts: list[Verdict], config: Config, fmt: str = "json") -> str:
    if fmt == "json":
        doc = {"schema": SCHEMA, "config": config.to_json(), "results": [v.to_json() for v in verdicts]}
        return json.dumps(doc, sort_keys=True, indent=2, default=str)
    lines = []
    for v in verdicts:
        status = "ok" if v.ok else ("error" if v.error else "fail")
        lines.append(f"{v.command}  [{status}]")
        if v.error:
            lines.append(f"  {v.error['type']}: {v.error['message']}")
        else:
            lines.append("  " + _summary(v.result))
    return "\n".join(lines)


def _summary(result) -> str:
    if isinstance(result, dict):
        for key in ("text", "verdict"):
            if key in result:
                return str(result[key])
        if "etale" in result or "smooth" in result:
            parts = [f"{k}={result[k]['verdict']}" for k in ("etale", "smooth") if k in result]
            return " ".join(parts)
        if "suite" in result:
            return f"{result['passed']}/{result['total']} checks passed"
    return json.dumps(result, sort_keys=True, default=str)[:200]


# ---------------------------------------------------------------------------
# argument handling

_GLOBAL = {
    "--format": ("format", str),
    "--seed": ("seed", int),
    "--max-gb": ("max_gb", int),
    "--max-hilbert": ("max_hilbert", int),
    "--deadline-ms": ("deadline_ms", int),
    "--jobs": ("jobs", int),
    "--file": ("file", str),
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="logalg",
        description="Finitely presented monoids, log rings, cotangent complexes and square-zero extensions.",
        epilog="commands: run FILE | parse FILE | " + " | ".join(dsl.COMMANDS),
    )
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--char", type=int, default=None, help="override the coefficient field (0 or a prime)")
    p.add_argument("--mode", choices=("point", "exact"), default="exact")
    p.add_argument("--points", default="default", help="default, or a comma list of unit, zeros, zero-one and declared points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-gb", type=int, default=None, help="cap on Groebner S-pairs")
    p.add_argument("--max-hilbert", type=int, default=None, help="cap on Hilbert-basis candidates")
    p.add_argument("--deadline-ms", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identical output)")
    p.add_argument("--file", default=None, help="declarations for single commands (default: shipped corpus)")
    p.add_argument("command", nargs=argparse.REMAINDER)
    return p


def _split_globals(rest: list[str]) -> tuple[list[str], list[str]]:
    """Pull global-only flags out of the command tail."""
    glob, tail, i = [], [], 0
    while i < len(rest):
        a = rest[i]
        key = a.split("=", 1)[0]
        if key in _GLOBAL:
            if "=" in a:
                glob.append(a)
                i += 1
            else:
                glob.extend(rest[i : i + 2])
                i += 2
            continue
        if a == "--timing":
            glob.append(a)
            i += 1
            continue
        tail.append(a)
        i += 1
    return glob, tail


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _quote_values(tokens: list[str]) -> list[str]:
    """Quote flag values that are not plain DSL tokens (``--points unit,zeros``)."""
    out = []
    for i, t in enumerate(tokens):
        if i and tokens[i - 1].startswith("--") and not re.fullmatch(r"[A-Za-z0-9_]+", t):
            t = '"' + t.replace('"', "") + '"'
        out.append(t)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    p = _parser()
    ns = p.parse_args(argv)
    if ns.command:
        glob, tail = _split_globals(ns.command)
        if glob:
            ns = p.parse_args([*argv[: len(argv) - len(ns.command)], *glob, *tail])
    cmd = ns.command
    if not cmd:
        p.print_usage(sys.stderr)
        print("logalg: error: a command is required", file=sys.stderr)
        return EXIT_PARSE
    config = Config(ns.char, ns.mode, ns.points, ns.seed, ns.max_gb, ns.max_hilbert, ns.deadline_ms, max(1, ns.jobs), ns.timing)
    verb, rest = cmd[0], cmd[1:]
    try:
        if verb in ("run", "parse"):
            if len(rest) != 1:
                raise UsageError(f"{verb} takes exactly one FILE argument ('-' for stdin)")
            src = _read(rest[0])
            script = dsl.parse(src)
            if verb == "parse":
                dsl.resolve(script)
                sys.stdout.write(dsl.to_source(script))
                return EXIT_OK
        else:
            if verb == "verify-corpus" and not rest:
                raise UsageError(f"verify-corpus needs a suite name: {', '.join(cp.SUITES)}")
            decls = _read(ns.file) if ns.file else corpus_source()
            base = dsl.parse(decls)
            line = " ".join([verb, *_quote_values(rest)]) + ";"
            extra = dsl.parse(line)
            script = dsl.Script(base.declarations + extra.statements)
        runner = Runner(script, config)
    except ParseError as exc:
        print(f"logalg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"logalg: usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LogAlgError as exc:
        print(f"logalg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"logalg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    verdicts = runner.run()
    fmt = ns.format
    sys.stdout.write(render(verdicts, config, fmt) + "\n")
    for v in verdicts:
        if v.error:
            print(f"logalg: {v.command} -> {v.error['type']}: {v.error['message']}", file=sys.stderr)
    return exit_code(verdicts)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
