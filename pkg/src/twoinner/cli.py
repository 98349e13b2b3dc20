"""Command-line entry point: ``twoinner {axioms,verify,integral,sharpness,fuzz}``.

Exit codes: 0 all verdicts hold, 1 some chain was violated, 2 usage, parse or
precondition error, 3 some input missed the hypothesis (and nothing was
violated).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, TextIO

import numpy as np

from .errors import TwoInnerError
from .funcspace import ParseError, Prop, QuadratureDomain, WeightedL2, evaluate_prop, parse_expr
from .fuzz import run_fuzz
from .linalg import COMPLEX, DEFAULT_TOL, MODES, REAL, WeightedInnerSpace
from .reverses import BoundsPair, Form, InequalityReport, Verdict, evaluate
from .sharpness import EPSILON_GRID, epsilon_ratios, estimate_constant
from .two_inner import TwoInnerSpace, audit_axioms

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_UNMET = 0, 1, 2, 3


class InputError(TwoInnerError, ValueError):
    """A malformed vector file; the message names the offending field."""


# --------------------------------------------------------------------------- encoding


def encode(v: Any) -> Any:
    """JSON-ready form: complex numbers become ``[re, im]``, arrays become lists."""
    if isinstance(v, np.ndarray):
        return [encode(e) for e in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [encode(e) for e in v]
    if isinstance(v, dict):
        return {k: encode(e) for k, e in v.items()}
    if isinstance(v, (complex, np.complexfloating)):
        return [encode(v.real), encode(v.imag)]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if hasattr(v, "value") and isinstance(v.value, str):
        return v.value
    return v


def dumps(record: dict) -> str:
    # float repr is the shortest string that round-trips, so nothing is lost
    return json.dumps(encode(record), ensure_ascii=False, allow_nan=False)


def digest(inputs: dict) -> str:
    return hashlib.sha256(dumps(inputs).encode("utf-8")).hexdigest()


def report_record(rep: InequalityReport, inputs: dict, elapsed: float, **extra) -> dict:
    return {
        **extra,
        "form": rep.form.value,
        "inputs_digest": digest(inputs),
        "condition": rep.condition_value,
        "condition_scale": rep.condition_scale,
        "chain": [{"label": k, "value": v} for k, v in rep.chain],
        "slacks": list(rep.slacks),
        "scale": rep.scale,
        "tol": rep.tol,
        "verdict": rep.verdict.value,
        "diagnostics": rep.diagnostics,
        "elapsed_s": elapsed,
    }


def exit_code(verdicts) -> int:
    verdicts = list(verdicts)
    if Verdict.VIOLATED in verdicts:
        return EXIT_VIOLATED
    if Verdict.HYPOTHESIS_UNMET in verdicts:
        return EXIT_UNMET
    return EXIT_OK


# --------------------------------------------------------------------------- output


class Emitter:
    def __init__(self, stream: TextIO, fmt: str):
        self.stream = stream
        self.fmt = fmt

    def record(self, rec: dict, text: str) -> None:
        self.stream.write((dumps(rec) if self.fmt == "jsonl" else text) + "\n")


def fmt_num(v: Any) -> str:
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def report_table(rep: InequalityReport, title: str, note: str = "") -> str:
    width = max(len(k) for k, _ in rep.chain)
    lines = [f"== {title}: {rep.verdict.value}{note}", f"   hypothesis Re(Ay-x, x-ay|z) = {fmt_num(rep.condition_value)}"]
    for i, (k, v) in enumerate(rep.chain):
        slack = f"   slack {fmt_num(rep.slacks[i - 1])}" if i else ""
        lines.append(f"   {k:<{width}}  {fmt_num(v)}{slack}")
    return "\n".join(lines)


@contextmanager
def open_output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


# --------------------------------------------------------------------------- vector files


def _scalar(value: Any, name: str) -> complex | float:
    if isinstance(value, bool):
        raise InputError(f"field {name!r}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise InputError(f"field {name!r}: expected a number or [re, im], got {value!r}")


def _array(value: Any, name: str) -> list:
    if not isinstance(value, list) or not value:
        raise InputError(f"field {name!r}: expected a non-empty array")
    return [_scalar(e, f"{name}[{i}]") for i, e in enumerate(value)]


def load_vector_file(path: str) -> dict:
    """Read ``{x, y, z, a, A, [weights], [mode]}``; complex entries as ``[re, im]``."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(raw, dict):
        raise InputError(f"{path}: expected an object with fields x, y, z, a, A")
    for key in ("x", "y", "z", "a", "A"):
        if key not in raw:
            raise InputError(f"field {key!r} is missing")
    data = {k: _array(raw[k], k) for k in ("x", "y", "z")}
    data["a"], data["A"] = _scalar(raw["a"], "a"), _scalar(raw["A"], "A")
    n = len(data["x"])
    for k in ("y", "z"):
        if len(data[k]) != n:
            raise InputError(f"field {k!r}: length {len(data[k])} differs from len(x) = {n}")
    if "weights" in raw:
        w = _array(raw["weights"], "weights")
        if any(isinstance(e, complex) for e in w) or len(w) != n:
            raise InputError(f"field 'weights': expected {n} real numbers")
        data["weights"] = w
    else:
        data["weights"] = [1.0] * n
    any_complex = any(isinstance(e, complex) for k in ("x", "y", "z") for e in data[k]) or any(
        isinstance(data[k], complex) for k in ("a", "A")
    )
    mode = raw.get("mode", COMPLEX if any_complex else REAL)
    if mode not in MODES:
        raise InputError(f"field 'mode': expected one of {list(MODES)}, got {mode!r}")
    data["mode"] = mode
    return data


# --------------------------------------------------------------------------- commands


def cmd_axioms(args, out: Emitter) -> int:
    s = TwoInnerSpace.unit(args.dim, args.mode, args.tol)
    t0 = time.perf_counter()
    rep = audit_axioms(s, args.trials, args.seed)
    elapsed = time.perf_counter() - t0
    for name, r in rep.results.items():
        rec = {
            "command": "axioms", "axiom": name, "dim": rep.dim, "mode": rep.mode, "trials": rep.trials,
            "seed": rep.seed, "worst_residual": r.worst_residual, "worst_trial": r.trial,
            "tol": r.tol, "passed": r.passed,
        }
        out.record(rec, f"{name:<4} worst residual {r.worst_residual:.3e} (trial {r.trial})  {'ok' if r.passed else 'FAIL'}")
    out.record(
        {"command": "axioms", "summary": True, "passed": rep.passed, "failed": rep.failed(), "elapsed_s": elapsed},
        f"axioms dim={rep.dim} mode={rep.mode} trials={rep.trials}: {'all pass' if rep.passed else 'failed ' + ', '.join(rep.failed())}",
    )
    return EXIT_OK if rep.passed else EXIT_VIOLATED


def cmd_verify(args, out: Emitter) -> int:
    data = load_vector_file(args.input)
    space = TwoInnerSpace(WeightedInnerSpace(np.array(data["weights"]), data["mode"]), args.tol)
    x, y, z = (space.vector(data[k]) for k in ("x", "y", "z"))
    b = BoundsPair(data["a"], data["A"])
    t0 = time.perf_counter()
    rep = evaluate(space, args.form, x, y, z, b, args.tol)
    elapsed = time.perf_counter() - t0
    rec = report_record(rep, data, elapsed, command="verify")
    out.record(rec, report_table(rep, rep.form.name))
    if rep.verdict is Verdict.VIOLATED:
        dump_reproducer(args.repro_dir, rep.form, 0, data)
    return exit_code([rep.verdict])


def _interval(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    return lo, hi


def cmd_integral(args, out: Emitter) -> int:
    exprs = {k: parse_expr(getattr(args, k)) for k in ("f", "g", "h", "rho")}
    lo, hi = args.interval
    w = WeightedL2(exprs["rho"], QuadratureDomain(lo, hi, args.panels, args.nodes_per_panel))
    t0 = time.perf_counter()
    rep = evaluate_prop(args.prop, exprs["f"], exprs["g"], exprs["h"], w, args.m_lo, args.M_hi, args.grid, args.tol)
    elapsed = time.perf_counter() - t0
    inputs = {
        "prop": args.prop, "f": args.f, "g": args.g, "h": args.h, "rho": args.rho, "interval": [lo, hi],
        "m": args.m_lo, "M": args.M_hi, "panels": args.panels, "nodes_per_panel": args.nodes_per_panel,
    }
    rec = report_record(rep, inputs, elapsed, command="integral", prop=args.prop)
    out.record(rec, report_table(rep, f"proposition {args.prop} ({rep.form.name})", f"  [pair {rep.diagnostics['synchronous']}]"))
    return exit_code([rep.verdict])


def cmd_sharpness(args, out: Emitter) -> int:
    s = TwoInnerSpace.unit(args.dim, args.mode, args.tol)
    t0 = time.perf_counter()
    est = estimate_constant(s, args.form, args.trials, args.seed)
    elapsed = time.perf_counter() - t0
    over = est.estimate - est.target_constant
    rec = {
        "command": "sharpness", "form": est.form.value, "dim": args.dim, "mode": args.mode,
        "trials": est.trials, "seed": est.seed, "estimate": est.estimate, "target": est.target_constant,
        "source": est.source, "excess": over, "elapsed_s": elapsed,
    }
    code = EXIT_VIOLATED if over > args.tol else EXIT_OK
    out.record(rec, f"{est.form.name}: estimate {est.estimate:.17g} (target {est.target_constant}, from {est.source})")
    if args.epsilon_grid:
        z = s.vector(np.random.default_rng(args.seed).standard_normal(args.dim))
        for eps, ratio in epsilon_ratios(s, z, EPSILON_GRID, args.seed):
            expected = 1.0 / (2.0 * (math.sqrt(1.0 + eps) + 1.0))
            out.record(
                {"command": "sharpness", "epsilon": eps, "ratio": ratio, "expected": expected},
                f"   eps={eps:<8g} ratio {ratio:.17g}  expected {expected:.17g}",
            )
    return code


def dump_reproducer(directory: str, form: Form, trial: int, inputs: dict) -> Path:
    path = Path(directory) / f"repro-{form.value}-{trial}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps({**inputs, "form": form.value}) + "\n", encoding="utf-8")
    return path


def cmd_fuzz(args, out: Emitter) -> int:
    s = TwoInnerSpace.unit(args.dim, args.mode, args.tol)
    t0 = time.perf_counter()
    res = run_fuzz(s, args.trials, args.seed)
    elapsed = time.perf_counter() - t0
    verdicts = []
    for fail in res.failures:  # already in trial order
        rep, inst = fail.report, fail.instance
        inputs = {
            "x": inst.x, "y": inst.y, "z": inst.z, "a": inst.bounds.a, "A": inst.bounds.A,
            "weights": s.base.weights, "mode": s.mode,
        }
        verdicts.append(rep.verdict)
        rec = report_record(rep, inputs, 0.0, command="fuzz", trial=fail.trial)
        del rec["elapsed_s"]
        if rep.verdict is Verdict.VIOLATED:
            rec["reproducer"] = str(dump_reproducer(args.repro_dir, rep.form, fail.trial, inputs))
        out.record(rec, report_table(rep, f"trial {fail.trial} {rep.form.name}"))
    for form, summ in res.summaries.items():
        out.record(
            {
                "command": "fuzz", "form": form.value, "trials": summ.trials, "holds": summ.holds,
                "violated": summ.violated, "hypothesis_unmet": summ.hypothesis_unmet,
                "max_ratio": summ.max_ratio, "max_ratio_trial": summ.max_ratio_trial, "target": summ.target,
            },
            f"{form.name:<9} trials {summ.trials:>7}  violated {summ.violated}  unmet {summ.hypothesis_unmet}"
            f"  max ratio {summ.max_ratio:.6f} (constant {summ.target})",
        )
    out.record(
        {"command": "fuzz", "summary": True, "dim": res.dim, "mode": res.mode, "trials": res.trials,
         "seed": res.seed, "violated": res.violated, "hypothesis_unmet": res.hypothesis_unmet, "elapsed_s": elapsed},
        f"fuzz dim={res.dim} mode={res.mode}: {res.trials} trials, {res.violated} violated",
    )
    return exit_code(verdicts)


# --------------------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--output", help="write records here instead of stdout")
    common.add_argument("--format", choices=("text", "jsonl"), default="text")

    p = argparse.ArgumentParser(prog="twoinner", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help, allow_abbrev=False)

    a = add("axioms", "audit the 2-inner product axioms on random inputs")
    a.add_argument("--dim", type=int, default=3)
    a.add_argument("--mode", choices=MODES, default=REAL)
    a.add_argument("--trials", type=_positive_int, default=1000)
    a.set_defaults(func=cmd_axioms)

    v = add("verify", "evaluate one bound chain on vectors read from a file")
    v.add_argument("--form", required=True, choices=[f.value for f in Form])
    v.add_argument("--input", required=True, help="JSON file with x, y, z, a, A")
    v.add_argument("--repro-dir", default=".")
    v.set_defaults(func=cmd_verify)

    i = add("integral", "evaluate a determinant inequality for functions on an interval")
    i.add_argument("--prop", required=True, choices=[q.value for q in Prop])
    i.add_argument("--f", required=True)
    i.add_argument("--g", required=True)
    i.add_argument("--h", required=True)
    i.add_argument("--rho", default="1")
    i.add_argument("--interval", type=_interval, default=(0.0, 1.0))
    i.add_argument("--m", dest="m_lo", type=float, required=True)
    i.add_argument("--M", dest="M_hi", type=float, required=True)
    i.add_argument("--panels", type=_positive_int, default=32)
    i.add_argument("--nodes-per-panel", type=int, default=8)
    i.add_argument("--grid", type=int, default=257, help="grid size of the synchronicity check")
    i.set_defaults(func=cmd_integral)

    s = add("sharpness", "estimate the best constant of a bound")
    s.add_argument("--form", required=True, choices=[f.value for f in Form])
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--mode", choices=MODES, default=REAL)
    s.add_argument("--trials", type=_positive_int, default=1000)
    s.add_argument("--epsilon-grid", action="store_true")
    s.set_defaults(func=cmd_sharpness)

    f = add("fuzz", "random hypothesis-satisfying inputs across all forms")
    f.add_argument("--dim", type=int, default=4)
    f.add_argument("--mode", choices=MODES, default=REAL)
    f.add_argument("--trials", type=_positive_int, default=1000)
    f.add_argument("--repro-dir", default=".")
    f.set_defaults(func=cmd_fuzz)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        with open_output(args.output) as stream:
            return args.func(args, Emitter(stream, args.format))
    except ParseError as exc:
        print(f"twoinner: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TwoInnerError, ValueError, OSError) as exc:
        print(f"twoinner: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
