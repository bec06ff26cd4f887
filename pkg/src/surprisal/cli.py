"""Command-line front end.

Exit status: 0 when the checked statement holds (or the command simply
succeeded), 1 when it does not, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import approx, core, harness, lorenz, spectral, transitions
from .errors import SurprisalError

EXIT_OK, EXIT_NO, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad user input, already formatted as ``file:line: message``."""


def fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


class Emitter:
    def __init__(self, fmt_name: str, out):
        self.csv = fmt_name == "csv"
        self.out = out
        self.rows: list[tuple[str, str]] = []

    def kv(self, key: str, value):
        if isinstance(value, (list, tuple, np.ndarray)):
            value = ",".join(fmt(v) for v in value) if not self.csv else ";".join(fmt(v) for v in value)
        else:
            value = fmt(value)
        self.rows.append((key, value))

    def flush(self):
        if self.csv:
            self.out.write("key,value\n")
            for k, v in self.rows:
                self.out.write(f"{k},{v}\n")
        else:
            for k, v in self.rows:
                self.out.write(f"{k}:{v}\n")
        self.rows.clear()


# ---------------------------------------------------------------- input parsing


def _line_of(text: str, needle: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    return 1


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}:0: cannot read file ({exc.strerror})") from None


def _load_json(path: str):
    text = _read(path)
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None


def _vector(doc, text, path, field, required=True):
    if field not in doc:
        if required:
            raise InputError(f"{path}:1: field '{field}': missing")
        return None
    val = doc[field]
    line = _line_of(text, f'"{field}"')
    if not isinstance(val, list) or not val or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in val
    ):
        raise InputError(f"{path}:{line}: field '{field}': expected a non-empty list of numbers")
    try:
        return core.validate_spectrum(val)
    except SurprisalError as exc:
        raise InputError(f"{path}:{line}: field '{field}': {exc}") from None


def _dichotomy_from(doc, text, path, prefix="") -> core.Dichotomy:
    if not isinstance(doc, dict):
        raise InputError(f"{path}:1: expected an object with fields 'p' and optional 's'")
    p = _vector(doc, text, path, "p")
    s = _vector(doc, text, path, "s", required=False)
    if s is None:
        s = core.Spectrum.uniform(p.dim)
    line = _line_of(text, '"s"')
    try:
        return core.Dichotomy(p, s)
    except SurprisalError as exc:
        raise InputError(f"{path}:{line}: field '{prefix}s': {exc}") from None


def load_dichotomy(path: str) -> core.Dichotomy:
    doc, text = _load_json(path)
    return _dichotomy_from(doc, text, path)


def load_renyi(path: str) -> list[float]:
    text = _read(path)
    vals = []
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            v = float(stripped)
        except ValueError:
            raise InputError(f"{path}:{i}: field 'renyi': not a number: {stripped!r}") from None
        if not math.isfinite(v):
            raise InputError(f"{path}:{i}: field 'renyi': value must be finite")
        vals.append(v)
    if not vals:
        raise InputError(f"{path}:1: field 'renyi': no values")
    return vals


# ---------------------------------------------------------------- commands


def cmd_measures(args, em):
    d = load_dichotomy(args.file)
    m = core.measures(d)
    for key in ("S", "V", "L", "Smin", "Smax"):
        em.kv(key, getattr(m, key))
    em.kv("M", core.monotone_M(d))
    return EXIT_OK


def cmd_lorenz(args, em):
    c = lorenz.lorenz_curve(load_dichotomy(args.file))
    text = lorenz.curve_csv(c)
    if args.out:
        Path(args.out).write_text(text)
        em.kv("points", len(c.xs))
        em.kv("out", args.out)
    else:
        em.out.write(text)
    return EXIT_OK


def _verdict(em, v: lorenz.TransitionVerdict):
    em.kv("decision", v.decision)
    em.kv("worst_gap", v.worst_gap)
    em.kv("witness_x", v.witness_x)
    return EXIT_OK if v.decision else EXIT_NO


def cmd_check(args, em):
    src, dst = load_dichotomy(args.source), load_dichotomy(args.target)
    if args.eps:
        return _verdict(em, lorenz.approx_transition(src, dst, args.eps))
    return _verdict(em, lorenz.exact_transition(src, dst))


def cmd_approx(args, em):
    d = load_dichotomy(args.file)
    fn = approx.flat_approximation if args.mode == "flat" else approx.steep_approximation
    a = fn(d, args.eps)
    em.kv("kind", a.kind)
    em.kv("indices", list(a.indices))
    em.kv("spectrum", a.spectrum.values)
    em.kv("trace_distance", core.trace_distance(a.spectrum, d.p))
    return EXIT_OK


def cmd_smooth(args, em):
    d = load_dichotomy(args.file)
    b = approx.smoothed_divergences(d, args.eps, exact=args.exact)
    S = core.relative_entropy(d)
    em.kv("S", S)
    em.kv("smax_eps", b.smax_eps)
    em.kv("smin_eps_lower", b.smin_eps_lower)
    em.kv("smin_eps_exact", b.smin_eps_exact)
    em.kv("f_sigma", b.f_sigma)
    ok = b.smax_eps - S <= b.f_sigma + 1e-12
    if b.smin_eps_exact is not None:
        ok = ok and S - b.smin_eps_exact <= b.f_sigma + 1e-12
    em.kv("bounds_hold", ok)
    return EXIT_OK if ok else EXIT_NO


def cmd_suffice(args, em):
    src, dst = load_dichotomy(args.source), load_dichotomy(args.target)
    v = transitions.sufficient_condition(src, dst, args.eps)
    em.kv("sufficient", v.sufficient)
    em.kv("lhs", v.lhs)
    em.kv("rhs", v.rhs)
    em.kv("certified_eps", v.certified_eps)
    return EXIT_OK if v.sufficient else EXIT_NO


def cmd_iid_rate(args, em):
    src, dst = load_dichotomy(args.source), load_dichotomy(args.target)
    r = transitions.iid_rate_bound(src, dst, args.n, args.eps)
    em.kv("n", r.n)
    em.kv("eps_n", r.eps_n)
    em.kv("certified", r.certified)
    em.kv("rate_lower", r.rate_lower)
    em.kv("ratio", r.ratio)
    em.kv("resonance_gap", r.resonance_gap)
    em.kv("k", r.k)
    em.kv("k_prime", r.k_prime)
    return EXIT_OK if r.certified else EXIT_NO


def cmd_bounds(args, em):
    kind = args.kind
    if kind == "landauer":
        if not args.inputs:
            raise InputError("<args>:0: field 'file': landauer needs a dichotomy file")
        p = load_dichotomy(args.inputs[0]).p
        n_exact, n_bound = transitions.landauer(p, args.n_max)
        em.kv("n_exact", n_exact)
        em.kv("n_bound", n_bound)
        return EXIT_OK if n_exact is not None else EXIT_NO
    if kind == "catalyst":
        for name in ("delta", "d_s", "d_e", "m_from"):
            if getattr(args, name) is None:
                raise InputError(f"<args>:0: field '{name}': required for catalyst")
        em.kv("bound", transitions.catalyst_bound(args.delta, args.d_s, args.d_e, args.m_from))
        em.kv("form", "explicit")
        return EXIT_OK
    if kind == "production":
        if len(args.inputs) != 2:
            raise InputError("<args>:0: field 'files': production needs source and target files")
        src, dst = (load_dichotomy(x) for x in args.inputs)
        bound = transitions.entropy_production_bound(src, dst)
        dS = core.relative_entropy(src) - core.relative_entropy(dst)
        feasible = lorenz.exact_transition(src, dst).decision
        em.kv("bound", bound)
        em.kv("delta_S", dS)
        em.kv("transition", feasible)
        holds = dS >= bound - 1e-12
        em.kv("holds", holds)
        return EXIT_OK if holds else EXIT_NO
    if kind == "marginal":
        if len(args.inputs) != 1:
            raise InputError("<args>:0: field 'file': marginal needs one bipartite file")
        path = args.inputs[0]
        doc, text = _load_json(path)
        for f in ("joint", "dims", "from_S", "from_E", "to_refs"):
            if f not in doc:
                raise InputError(f"{path}:1: field '{f}': missing")
        joint = _vector(doc, text, path, "joint")
        dims = doc["dims"]
        if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(x, int) for x in dims)):
            line = _line_of(text, '"dims"')
            raise InputError(f"{path}:{line}: field 'dims': expected two integers")
        from_S = _dichotomy_from(doc["from_S"], text, path, "from_S.")
        from_E = _dichotomy_from(doc["from_E"], text, path, "from_E.")
        refs = doc["to_refs"]
        if not (isinstance(refs, list) and len(refs) == 2):
            line = _line_of(text, '"to_refs"')
            raise InputError(f"{path}:{line}: field 'to_refs': expected two lists")
        lhs, rhs = transitions.marginal_budget(joint, tuple(dims), from_S, from_E, tuple(refs))
        em.kv("lhs", lhs)
        em.kv("rhs", rhs)
        holds = lhs >= rhs - 1e-12
        em.kv("holds", holds)
        return EXIT_OK if holds else EXIT_NO
    raise InputError(f"<args>:0: field 'kind': unknown bound {kind!r}")


def cmd_spectrum(args, em):
    vals = load_renyi(args.file)
    sp = spectral.spectrum_from_renyi(vals, args.dim)
    em.kv("dim", sp.dim)
    em.kv("spectrum", sp.values)
    return EXIT_OK


def cmd_proptest(args, em):
    names = [args.suite] if args.suite else harness.suite_names()
    cfg = harness.SamplerConfig(seed=args.seed, trials=args.trials)
    status = EXIT_OK
    for name in names:
        r = harness.run_suite(name, cfg, mutate=args.mutate)
        em.out.write(harness.render_report(r, timing=args.timing) + "\n")
        if not r.passed:
            status = EXIT_NO
    return status


# ---------------------------------------------------------------- parser


def _prob(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surprisal", description="Relative entropy, variance and majorization tools.")
    ap.add_argument("--format", choices=["kv", "csv"], default="kv", help="output layout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="S, V, L, Smin, Smax and M of a dichotomy")
    p.add_argument("file")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("lorenz", help="Lorenz curve breakpoints as x,y text")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lorenz)

    p = sub.add_parser("check", help="decide an exact or eps-approximate transition")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--eps", type=_prob, default=0.0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("approx", help="flat or steep approximation")
    p.add_argument("file")
    p.add_argument("--mode", choices=["flat", "steep"], required=True)
    p.add_argument("--eps", type=_prob, required=True)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("smooth", help="smoothed divergences and their variance bounds")
    p.add_argument("file")
    p.add_argument("--eps", type=_prob, required=True)
    p.add_argument("--exact", action="store_true", help="run the exhaustive smoothed min search")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("suffice", help="sufficient condition for an eps-transition")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--eps", type=_prob, required=True)
    p.set_defaults(func=cmd_suffice)

    p = sub.add_parser("bounds", help="landauer | catalyst | production | marginal")
    p.add_argument("kind", choices=["landauer", "catalyst", "production", "marginal"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--delta", type=_prob)
    p.add_argument("--d-s", type=int)
    p.add_argument("--d-e", type=int)
    p.add_argument("--m-from", type=_prob)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("iid-rate", help="certified i.i.d. conversion rate")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=_prob, required=True)
    p.set_defaults(func=cmd_iid_rate)

    p = sub.add_parser("spectrum-from-renyi", help="spectrum from Renyi entropies of orders 2..d")
    p.add_argument("file")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("proptest", help="run property suites")
    p.add_argument("--suite", choices=harness.suite_names())
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="append runtimes (output no longer byte-stable)")
    p.add_argument("--mutate", action="store_true", help="run the weakened checks")
    p.set_defaults(func=cmd_proptest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    em = Emitter(args.format, sys.stdout)
    try:
        status = args.func(args, em)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SurprisalError as exc:
        print(f"error: <args>:0: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    em.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
