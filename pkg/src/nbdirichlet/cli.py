"""Command-line front end: verify suites, factor contractions, build
envelopes, run gradient flows, and emit deterministic JSON/CSV reports.

Exit codes: 0 all checks passed, 1 at least one violation found (including
the intentional counterexample), 2 malformed config or usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .contraction import decompose, envelope, make_phi
from .errors import BadSpec, InconsistentSamples, NotIncreasing
from .flow import FlowConfig, evolve, trace_to_csv
from .forms import make_form
from .measure import make_field
from .samplers import ContractionSamplerSpec, FieldSamplerSpec, SuiteConfig
from .verifier import (
    CheckResult,
    check_criteria,
    check_identities,
    check_normal_contraction,
    counterexample_demo,
    run_proof_chain,
)

REPORT_VERSION = 1


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, no spaces, floats at 17 significant
    digits. Guarantees byte-identical reports for identical inputs."""
    if isinstance(obj, dict):
        items = sorted(obj.items())
        inner = ",".join(f"{json.dumps(k)}:{canonical_json(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


class ConfigError(ValueError):
    pass


def _suite_from_config(raw: dict, seed: int) -> SuiteConfig:
    suite = dict(raw.get("suite", {}))
    fields = FieldSamplerSpec(
        amplitude=float(suite.pop("amplitude", 3.0)),
        p_ramp=float(suite.pop("p_ramp", 0.25)),
        p_step=float(suite.pop("p_step", 0.25)),
    )
    contractions = ContractionSamplerSpec(
        max_breakpoints=int(suite.pop("max_breakpoints", 8)),
        max_depth=int(suite.pop("max_depth", 3)),
    )
    known = {
        "n_samples",
        "criteria_tol",
        "contraction_tol",
        "proof_tol",
        "identity_tol",
    }
    unknown = set(suite) - known
    if unknown:
        raise ConfigError(f"unknown suite options: {sorted(unknown)}")
    return SuiteConfig(
        seed=seed, fields=fields, contractions=contractions, **suite
    )


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _write_report(results: list[CheckResult], seed: int, path: str) -> None:
    doc = {
        "version": REPORT_VERSION,
        "seed": seed,
        "checks": [r.report_entry() for r in results],
    }
    with open(path, "w") as fh:
        fh.write(canonical_json(doc) + "\n")


def _report_exit(results: list[CheckResult], path: str) -> int:
    failures = [r.name for r in results if not r.passed]
    if failures:
        print(f"{len(failures)} violation(s): {', '.join(failures)}; report at {path}")
        return 1
    print(f"all {len(results)} checks passed; report at {path}")
    return 0


def _cmd_verify(args) -> int:
    raw = _load_config(args.config)
    forms = raw.get("forms")
    if not forms:
        raise ConfigError("config needs a nonempty 'forms' list")
    seed = int(raw.get("seed", 0))
    cfg = _suite_from_config(raw, seed)
    out = args.output or raw.get("output", "report.json")
    results: list[CheckResult] = []
    first_space = None
    for idx, desc in enumerate(forms):
        try:
            form = make_form(desc)
        except BadSpec as exc:
            raise ConfigError(f"forms[{idx}]: {exc}") from exc
        if first_space is None:
            first_space = form.space
        label = f"{form.kind}#{idx}"
        criteria = check_criteria(form, cfg)
        contraction = check_normal_contraction(form, cfg)
        batch = criteria + [contraction]
        symmetric = next(c for c in criteria if c.name == "symmetry").passed
        if symmetric and all(c.passed for c in criteria):
            batch += run_proof_chain(form, cfg, criteria)
        results += [dataclasses.replace(c, name=f"{c.name}[{label}]") for c in batch]
    results += check_identities(cfg, first_space)
    _write_report(results, seed, out)
    return _report_exit(results, out)


def _cmd_decompose(args) -> int:
    try:
        bps = [float(tok) for tok in args.breakpoints.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"breakpoints must be numbers: {exc}") from exc
    try:
        factors, residual = decompose(make_phi(bps))
    except NotIncreasing as exc:
        raise ConfigError(str(exc)) from exc
    for i, fac in enumerate(factors):
        print(f"factor {i}: [{', '.join(_fmt_float(b) for b in fac.breakpoints)}]")
    print(f"residual: [{', '.join(_fmt_float(b) for b in residual.breakpoints)}]")
    return 0


def _cmd_envelope(args) -> int:
    try:
        with open(args.samples) as fh:
            data = json.load(fh)
        samples = [(float(y), float(v)) for y, v in data]
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ConfigError(f"samples file must be JSON [[y, value], ...]: {exc}") from exc
    try:
        pl = envelope(samples, args.radius)
    except (InconsistentSamples, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    print(f"breakpoints: [{', '.join(_fmt_float(b) for b in pl.breakpoints)}]")
    print(f"slopes: [{', '.join(_fmt_float(s) for s in pl.slopes)}]")
    print(f"value_at_0: {_fmt_float(pl.anchor)}")
    return 0


def _cmd_flow(args) -> int:
    raw = _load_config(args.config)
    if "form" not in raw:
        raise ConfigError("flow config needs a 'form' descriptor")
    try:
        form = make_form(raw["form"])
    except BadSpec as exc:
        raise ConfigError(str(exc)) from exc
    seed = int(raw.get("seed", 0))
    fl = raw.get("flow", {})
    try:
        cfg = FlowConfig(
            tau=float(fl.get("tau", 0.01)),
            n_steps=int(fl.get("n_steps", 100)),
            inner_tol=float(fl.get("inner_tol", 1e-9)),
            max_inner_iters=int(fl.get("max_inner_iters", 200_000)),
            probe_seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    initial = raw.get("initial")
    if initial is None:
        rng = np.random.default_rng(seed)
        u0 = make_field(form.space, rng.uniform(-1.0, 1.0, form.space.n))
    else:
        if len(initial) != form.space.n:
            raise ConfigError(
                f"initial datum has {len(initial)} values, form has {form.space.n} nodes"
            )
        u0 = make_field(form.space, initial)
    trace = evolve(form, u0, cfg)
    out = args.output or raw.get("output", "trace.csv")
    trace_to_csv(trace, out)
    print(
        f"flow: {cfg.n_steps} steps, energy {trace.energies[0]:.6g} -> "
        f"{trace.energies[-1]:.6g}; trace at {out}"
    )
    return 0


def _cmd_demo(args) -> int:
    if args.what != "counterexample":
        raise ConfigError(f"unknown demo {args.what!r}")
    result = counterexample_demo()
    out = args.output or "counterexample_report.json"
    _write_report([result], 0, out)
    w = result.witness
    print(
        f"E(f) = {_fmt_float(w['energy_f'])}, E(-f) = {_fmt_float(w['energy_neg_f'])}: "
        "reversing the ramp raises the energy, so phi = -id is not contracted"
    )
    return _report_exit([result], out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nbdirichlet",
        description="Verify convex-energy criteria, factor contractions, run gradient flows.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the check suites from a JSON config")
    p.add_argument("config")
    p.add_argument("--output", help="report path (default from config or report.json)")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("decompose", help="factor an alternating contraction into F2 pieces")
    p.add_argument("--breakpoints", required=True, help="comma-separated, increasing")
    p.set_defaults(fn=_cmd_decompose)

    p = sub.add_parser("envelope", help="lower 1-Lipschitz envelope of sampled values")
    p.add_argument("--samples", required=True, help="JSON file [[y, value], ...]")
    p.add_argument("--radius", required=True, type=float)
    p.set_defaults(fn=_cmd_envelope)

    p = sub.add_parser("flow", help="run a proximal gradient flow, write a CSV trace")
    p.add_argument("config")
    p.add_argument("--output", help="trace path (default from config or trace.csv)")
    p.set_defaults(fn=_cmd_flow)

    p = sub.add_parser("demo", help="built-in demonstrations")
    p.add_argument("what", choices=["counterexample"])
    p.add_argument("--output", help="report path")
    p.set_defaults(fn=_cmd_demo)
    return ap


def _glue_values(argv: list[str]) -> list[str]:
    """Join value-taking flags with values that start with a minus sign,
    so `decompose --breakpoints -1,0,2` parses as expected."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--breakpoints", "--radius"):
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"{tok}={val}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_values(list(argv)))
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
