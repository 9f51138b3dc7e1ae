#!/usr/bin/env python3
"""Run the full check suite over the shipped instance catalog.

Writes one JSON report per instance into --outdir and prints a summary
table. The identity checks run once (they are form-independent).
"""

import argparse
import pathlib
import sys

import numpy as np

from nbdirichlet.cli import canonical_json
from nbdirichlet.forms import make_form
from nbdirichlet.samplers import SuiteConfig
from nbdirichlet.verifier import (
    check_criteria,
    check_identities,
    check_normal_contraction,
    run_proof_chain,
)


def instance_catalog(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    edges = [
        [i, j, float(rng.uniform(0.2, 2.0))]
        for i in range(20)
        for j in range(i + 1, 20)
        if rng.random() < 0.2
    ]
    K = rng.uniform(0.0, 1.0, (10, 10))
    np.fill_diagonal(K, 0.0)
    grid = {"kind": "local_grid_1d", "nodes": 11, "h": 0.1}
    return {
        "graph_quadratic_20": {"kind": "graph_quadratic", "nodes": 20, "edges": edges},
        "nonlocal_z2": {"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 2}},
        "nonlocal_z4": {"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 4}},
        "nonlocal_abs": {"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 1}},
        "grid_abs_p1": {**grid, "integrand": {"name": "abs_power", "p": 1}},
        "grid_abs_p2": {**grid, "integrand": {"name": "abs_power", "p": 2}},
        "grid_abs_p4": {**grid, "integrand": {"name": "abs_power", "p": 4}},
        "grid_finsler": {
            **grid,
            "integrand": {"name": "finsler_weighted", "weights": rng.uniform(0.5, 2.0, 10).tolist()},
        },
        "grid_max_positive_part": {**grid, "integrand": {"name": "max_positive_part"}},
    }


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-samples", type=int, default=500)
    ap.add_argument("--outdir", default="sweep_reports")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = SuiteConfig(n_samples=args.n_samples, seed=args.seed)

    any_unexpected = False
    for label, desc in instance_catalog(args.seed).items():
        form = make_form(desc)
        results = check_criteria(form, cfg)
        results.append(check_normal_contraction(form, cfg))
        symmetric = next(r for r in results if r.name == "symmetry").passed
        if symmetric:
            results += run_proof_chain(form, cfg, results[:5])
        doc = {
            "version": 1,
            "seed": args.seed,
            "checks": [r.report_entry() for r in results],
        }
        path = outdir / f"{label}.json"
        path.write_text(canonical_json(doc) + "\n")
        failed = [r.name for r in results if not r.passed]
        expected_failures = (
            {"symmetry", "normal_contraction"} if label == "grid_max_positive_part" else set()
        )
        status = "ok" if set(failed) == expected_failures else "UNEXPECTED"
        any_unexpected |= status == "UNEXPECTED"
        print(f"{label:26s} checks={len(results):3d} failed={failed or '-'} [{status}]")

    identities = check_identities(cfg)
    doc = {"version": 1, "seed": args.seed, "checks": [r.report_entry() for r in identities]}
    (outdir / "identities.json").write_text(canonical_json(doc) + "\n")
    for r in identities:
        # identity_halfsum is red by algebra: the displayed relation is false
        # off the band; see README
        mark = "expected-red" if r.name == "identity_halfsum" else ("ok" if r.passed else "UNEXPECTED")
        any_unexpected |= mark == "UNEXPECTED"
        print(f"{r.name:26s} worst={r.worst_violation:.3e} passed={r.passed} [{mark}]")
    return 1 if any_unexpected else 0


if __name__ == "__main__":
    sys.exit(main())
