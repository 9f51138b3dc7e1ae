import numpy as np
import pytest

from nbdirichlet.errors import NoConvergence
from nbdirichlet.flow import (
    FlowConfig,
    evolve,
    exact_graph_resolvent,
    prox_step,
    trace_to_csv,
)
from nbdirichlet.forms import GraphQuadratic, eval_form, make_form
from nbdirichlet.measure import leq, linf_norm, make_field, make_space


def two_node():
    return make_form({"kind": "graph_quadratic", "nodes": 2, "edges": [[0, 1, 1.0]]})


def random_graph(n, seed, weighted_nodes=True):
    rng = np.random.default_rng(seed)
    edges = [
        (i, j, float(rng.uniform(0.2, 2.0)))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < 0.35
    ]
    weights = rng.uniform(0.5, 2.0, n) if weighted_nodes else np.ones(n)
    return GraphQuadratic(make_space(weights), edges)


def test_identity_resolvent_on_empty_edges():
    form = make_form({"kind": "graph_quadratic", "nodes": 3, "edges": []})
    u = make_field(form.space, [1.0, -2.0, 0.5])
    v = prox_step(form, u, 0.7)
    assert np.array_equal(v.values, u.values)


def test_constants_are_fixed_points():
    for desc in (
        {"kind": "graph_quadratic", "nodes": 4, "edges": [[0, 1, 1.0], [1, 2, 0.5], [2, 3, 1.0]]},
        {"kind": "local_grid_1d", "nodes": 7, "h": 0.2, "integrand": {"name": "max_positive_part"}},
        {"kind": "local_grid_1d", "nodes": 7, "h": 0.2, "integrand": {"name": "abs_power", "p": 4}},
    ):
        form = make_form(desc)
        u = make_field(form.space, np.full(form.space.n, -0.8))
        v = prox_step(form, u, 0.3)
        assert linf_norm(v - u) <= 1e-12


def test_two_node_exact_value():
    form = two_node()
    u = make_field(form.space, [1.0, 0.0])
    v = prox_step(form, u, 0.5)
    assert np.max(np.abs(v.values - [0.75, 0.25])) <= 1e-12


def test_evolve_matches_repeated_resolvent():
    form = two_node()
    u = make_field(form.space, [1.0, 0.0])
    trace = evolve(form, u, FlowConfig(tau=0.5, n_steps=2))
    assert np.max(np.abs(trace.states[2].values - [0.625, 0.375])) <= 1e-12
    assert len(trace.states) == 3 and len(trace.energies) == 3 and len(trace.residuals) == 2
    assert trace.states[0] is u


def test_energies_strictly_decrease_for_nonconstant_data():
    form = random_graph(6, seed=0)
    rng = np.random.default_rng(1)
    u = make_field(form.space, rng.uniform(-2, 2, 6))
    trace = evolve(form, u, FlowConfig(tau=0.1, n_steps=5))
    diffs = np.diff(trace.energies)
    assert np.all(diffs < 0)


def test_graph_prox_matches_dense_resolvent():
    rng = np.random.default_rng(2)
    for seed in range(5):
        form = random_graph(8, seed=seed)
        u = make_field(form.space, rng.uniform(-3, 3, 8))
        tau = float(rng.uniform(0.05, 1.0))
        v = prox_step(form, u, tau)
        w = exact_graph_resolvent(form, u, tau)
        assert linf_norm(v - w) <= 1e-8


def test_energy_monotone_every_shipped_form():
    descs = [
        {"kind": "graph_quadratic", "nodes": 6,
         "edges": [[0, 1, 1.0], [1, 2, 0.5], [2, 3, 2.0], [3, 4, 1.0], [4, 5, 0.3]]},
        {"kind": "local_grid_1d", "nodes": 9, "h": 0.125, "integrand": {"name": "max_positive_part"}},
        {"kind": "local_grid_1d", "nodes": 9, "h": 0.125, "integrand": {"name": "abs_power", "p": 1}},
        {"kind": "local_grid_1d", "nodes": 9, "h": 0.125, "integrand": {"name": "abs_power", "p": 2}},
        {"kind": "local_grid_1d", "nodes": 9, "h": 0.125, "integrand": {"name": "abs_power", "p": 4}},
        {"kind": "local_grid_1d", "nodes": 9, "h": 0.125,
         "integrand": {"name": "finsler_weighted", "weights": [1, 0.5, 2, 1, 1.5, 0.8, 1.2, 1]}},
    ]
    rng = np.random.default_rng(3)
    K = rng.uniform(0, 1, (6, 6))
    np.fill_diagonal(K, 0)
    descs.append({"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 4}})
    descs.append({"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 1}})
    for desc in descs:
        form = make_form(desc)
        for rep in range(8):  # evolve() itself enforces the 1e-10 slack
            u = make_field(form.space, rng.uniform(-2, 2, form.space.n))
            trace = evolve(form, u, FlowConfig(tau=0.05, n_steps=4))
            assert np.all(np.diff(trace.energies) <= 1e-10)


def test_order_preservation_and_linf_contraction():
    rng = np.random.default_rng(4)
    K = rng.uniform(0, 1, (5, 5))
    np.fill_diagonal(K, 0)
    forms = [
        random_graph(5, seed=7),
        make_form({"kind": "nonlocal_psi", "kernel": K.tolist(), "psi": {"name": "power", "p": 4}}),
        make_form({"kind": "local_grid_1d", "nodes": 5, "h": 0.25, "integrand": {"name": "abs_power", "p": 1}}),
    ]
    slack = 10 * 1e-9
    for form in forms:
        n = form.space.n
        for rep in range(4):
            f_vals = rng.uniform(-2, 2, n)
            g_vals = f_vals + rng.uniform(0, 2, n)
            f = make_field(form.space, f_vals)
            g = make_field(form.space, g_vals)
            cfg = FlowConfig(tau=0.1, n_steps=4)
            tf = evolve(form, f, cfg)
            tg = evolve(form, g, cfg)
            bound = linf_norm(f - g)
            for sf, sg in zip(tf.states, tg.states):
                neg_part = max(0.0, float(np.max(sf.values - sg.values)))
                assert neg_part <= slack
                assert linf_norm(sf - sg) <= bound + slack


def test_semigroup_nesting_exact():
    form = random_graph(6, seed=11)
    rng = np.random.default_rng(5)
    u = make_field(form.space, rng.uniform(-2, 2, 6))
    full = evolve(form, u, FlowConfig(tau=0.07, n_steps=5))
    first = evolve(form, u, FlowConfig(tau=0.07, n_steps=2))
    second = evolve(form, first.states[-1], FlowConfig(tau=0.07, n_steps=3))
    chained = first.states + second.states[1:]
    for a, b in zip(full.states, chained):
        assert np.array_equal(a.values, b.values)


def test_no_convergence_raises():
    form = make_form(
        {"kind": "local_grid_1d", "nodes": 7, "h": 0.2, "integrand": {"name": "abs_power", "p": 1}}
    )
    u = make_field(form.space, np.arange(7, dtype=float))
    with pytest.raises(NoConvergence):
        prox_step(form, u, 0.5, max_inner_iters=2)


def test_probe_certificates_within_tolerance():
    form = random_graph(6, seed=13)
    rng = np.random.default_rng(6)
    u = make_field(form.space, rng.uniform(-2, 2, 6))
    trace = evolve(form, u, FlowConfig(tau=0.1, n_steps=3, inner_tol=1e-9))
    assert all(r <= 1e-9 for r in trace.residuals)


def test_trace_csv_schema(tmp_path):
    form = two_node()
    u = make_field(form.space, [1.0, 0.0])
    trace = evolve(form, u, FlowConfig(tau=0.5, n_steps=2))
    path = tmp_path / "trace.csv"
    trace_to_csv(trace, str(path))
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "step,time,energy,residual,v0,v1"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "0" and float(first[2]) == 0.5 and float(first[4]) == 1.0
