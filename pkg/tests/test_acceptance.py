"""Exit criteria for the package, one test per criterion.

A pass/fail line per criterion is printed in the terminal summary.
"""

import csv
import io
import itertools
import math
import time

import numpy as np
import pytest

from qubitdesign.cli import main
from qubitdesign.fourier import FourierPosterior
from qubitdesign.grid import GridPosterior
from qubitdesign.lona import lona_extend_mc, lona_schedule
from qubitdesign.objective import expected_variance_exact, expected_variance_mc, outcome_tree
from qubitdesign.pso import PsoConfig, constriction_factor, optimize
from qubitdesign.objective import make_objective
from qubitdesign.reference import GREEDY, SWARM
from qubitdesign.simulator import benchmark_schedule

from oracles import branch_moments

PRIOR_VAR = 1 / 12


def cli_rows(capsys, *argv):
    assert main(list(argv)) == 0
    out = capsys.readouterr().out
    lines = [line for line in out.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


@pytest.mark.parametrize(
    "n, budget, label",
    [(5, 1.0, "AC1 greedy schedule N=5"), (10, 30.0, "AC2 greedy schedule N=10")],
)
def test_greedy_golden(capsys, criterion, n, budget, label):
    criterion(label)
    start = time.perf_counter()
    rows = cli_rows(capsys, "lona", "--n", str(n))
    elapsed = time.perf_counter() - start
    times = tuple(int(r["time"]) for r in rows)
    criterion(label, f"schedule={list(times)} runtime={elapsed:.2f}s (limit {budget}s)")
    assert times == GREEDY[n]
    assert elapsed < budget


def test_engine_agreement(criterion):
    criterion("AC3 fourier/grid agreement")
    worst = 0.0
    schedule = GREEDY[10]
    for k in range(1, len(schedule) + 1):
        f = expected_variance_exact(schedule[:k], "fourier").expected_variance
        g = expected_variance_exact(schedule[:k], "grid", grid_size=10_000).expected_variance
        worst = max(worst, abs(f - g))
    criterion("AC3 fourier/grid agreement", f"max |dEV| over prefixes = {worst:.2e} (limit 1e-6)")
    assert worst <= 1e-6


def test_swarm_schedules_beat_greedy(criterion):
    criterion("AC4 reference swarm schedules beat greedy")
    details = []
    for n in (5, 10):
        swarm = expected_variance_exact(SWARM[n], "grid").expected_variance
        greedy = expected_variance_exact(GREEDY[n], "grid").expected_variance
        details.append((n, swarm, greedy))
    criterion(
        "AC4 reference swarm schedules beat greedy",
        "; ".join(f"N={n}: {s:.6g} < {g:.6g}" for n, s, g in details),
    )
    assert all(s < g for _, s, g in details)


@pytest.mark.parametrize("n, radius", [(5, 0.5), (10, 0.1)])
def test_swarm_reproduction(criterion, n, radius):
    label = f"AC5 swarm reproduction N={n}"
    criterion(label)
    target = expected_variance_exact(SWARM[n], "grid").expected_variance + 1e-4
    objective = make_objective("grid", 10_000)
    results = []
    for seed in range(5):
        cfg = PsoConfig(
            init="around_schedule", base_schedule=GREEDY[n], radius=radius,
            iterations=200, seed=seed,
        )
        start = time.perf_counter()
        _, value, trace = optimize(cfg, n, objective)
        elapsed = time.perf_counter() - start
        results.append((seed, value, elapsed))
        assert elapsed < 300
        assert np.all(np.diff(trace.best_ev) <= 0)
        if value <= target:
            break
    best = min(v for _, v, _ in results)
    criterion(
        label,
        f"best EV={best:.6g} target<={target:.6g} seeds tried={len(results)} "
        f"max runtime={max(e for *_, e in results):.1f}s",
    )
    assert best <= target


def test_constriction_constant(criterion):
    chi = constriction_factor(2.05, 2.05)
    criterion("AC6 constriction factor", f"chi={chi:.6f}")
    assert 0.7290 <= chi <= 0.7299


def _check_tree(times, rng):
    tree = outcome_tree(times, "fourier")
    assert abs(math.fsum(tree.mass.tolist()) - 1) <= 1e-9
    assert abs(math.fsum((tree.mass * tree.mean).tolist()) - 0.5) <= 1e-9
    ev = tree.expected_variance
    assert ev <= PRIOR_VAR + 1e-12  # equality for uninformative schedules such as all 2s
    for _ in range(3):
        perm = rng.permutation(times)
        assert abs(expected_variance_exact(perm).expected_variance - ev) <= 1e-12
    # one random branch: pointwise series vs grid product, and moments vs quadrature
    outcomes = rng.random(len(times)) < 0.5
    f, g = FourierPosterior.flat(), GridPosterior.flat(10_000)
    for t, o in zip(times, outcomes):
        f, g = f.update(int(t), bool(o)), g.update(t, bool(o))
    if g.total_mass() == 0:
        return
    np.testing.assert_allclose(f.evaluate(g.omegas), g.values, rtol=0, atol=1e-12 * g.values.max())
    _, q_mean, q_var = branch_moments(times, outcomes, G=100_000)
    mean, _, var = f.moments()
    assert abs(mean - q_mean) <= 1e-6 and abs(var - q_var) <= 1e-6


def test_property_suite(criterion):
    criterion("AC7 property suite")
    rng = np.random.default_rng(2024)
    count = 0
    for n in range(1, 9):
        for times in itertools.combinations_with_replacement((1, 2, 3), n):
            _check_tree(np.array(times), rng)
            count += 1
    for _ in range(12):
        n = int(rng.integers(9, 13))
        _check_tree(rng.integers(1, 7, n), rng)
        count += 1
    criterion("AC7 property suite", f"{count} schedules (exhaustive N<=8 over times 1..3, random N 9..12)")


def test_monte_carlo_consistency(criterion):
    criterion("AC8 Monte-Carlo consistency N=8")
    schedule = lona_schedule(8).schedule
    exact = expected_variance_exact(schedule).expected_variance
    mc_hits = bench_hits = 0
    for seed in range(100):
        mc = expected_variance_mc(schedule, 2000, seed=seed)
        mc_hits += abs(mc.expected_variance - exact) <= 3 * mc.stderr
        bench = benchmark_schedule(schedule, 2000, seed=10_000 + seed)
        bench_hits += abs(bench.mean_posterior_variance - exact) <= 3 * bench.stderr
    criterion(
        "AC8 Monte-Carlo consistency N=8",
        f"mc {mc_hits}/100, benchmark {bench_hits}/100 within 3 stderr (need >=95)",
    )
    assert mc_hits >= 95 and bench_hits >= 95


def test_figure1_shape(capsys, criterion):
    criterion("AC9 figure-1 data shape")
    rows = cli_rows(capsys, "figure-data", "fig1", "--n", "10")
    lona = [float(r["lona_ev"]) for r in rows]
    trace = lona_schedule(10).per_step_ev
    assert lona == pytest.approx(list(trace), abs=1e-15)
    decreasing = all(b < a for a, b in zip(lona, lona[1:]))
    crosses = {int(r["step"]): float(r["pso_ev"]) for r in rows if r["pso_ev"]}
    criterion("AC9 figure-1 data shape", f"strictly decreasing={decreasing}, crosses at {sorted(crosses)}")
    assert decreasing
    assert sorted(crosses) == [5, 10]
    assert all(crosses[k] < lona[k - 1] for k in crosses)


@pytest.mark.slow
def test_linear_schedule_near_step_60(criterion):
    """Non-gating stretch check, Monte-Carlo only."""
    label = "AC10 (stretch) m_k=k vs extended greedy at N=60"
    criterion(label)
    greedy16 = lona_schedule(16).selection_order
    extended, _ = lona_extend_mc(greedy16, 60, samples=4000, seed=0)
    linear = list(range(1, 61))
    lin = expected_variance_mc(linear, 10**5, seed=1)
    grd = expected_variance_mc(extended, 10**5, seed=1)
    band = 3 * math.hypot(lin.stderr, grd.stderr)
    criterion(
        label,
        f"linear {lin.expected_variance:.4g}+-{lin.stderr:.1g}, "
        f"greedy {grd.expected_variance:.4g}+-{grd.stderr:.1g}",
    )
    assert lin.expected_variance < grd.expected_variance + band
