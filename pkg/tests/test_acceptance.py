"""Acceptance suite: one test per shipped criterion.

Each test prints a ``[acceptance] <name>: PASS/FAIL (<seconds>)`` line; run
with ``pytest tests/test_acceptance.py -v -s`` to see them as they complete.
The numeric criteria come with wall-clock budgets, which are asserted too.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from minewarn.cli import main
from minewarn.data import load_samples, save_samples
from minewarn.evolution import (CODING_SCHEME, SELECTION_METHOD, GAConfig,
                                crossover, evolve, mutate, roulette_select,
                                selection_probabilities)
from minewarn.genome import chromosome_length, decode, encode
from minewarn.network import (NetworkParams, NetworkShape, gradient,
                              hidden_layer_size, sse_loss)
from minewarn.pipeline import pair_summary, run_seed_pair, synth_dataset
from minewarn.schema import default_schema
from minewarn.seeding import named_rng
from minewarn.training import TrainConfig, train_lm
from minewarn.data import Sample

FIXTURE = Path(__file__).parent / "data" / "indicator_fixture.csv"

FULL_SHAPE = NetworkShape(19, 11, 1)


def _run(name, budget_s, body):
    started = time.perf_counter()
    try:
        body()
    except BaseException:
        print(f"[acceptance] {name}: FAIL "
              f"({time.perf_counter() - started:.2f}s)")
        raise
    elapsed = time.perf_counter() - started
    print(f"[acceptance] {name}: PASS ({elapsed:.2f}s)")
    assert elapsed < budget_s, f"{name} exceeded its {budget_s}s budget"


def test_01_chromosome_length():
    def body():
        assert chromosome_length(FULL_SHAPE) == 232

    _run("01 chromosome length 232", 1.0, body)


def test_02_hidden_layer_size():
    def body():
        assert hidden_layer_size(19, 1, adjustment=1) == 11

    _run("02 hidden layer size 11", 1.0, body)


def test_03_default_configuration():
    def body():
        ga = GAConfig()
        assert ga.population_size == 60
        assert ga.crossover_prob == 0.7
        assert ga.mutation_prob == 0.05
        train = TrainConfig()
        assert train.learning_rate == 0.001
        assert train.goal_mse == 1e-5
        assert CODING_SCHEME == "real"
        assert SELECTION_METHOD == "roulette"

    _run("03 default configuration", 1.0, body)


def test_04_fixture_rows_round_trip(tmp_path):
    expected = [
        [0.112, 0.074, 0.210, 0.079, 0.107, 0.131, 0.275, 0.329, 0.146,
         0.072, 0.098, 0.294, 0.210, 0.098, 0.206, 0.123, 0.330, 0.092,
         0.750],
        [0.108, 0.125, 0.295, 0.111, 0.150, 0.185, 0.387, 0.461, 0.205,
         0.102, 0.138, 0.413, 0.295, 0.138, 0.289, 0.171, 0.444, 0.130,
         0.667],
        [0.906, 1.000, 0.769, 1.000, 0.481, 0.900, 0.975, 1.000, 1.000,
         1.000, 1.000, 1.000, 0.970, 0.985, 1.000, 1.000, 1.000, 1.000,
         0.500],
    ]

    def body():
        schema = default_schema()
        samples = load_samples(FIXTURE, schema)
        assert [s.features.tolist() for s in samples] == expected

        echo = tmp_path / "echo.csv"
        save_samples(echo, samples, schema, include_target=False)
        again = load_samples(echo, schema)
        for original, copy in zip(samples, again):
            assert original.features.tolist() == copy.features.tolist()

    _run("04 fixture rows round-trip", 1.0, body)


def test_05_gradient_against_finite_differences():
    def body():
        rng = named_rng(5001, "acceptance-gradient")
        step = 1e-6
        worst = 0.0
        for _ in range(100):
            n = int(rng.integers(1, 6))
            q = int(rng.integers(1, 6))
            m = int(rng.integers(1, 6))
            shape = NetworkShape(n, q, m)
            genes = rng.uniform(-1, 1, size=chromosome_length(shape))
            data = [Sample(rng.uniform(-1, 1, size=n),
                           float(rng.uniform(0, 1)))
                    for _ in range(int(rng.integers(1, 7)))]

            analytic = encode(gradient(decode(genes, shape), data))
            fd = np.empty_like(genes)
            for i in range(genes.size):
                up = genes.copy()
                up[i] += step
                down = genes.copy()
                down[i] -= step
                fd[i] = (sse_loss(decode(up, shape), data)
                         - sse_loss(decode(down, shape), data)) / (2 * step)
            scale = max(float(np.linalg.norm(analytic)),
                        float(np.linalg.norm(fd)), 1e-12)
            worst = max(worst, float(np.linalg.norm(analytic - fd)) / scale)
        assert worst < 1e-5, f"worst relative gradient error {worst:.3e}"

    _run("05 gradient vs finite differences", 5.0, body)


def test_06_genome_round_trip():
    def body():
        rng = named_rng(6001, "acceptance-genome")
        for _ in range(1000):
            shape = NetworkShape(int(rng.integers(1, 8)),
                                 int(rng.integers(1, 8)),
                                 int(rng.integers(1, 4)))
            n, q, m = shape.n_inputs, shape.n_hidden, shape.n_outputs
            params = NetworkParams(
                rng.uniform(-1, 1, size=(q, n)),
                rng.uniform(-1, 1, size=q),
                rng.uniform(-1, 1, size=(m, q)),
                rng.uniform(-1, 1, size=m),
            )
            again = decode(encode(params), shape)
            assert (again.input_weights == params.input_weights).all()
            assert (again.hidden_bias == params.hidden_bias).all()
            assert (again.output_weights == params.output_weights).all()
            assert (again.output_bias == params.output_bias).all()

    _run("06 genome round-trip", 1.0, body)


def test_07_roulette_statistics():
    def body():
        rng = named_rng(7001, "acceptance-roulette")
        for case in range(10):
            objectives = rng.uniform(0.05, 5.0, size=int(rng.integers(2, 12)))
            probs = selection_probabilities(objectives)
            scaled = selection_probabilities(objectives, selection_coeff=37.5)
            assert np.max(np.abs(scaled - probs)) < 1e-12

            draws = roulette_select(probs, named_rng(7100 + case, "draws"),
                                    size=100_000)
            freqs = np.bincount(draws, minlength=probs.size) / draws.size
            assert np.max(np.abs(freqs - probs)) < 0.02

    _run("07 roulette statistics", 5.0, body)


def test_08_operator_invariants():
    def body():
        rng = named_rng(8001, "acceptance-operators")
        cfg = GAConfig(mutation_prob=0.5, gene_low=-1.0, gene_high=1.0)
        for _ in range(10_000):
            a = rng.uniform(-1, 1, size=8)
            b = rng.uniform(-1, 1, size=8)
            j = int(rng.integers(8))
            child_a, child_b = crossover(a, b, j, float(rng.random()))
            lo, hi = min(a[j], b[j]), max(a[j], b[j])
            assert lo <= child_a[j] <= hi
            assert lo <= child_b[j] <= hi
            elsewhere = np.arange(8) != j
            assert (child_a[elsewhere] == a[elsewhere]).all()
            assert (child_b[elsewhere] == b[elsewhere]).all()

            genes = rng.uniform(-1, 1, size=8)
            generation = int(rng.integers(0, cfg.max_generations + 1))
            mutated = mutate(genes, generation, cfg, rng)
            assert (mutated >= cfg.gene_low).all()
            assert (mutated <= cfg.gene_high).all()

            frozen = mutate(genes, cfg.max_generations, cfg, rng)
            assert (frozen == genes).all()

    _run("08 operator invariants", 5.0, body)


def test_09_elitism_monotonicity():
    def body():
        generated = synth_dataset(13, FULL_SHAPE, 0.02, seed=909)
        data = generated.train + generated.test
        for seed in range(200, 220):
            cfg = GAConfig(population_size=60, max_generations=50, seed=seed)
            result = evolve(data, FULL_SHAPE, cfg)
            series = result.trace.best_sse_series
            assert len(series) == 50
            assert all(b <= a for a, b in zip(series, series[1:])), (
                f"seed {seed} regressed"
            )

    _run("09 elitism monotonicity", 60.0, body)


def test_10_hybrid_advantage():
    def body():
        train_cfg = TrainConfig(learning_rate=0.001, goal_mse=1e-5,
                                max_iterations=200)
        summaries = []
        for seed in range(20):
            generated = synth_dataset(13, FULL_SHAPE, 0.02, seed=seed)
            report = run_seed_pair(generated.train, generated.test,
                                   FULL_SHAPE, GAConfig(seed=seed),
                                   train_cfg, trainer="gd")
            summaries.append(pair_summary(report))

        gabp_median = float(np.median([s.gabp_train_mse for s in summaries]))
        bp_median = float(np.median([s.bp_train_mse for s in summaries]))
        wins = sum(s.gabp_initial_sse < s.bp_initial_sse for s in summaries)
        assert gabp_median <= bp_median, (
            f"median train MSE {gabp_median:.5f} vs baseline {bp_median:.5f}"
        )
        assert wins >= 16, f"warm start won only {wins}/20 initial errors"

    _run("10 hybrid advantage", 180.0, body)


def test_11_lm_convergence():
    def body():
        train_cfg = TrainConfig(goal_mse=1e-5, max_iterations=200)
        reached = 0
        for seed in range(100, 110):
            generated = synth_dataset(13, FULL_SHAPE, 0.0, seed=seed)
            evo = evolve(generated.train, FULL_SHAPE, GAConfig(seed=seed))
            result = train_lm(decode(evo.best_genes, FULL_SHAPE),
                              generated.train, train_cfg)
            reached += (result.stop_reason == "goal"
                        and result.curve[-1].mse <= 1e-5)
        assert reached >= 9, f"goal reached in only {reached}/10 seeds"

    _run("11 lm convergence", 120.0, body)


def test_12_end_to_end_determinism(tmp_path, monkeypatch):
    def body():
        args = ["compare", "--seeds", "3", "--seed", "42", "--out", "out"]
        first = tmp_path / "first"
        second = tmp_path / "second"
        first.mkdir()
        second.mkdir()
        monkeypatch.chdir(first)
        assert main(args) == 0
        monkeypatch.chdir(second)
        assert main(args) == 0

        names = sorted(p.name for p in (first / "out").iterdir())
        assert names == sorted(p.name for p in (second / "out").iterdir())
        assert names, "compare produced no output files"
        for name in names:
            assert ((first / "out" / name).read_bytes()
                    == (second / "out" / name).read_bytes()), (
                f"{name} differs between runs"
            )

    _run("12 end-to-end determinism", 60.0, body)
