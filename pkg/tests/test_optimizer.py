import numpy as np
import pytest

from extpovm.errors import PreconditionError
from extpovm.extremal import decompose
from extpovm.metrology import CostFunction
from extpovm.models import QubitPhaseModel, UniformPrior
from extpovm.optimizer import (
    SearchConfig,
    _sample_rng,
    benchmark,
    resm_search,
    rsm_search,
    write_trace_csv,
)
from extpovm.povm import random_povm, to_rank1


def qubit_config(method, n_samples=50, seed=7, eta=np.pi / 3, workers=1):
    cost = CostFunction.fisher_at(QubitPhaseModel(eta), theta0=0.7)
    return SearchConfig(
        dim=2,
        n_outcomes=4,
        n_samples=n_samples,
        master_seed=seed,
        cost=cost,
        method=method,
        workers=workers,
    )


class TestSearch:
    def test_rsm_bounded_by_quantum_limit(self):
        eta = np.pi / 2
        res = rsm_search(qubit_config("rsm", n_samples=200, eta=eta))
        assert res.best_value <= np.sin(eta) ** 2 + 1e-8
        assert res.n_failed == 0

    def test_single_sample_trace(self):
        res = rsm_search(qubit_config("rsm", n_samples=1))
        assert len(res.trace) == 1
        assert res.best_sample == 0

    def test_same_seed_identical(self):
        r1 = rsm_search(qubit_config("rsm"))
        r2 = rsm_search(qubit_config("rsm"))
        assert r1.best_value == r2.best_value
        assert np.array_equal(r1.values(), r2.values())

    def test_running_best_monotone(self):
        res = resm_search(qubit_config("resm", n_samples=60))
        bests = [row[2] for row in res.trace]
        assert all(b2 >= b1 for b1, b2 in zip(bests, bests[1:]))

    def test_resm_reaches_quantum_limit_half_pi(self):
        eta = np.pi / 2
        res = resm_search(qubit_config("resm", n_samples=100, eta=eta))
        assert 0.99 <= res.best_value <= 1 + 1e-8

    def test_resm_van_trees_close_to_reference(self):
        # Members whose outcome probabilities nearly vanish at isolated
        # parameter values have Fisher curves with dips of width sqrt(eps);
        # a composite grid keeps the quadrature bias of the running max
        # well inside the 0.02 reproduction tolerance.
        eta = np.pi / 3
        cost = CostFunction.van_trees(QubitPhaseModel(eta), UniformPrior(n_panels=4))
        cfg = SearchConfig(
            dim=2, n_outcomes=4, n_samples=300, master_seed=3,
            cost=cost, method="resm",
        )
        res = resm_search(cfg)
        assert abs(res.best_value - 0.5) <= 0.02

    def test_resm_dominates_rsm_on_shared_seeds(self):
        cfg_r = qubit_config("rsm", n_samples=40)
        cfg_e = qubit_config("resm", n_samples=40)
        # same master seed: sample i draws the same parent POVM
        rsm = rsm_search(cfg_r)
        resm = resm_search(cfg_e)
        assert np.all(resm.values() >= rsm.values() - 1e-9)

    def test_per_parent_dominance(self):
        cfg = qubit_config("resm", n_samples=10)
        for i in range(10):
            parent = random_povm(2, 4, _sample_rng(cfg.master_seed, i))
            parent_value = cfg.cost(parent)
            members = decompose(to_rank1(parent)).terms
            member_best = max(cfg.cost(m) for _, m in members)
            assert member_best >= parent_value - 1e-9

    def test_worker_count_does_not_change_values(self):
        serial = resm_search(qubit_config("resm", n_samples=30, workers=1))
        parallel = resm_search(qubit_config("resm", n_samples=30, workers=2))
        assert serial.best_value == parallel.best_value
        assert np.array_equal(serial.values(), parallel.values())

    def test_method_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            rsm_search(qubit_config("resm"))

    def test_bad_config_rejected(self):
        with pytest.raises(PreconditionError):
            qubit_config("rsm", n_samples=0)
        with pytest.raises(PreconditionError):
            SearchConfig(2, 4, 1, 0, None, "annealing")


class TestBenchmark:
    def test_empty_budgets_rejected(self):
        with pytest.raises(PreconditionError):
            benchmark(qubit_config("rsm"), [], reference=1.0)

    def test_single_budget_no_slope(self):
        bench = benchmark(qubit_config("rsm"), [10], reference=1.0)
        assert bench.slopes["rsm"] is None
        assert bench.slopes["resm"] is None

    def test_errors_positive_and_reproducible(self):
        cfg = qubit_config("rsm", eta=np.pi / 3)
        b1 = benchmark(cfg, [10, 30], reference=np.sin(np.pi / 3) ** 2)
        b2 = benchmark(cfg, [10, 30], reference=np.sin(np.pi / 3) ** 2)
        assert np.all(b1.errors("rsm") > 0)
        assert np.array_equal(b1.errors("rsm"), b2.errors("rsm"))
        assert np.array_equal(b1.errors("resm"), b2.errors("resm"))

    def test_resm_converges_faster(self):
        eta = np.pi / 3
        cfg = qubit_config("rsm", eta=eta)
        bench = benchmark(cfg, [30, 100, 300], reference=np.sin(eta) ** 2)
        assert bench.errors("resm")[-1] <= bench.errors("rsm")[-1]


def test_trace_csv(tmp_path):
    res = rsm_search(qubit_config("rsm", n_samples=5))
    path = tmp_path / "trace.csv"
    write_trace_csv(res, path, reference=1.0)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "method,sample,seconds,best_value,error"
    assert len(lines) == 6


def test_benchmark_outputs(tmp_path):
    import json

    from extpovm.optimizer import write_benchmark_csv, write_benchmark_json
    from extpovm.povm import from_json_dict, validate

    bench = benchmark(qubit_config("rsm", n_samples=1), [5, 20], reference=1.0)
    write_benchmark_csv(bench, tmp_path / "bench.csv")
    write_benchmark_json(bench, tmp_path / "bench.json")
    lines = (tmp_path / "bench.csv").read_text().strip().splitlines()
    assert lines[0] == "method,budget,seconds,best_value,error"
    assert len(lines) == 5
    summary = json.loads((tmp_path / "bench.json").read_text())
    assert set(summary["slopes"]) == {"rsm", "resm"}
    assert validate(from_json_dict(summary["winning_povm"])).ok
