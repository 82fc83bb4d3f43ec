"""Random-search drivers over POVM space and a time-vs-error benchmark.

Two methods share one driver.  RSM evaluates the cost on random POVMs
directly; RESM decomposes each random POVM into extremal POVMs and
evaluates the cost on every member, exploiting convexity of the cost
(the maximum over all POVMs is attained at an extremal one).

Per-sample seeds are derived from (master_seed, sample_index), so results
do not depend on scheduling and the worker count only changes wall time.
"""

import csv
import json
import multiprocessing
import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import NumericalError, PreconditionError
from .extremal import decompose
from .povm import random_povm, to_rank1

ERROR_FLOOR = 1e-16


@dataclass
class SearchConfig:
    dim: int
    n_outcomes: int
    n_samples: int
    master_seed: int
    cost: object  # CostFunction
    method: str  # "rsm" or "resm"
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 1 or self.n_outcomes < 1:
            raise PreconditionError("n_samples and n_outcomes must be >= 1")
        if self.method not in ("rsm", "resm"):
            raise PreconditionError(f"unknown method {self.method!r}")
        if self.workers < 1:
            raise PreconditionError("workers must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one search run.

    ``trace`` holds one row per sample in index order:
    (sample, value, running_best, cumulative_seconds).  Failed samples
    carry value NaN and leave the running best unchanged.
    """

    method: str
    best_value: float
    best_povm: object
    best_sample: int
    trace: tuple
    n_failed: int
    n_capped: int

    def values(self):
        return np.array([row[1] for row in self.trace])


def _sample_rng(master_seed, index):
    return np.random.default_rng([master_seed, index])


def _run_one(config, index):
    rng = _sample_rng(config.master_seed, index)
    start = time.perf_counter()
    try:
        parent = random_povm(config.dim, config.n_outcomes, rng)
        if config.method == "rsm":
            result = config.cost.evaluate(parent)
            value, povm, capped = result.value, parent, result.n_capped
        else:
            decomposition = decompose(to_rank1(parent))
            value, povm, capped = -np.inf, None, 0
            for _, member in decomposition.terms:
                result = config.cost.evaluate(member)
                capped += result.n_capped
                if result.value > value:
                    value, povm = result.value, member
    except NumericalError:
        return index, None, None, time.perf_counter() - start, 0
    return index, value, povm, time.perf_counter() - start, capped


def run_search(config):
    """Execute the configured search and aggregate in sample order."""
    indices = range(config.n_samples)
    config.cost._stacks()  # warm the state cache before forking
    if config.workers > 1:
        with multiprocessing.Pool(config.workers) as pool:
            outcomes = pool.starmap(
                _run_one, ((config, i) for i in indices), chunksize=8
            )
        outcomes.sort(key=lambda row: row[0])
    else:
        outcomes = [_run_one(config, i) for i in indices]

    best_value, best_povm, best_sample = -np.inf, None, -1
    n_failed, n_capped = 0, 0
    elapsed = 0.0
    trace = []
    for index, value, povm, seconds, capped in outcomes:
        elapsed += seconds
        n_capped += capped
        if value is None:
            n_failed += 1
            trace.append((index, np.nan, best_value, elapsed))
            continue
        if value > best_value:
            best_value, best_povm, best_sample = value, povm, index
        trace.append((index, value, best_value, elapsed))
    return SearchResult(
        method=config.method,
        best_value=best_value,
        best_povm=best_povm,
        best_sample=best_sample,
        trace=tuple(trace),
        n_failed=n_failed,
        n_capped=n_capped,
    )


def rsm_search(config):
    """Search by evaluating the cost on raw random POVMs."""
    if config.method != "rsm":
        raise PreconditionError("config.method must be 'rsm'")
    return run_search(config)


def resm_search(config):
    """Search over the extremal members of decomposed random POVMs."""
    if config.method != "resm":
        raise PreconditionError("config.method must be 'resm'")
    return run_search(config)


def write_trace_csv(result, path, reference=None):
    """Per-sample trace as CSV: method,sample,seconds,best_value,error."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "sample", "seconds", "best_value", "error"])
        for sample, _, running_best, seconds in result.trace:
            error = "" if reference is None else repr(
                max(reference - running_best, ERROR_FLOOR)
            )
            writer.writerow(
                [result.method, sample, repr(seconds), repr(running_best), error]
            )


@dataclass(frozen=True)
class BenchmarkResult:
    """Per-budget errors and fitted log-log slopes for both methods.

    ``rows`` contain (method, budget, seconds, best_value, error); the
    slope of log10(error) against log10(seconds) is fitted by ordinary
    least squares and is None when fewer than two budgets were run.
    """

    rows: tuple
    slopes: dict
    reference: float
    best_povm: object = None
    best_value: float = -np.inf

    def errors(self, method):
        return np.array([r[4] for r in self.rows if r[0] == method])

    def summary_dict(self):
        """JSON-ready summary: slopes, per-budget rows, and the winner."""
        from .povm import to_json_dict

        return {
            "reference": self.reference,
            "slopes": self.slopes,
            "rows": [
                {"method": m, "budget": n, "seconds": s,
                 "best_value": v, "error": e}
                for m, n, s, v, e in self.rows
            ],
            "best_value": self.best_value,
            "winning_povm": (
                to_json_dict(self.best_povm) if self.best_povm is not None else None
            ),
        }


def benchmark(config, budgets, reference):
    """Run both methods at several sample budgets against a reference value.

    The reference must upper-bound every achievable cost value (for the
    qubit phase model the closed form sin^2(eta) is exact), so errors are
    nonnegative; they are floored at 1e-16 for the log fit.
    """
    budgets = list(budgets)
    if not budgets:
        raise PreconditionError("budget list is empty")
    rows = []
    slopes = {}
    best_value, best_povm = -np.inf, None
    for method in ("rsm", "resm"):
        for budget in budgets:
            cfg = replace(config, method=method, n_samples=int(budget))
            start = time.perf_counter()
            result = run_search(cfg)
            seconds = time.perf_counter() - start
            error = max(reference - result.best_value, ERROR_FLOOR)
            rows.append((method, int(budget), seconds, result.best_value, error))
            if result.best_value > best_value:
                best_value, best_povm = result.best_value, result.best_povm
        if len(budgets) >= 2:
            sec = np.log10([r[2] for r in rows if r[0] == method])
            err = np.log10([r[4] for r in rows if r[0] == method])
            slopes[method] = float(np.polyfit(sec, err, 1)[0])
        else:
            slopes[method] = None
    return BenchmarkResult(rows=tuple(rows), slopes=slopes, reference=reference,
                           best_povm=best_povm, best_value=best_value)


def write_benchmark_csv(bench, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "budget", "seconds", "best_value", "error"])
        for method, budget, seconds, best_value, error in bench.rows:
            writer.writerow([method, budget, repr(seconds), repr(best_value), repr(error)])


def write_benchmark_json(bench, path):
    """Summary with fitted slopes and the winning POVM, as JSON."""
    with open(path, "w") as fh:
        json.dump(bench.summary_dict(), fh, indent=2, sort_keys=True)
