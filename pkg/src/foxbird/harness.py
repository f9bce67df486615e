"""Experiment harness: corpus ingestion, hyperparameter spaces, the
naive-Bayes/TF-IDF tuning objective, optimizer races, and report emission.

Reproducibility: a master seed derives per-(method, run) child generators
via ``numpy.random.SeedSequence(master_seed, spawn_key=(method_index,
run_index))``, so every number in a report is a pure function of the config
and the master seed. Wall times are kept out of the deterministic report
files and written to a separate timings sidecar.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from . import textpipe
from .baselines import run_baseline
from .benchmarks import get_benchmark
from .core import SearchSpace, make_rng
from .hraha import HrahaConfig, OptimizationResult
from .hraha import run as run_hraha
from .metrics import accuracy as accuracy_metric
from .metrics import f_score as f_score_metric

__all__ = [
    "LabeledCorpus",
    "HyperparamDim",
    "HyperparamSpace",
    "TrialReport",
    "DataError",
    "load_corpus",
    "default_tuning_space",
    "classifier_objective",
    "train_nb",
    "predict_nb",
    "child_rng",
    "run_method",
    "run_random_search",
    "run_experiment",
    "emit_report",
    "METHODS",
]

METHODS = ("hraha", "aha", "rfo", "pso")


class DataError(ValueError):
    """Malformed or insufficient input data."""


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

@dataclass
class LabeledCorpus:
    ids: list[str]
    texts: list[str]
    labels: list[str]
    train_idx: list[int]
    test_idx: list[int]

    @property
    def label_set(self) -> list[str]:
        return sorted(set(self.labels))


def _parse_rows(path, fmt: str):
    rows = []
    if fmt == "csv":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"id", "text", "label"} <= set(reader.fieldnames):
                missing = {"id", "text", "label"} - set(reader.fieldnames or [])
                raise DataError(f"missing column(s): {', '.join(sorted(missing))}")
            for lineno, row in enumerate(reader, start=2):
                if row.get("id") is None or row.get("text") is None or row.get("label") is None:
                    raise DataError(f"malformed row at line {lineno}")
                rows.append((row["id"], row["text"], row["label"]))
    elif fmt == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as e:
                    raise DataError(f"malformed row at line {lineno}: {e}") from None
                if not {"id", "text", "label"} <= set(obj):
                    missing = {"id", "text", "label"} - set(obj)
                    raise DataError(f"missing column(s) at line {lineno}: {', '.join(sorted(missing))}")
                rows.append((str(obj["id"]), str(obj["text"]), str(obj["label"])))
    else:
        raise DataError(f"unknown corpus format {fmt!r} (expected csv or jsonl)")
    return rows


def load_corpus(path, fmt: str = "csv", split_ratio: float = 0.8, seed: int = 0) -> LabeledCorpus:
    """Parse a labeled corpus and make a deterministic stratified split.

    Every label is guaranteed at least one training document."""
    rows = _parse_rows(path, fmt)
    if len(rows) < 10:
        raise DataError(f"corpus too small: {len(rows)} documents (need >= 10)")
    labels = [r[2] for r in rows]
    if len(set(labels)) < 2:
        raise DataError("single-label corpus: need at least 2 distinct labels")
    if not 0 < split_ratio < 1:
        raise DataError(f"split_ratio must be in (0, 1), got {split_ratio}")
    rng = make_rng(seed)
    by_label: dict[str, list[int]] = {}
    for i, lab in enumerate(labels):
        by_label.setdefault(lab, []).append(i)
    train_idx, test_idx = [], []
    for lab in sorted(by_label):
        idx = np.array(by_label[lab])
        perm = rng.permutation(len(idx))
        n_train = max(1, round(split_ratio * len(idx)))
        n_train = min(n_train, len(idx))
        shuffled = idx[perm]
        train_idx.extend(int(i) for i in shuffled[:n_train])
        test_idx.extend(int(i) for i in shuffled[n_train:])
    train_idx.sort()
    test_idx.sort()
    return LabeledCorpus([r[0] for r in rows], [r[1] for r in rows], labels,
                         train_idx, test_idx)


# ---------------------------------------------------------------------------
# Hyperparameter space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperparamDim:
    name: str
    kind: str  # "continuous" | "integer" | "categorical"
    lo: float = 0.0
    hi: float = 1.0
    choices: tuple = ()

    def __post_init__(self):
        if self.kind not in ("continuous", "integer", "categorical"):
            raise ValueError(f"unknown dimension kind {self.kind!r}")
        if self.kind == "categorical" and not self.choices:
            raise ValueError(f"categorical dimension {self.name!r} needs choices")
        if self.kind != "categorical" and not self.lo < self.hi:
            raise ValueError(f"dimension {self.name!r} has inverted bounds")

    def box_bounds(self) -> tuple[float, float]:
        if self.kind == "categorical":
            return 0.0, float(len(self.choices))
        return float(self.lo), float(self.hi)

    def encode(self, value) -> float:
        if self.kind == "categorical":
            return self.choices.index(value) + 0.5
        return float(value)

    def decode(self, x: float):
        if self.kind == "continuous":
            return float(min(max(x, self.lo), self.hi))
        if self.kind == "integer":
            v = math.floor(x + 0.5)  # round half up
            return int(min(max(v, self.lo), self.hi))
        i = min(max(int(math.floor(x)), 0), len(self.choices) - 1)
        return self.choices[i]


@dataclass(frozen=True)
class HyperparamSpace:
    dims: tuple[HyperparamDim, ...]

    def to_box(self) -> SearchSpace:
        lo, hi = zip(*(d.box_bounds() for d in self.dims))
        return SearchSpace(np.array(lo), np.array(hi))

    def encode(self, values: dict) -> np.ndarray:
        return np.array([d.encode(values[d.name]) for d in self.dims])

    def decode(self, x) -> dict:
        return {d.name: d.decode(float(v)) for d, v in zip(self.dims, x)}


def default_tuning_space() -> HyperparamSpace:
    """Tunables of the TF-IDF / naive-Bayes text classifier."""
    return HyperparamSpace((
        HyperparamDim("min_doc_freq", "integer", 1, 5),
        HyperparamDim("max_terms", "integer", 10, 2000),
        HyperparamDim("use_stemming", "categorical", choices=(False, True)),
        HyperparamDim("nb_smoothing", "continuous", 0.01, 5.0),
    ))


# ---------------------------------------------------------------------------
# Naive Bayes classifier objective
# ---------------------------------------------------------------------------

def train_nb(X: np.ndarray, labels: list, classes: list, smoothing: float):
    """Multinomial naive Bayes on non-negative feature rows."""
    n_feat = X.shape[1]
    log_prior = np.empty(len(classes))
    log_lik = np.empty((len(classes), n_feat))
    labels = np.asarray(labels)
    for k, c in enumerate(classes):
        rows = X[labels == c]
        log_prior[k] = math.log(max(len(rows), 1) / X.shape[0])
        totals = rows.sum(axis=0)
        log_lik[k] = np.log(totals + smoothing) - math.log(totals.sum() + smoothing * n_feat)
    return log_prior, log_lik


def predict_nb(X: np.ndarray, classes: list, log_prior, log_lik) -> list:
    scores = X @ log_lik.T + log_prior
    return [classes[i] for i in np.argmax(scores, axis=1)]


class _PreparedCorpus:
    """Token lists precomputed once per stemming variant so each objective
    evaluation only rebuilds the vocabulary and count matrices."""

    def __init__(self, corpus: LabeledCorpus):
        self.corpus = corpus
        self.tokens = {
            False: [textpipe.preprocess(t, use_stemming=False) for t in corpus.texts],
            True: [textpipe.preprocess(t, use_stemming=True) for t in corpus.texts],
        }


def _fit_score(prep: _PreparedCorpus, params: dict) -> tuple[float, float]:
    """Train on the train split, score on the test split.

    Returns (accuracy, macro_f); (0, 0) for degenerate hyperparameters."""
    corpus = prep.corpus
    tokens = prep.tokens[bool(params["use_stemming"])]
    train_tokens = [tokens[i] for i in corpus.train_idx]
    test_tokens = [tokens[i] for i in corpus.test_idx]
    try:
        vocab = textpipe.build_vocabulary(train_tokens,
                                          min_doc_freq=int(params["min_doc_freq"]),
                                          max_terms=int(params["max_terms"]))
    except ValueError:
        return 0.0, 0.0
    if len(vocab) == 0:
        return 0.0, 0.0
    n_w = textpipe.doc_frequencies(train_tokens, vocab)
    idf = np.log(len(train_tokens) / np.maximum(n_w, 1))
    X_train = textpipe.bow_vectorize(train_tokens, vocab).values * idf
    X_test = textpipe.bow_vectorize(test_tokens, vocab).values * idf
    classes = corpus.label_set
    train_labels = [corpus.labels[i] for i in corpus.train_idx]
    test_labels = [corpus.labels[i] for i in corpus.test_idx]
    log_prior, log_lik = train_nb(X_train, train_labels, classes, float(params["nb_smoothing"]))
    pred = predict_nb(X_test, classes, log_prior, log_lik)
    return accuracy_metric(pred, test_labels), f_score_metric(pred, test_labels)


def classifier_objective(corpus: LabeledCorpus, space: HyperparamSpace):
    """Objective over the encoded real box: 1 - test macro-F of the tuned
    TF-IDF/naive-Bayes classifier. Degenerate regions score worst (1.0)
    instead of raising."""
    prep = _PreparedCorpus(corpus)
    cache: dict[tuple, float] = {}

    def objective(x) -> float:
        params = space.decode(x)
        key = tuple(sorted(params.items()))
        hit = cache.get(key)
        if hit is not None:
            return hit
        _, macro_f = _fit_score(prep, params)
        fitness = 1.0 - macro_f
        cache[key] = fitness
        return fitness

    objective.space = space
    objective.prepared = prep
    objective.fit_score = lambda x: _fit_score(prep, space.decode(x))
    return objective


# ---------------------------------------------------------------------------
# Experiment driver
# ---------------------------------------------------------------------------

def child_rng(master_seed: int, method_index: int, run_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(method_index, run_index))
    return np.random.Generator(np.random.PCG64(ss))


def run_method(method: str, obj, space: SearchSpace, pop_size: int,
               iterations: int, rng) -> OptimizationResult:
    if method == "hraha":
        return run_hraha(obj, space, HrahaConfig(max_iters=iterations), pop_size, rng)
    return run_baseline(method, obj, space, pop_size, iterations, rng)


def run_random_search(obj, space: SearchSpace, budget: int, rng) -> OptimizationResult:
    """Uniform random sampling at a fixed evaluation budget."""
    rng = make_rng(rng)
    best_x, best_f = None, math.inf
    history = []
    for _ in range(budget):
        x = rng.uniform(space.lower, space.upper)
        f = float(obj(x))
        if f < best_f:
            best_f, best_x = f, x
        history.append(best_f)
    return OptimizationResult(best_x, best_f, history, budget, {})


@dataclass
class TrialReport:
    """One row per optimization method; identical metric columns per row."""

    columns: list[str]
    rows: dict[str, dict[str, float]]  # method -> column -> value
    seeds: list[int] = field(default_factory=list)
    wall_times: dict[str, float] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {"columns": self.columns, "rows": self.rows, "seeds": self.seeds}

    @classmethod
    def from_json_dict(cls, d: dict) -> "TrialReport":
        return cls(list(d["columns"]), {m: dict(v) for m, v in d["rows"].items()},
                   list(d.get("seeds", [])))


def _experiment_seeds(config: dict) -> list[int]:
    seeds = config.get("seeds", {})
    if isinstance(seeds, list):
        return [int(s) for s in seeds]
    count = int(seeds.get("count", 1))
    master = int(seeds.get("master_seed", 0))
    return [master + i for i in range(count)]


def run_experiment(config: dict) -> TrialReport:
    """Race the configured methods on a benchmark or classifier-tuning task.

    Config sections: task, space (classifier only), methods, budget, seeds.
    Reported per method: median best fitness across runs, plus test accuracy
    and macro-F of the best-found configuration for classifier tasks.
    """
    task = config["task"]
    methods = [m.lower() for m in config.get("methods", list(METHODS))]
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    budget = config.get("budget", {})
    pop_size = int(budget.get("pop_size", 20))
    iterations = int(budget.get("iterations", 50))
    seeds = _experiment_seeds(config)

    kind = task.get("kind", "benchmark")
    hspace = None
    obj = None
    if kind == "benchmark":
        bench = get_benchmark(task["function"])
        dims = int(task.get("dims", 10))
        space = bench.space(dims)
        obj = bench
    elif kind == "classifier":
        corpus = load_corpus(task["corpus"], task.get("format", "csv"),
                             float(task.get("split_ratio", 0.8)),
                             int(task.get("split_seed", 0)))
        hspace = _space_from_config(config.get("space"))
        obj = classifier_objective(corpus, hspace)
        space = hspace.to_box()
    else:
        raise ValueError(f"unknown task kind {kind!r}")

    columns = ["best_fitness"]
    if kind == "classifier":
        columns += ["accuracy", "f_score"]
    rows: dict[str, dict[str, float]] = {}
    wall_times: dict[str, float] = {}
    for mi, method in enumerate(methods):
        t0 = time.perf_counter()
        results = [run_method(method, obj, space, pop_size, iterations,
                              child_rng(seeds[ri], mi, ri))
                   for ri in range(len(seeds))]
        wall_times[method] = time.perf_counter() - t0
        fits = [r.best_fitness for r in results]
        row = {"best_fitness": float(statistics.median(fits))}
        if kind == "classifier":
            best = min(results, key=lambda r: r.best_fitness)
            acc, mf = obj.fit_score(best.best_position)
            row["accuracy"] = acc
            row["f_score"] = mf
        rows[method] = row
    return TrialReport(columns, rows, seeds, wall_times)


def _space_from_config(space_cfg) -> HyperparamSpace:
    if space_cfg is None:
        return default_tuning_space()
    dims = []
    for d in space_cfg:
        kind = d["kind"]
        if kind == "categorical":
            dims.append(HyperparamDim(d["name"], kind, choices=tuple(d["choices"])))
        else:
            dims.append(HyperparamDim(d["name"], kind, float(d["lo"]), float(d["hi"])))
    return HyperparamSpace(tuple(dims))


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

def _ordered_columns(report: TrialReport) -> list[str]:
    return sorted(report.columns)


def emit_report(report: TrialReport, fmt: str = "csv",
                include_timings: bool = False) -> str:
    """Render a report. Column order is method first, then metrics
    alphabetically; the text table rounds to 4 decimals. Wall times are only
    included on request because they are not reproducible."""
    if not report.rows:
        raise ValueError("empty report")
    cols = _ordered_columns(report)
    if include_timings:
        cols = cols + ["wall_time_s"]

    def cell(method: str, col: str) -> float:
        if col == "wall_time_s":
            return report.wall_times.get(method, 0.0)
        return report.rows[method][col]

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(["method"] + cols)
        for method in report.rows:
            writer.writerow([method] + [repr(cell(method, c)) for c in cols])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "text-table":
        header = ["method"] + cols
        body = [[m] + [f"{cell(m, c):.4f}" for c in cols] for m in report.rows]
        widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in body:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(report: TrialReport, fmt: str, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(emit_report(report, fmt))
