"""Parse resolver output, score it against ground truth, aggregate accuracy.

A prediction is the set of integers extracted from the raw model output; it
is valid only when the indices exist, none are negative, and 0 (the "none
of these" answer) does not co-occur with real options. Scoring is exact set
match, so the resolver may list the relevant entities in any order and may
stutter duplicates. Invalid output never raises: it counts as incorrect and
feeds the separately reported invalid rate.
"""
from __future__ import annotations

import random
import re
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

import requests

from .entity_textualizer import RuleRegistry
from .layout_encoder import EncoderConfig
from .prompt_builder import Prompt, options_to_original, prompt_for_datapoint
from .screen_model import DataPoint

_INT_RE = re.compile(r"-?\d+")

_KIND_COLUMNS = (("Conv", "conversational"), ("Synth", "synthetic"), ("Screen", "onscreen"))


class ResolverError(RuntimeError):
    """A resolver could not produce output for a prompt (transport failure)."""


class EvaluationError(RuntimeError):
    """The run as a whole failed (too many transport failures)."""


@dataclass(frozen=True)
class Prediction:
    """Deduplicated index set extracted from raw resolver output."""

    indices: frozenset[int]
    raw: str
    valid: bool


def parse_prediction(raw: str, n: int) -> Prediction:
    """Extract integer tokens from raw output and validate them against n options.

    Duplicates collapse into a set. The prediction is invalid when no integer
    is present, any index is negative or exceeds n, or 0 appears alongside
    other indices. Invalidity is data, not an error.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    indices = frozenset(int(token) for token in _INT_RE.findall(raw))
    valid = bool(indices)
    if any(i < 0 or i > n for i in indices):
        valid = False
    if 0 in indices and len(indices) > 1:
        valid = False
    return Prediction(indices, raw, valid)


def score(prediction: Prediction, ground_truth: Iterable[int]) -> bool:
    """Exact, order-free set match; empty ground truth means the answer is {0}."""
    target = frozenset(ground_truth) or frozenset({0})
    return prediction.valid and prediction.indices == target


# --- resolvers ---------------------------------------------------------------

class Resolver(Protocol):
    """Turns a prompt into raw output text.

    The datapoint is passed alongside the prompt purely so test doubles can
    answer from ground truth; real resolvers should ignore it.
    """

    def resolve(self, prompt: Prompt, datapoint: DataPoint) -> str: ...


class ConstantResolver:
    """Always answers the same string; the "0" stub is the degenerate baseline."""

    def __init__(self, text: str = "0"):
        self.text = text

    def resolve(self, prompt: Prompt, datapoint: DataPoint) -> str:
        return self.text


class OracleResolver:
    """Answers from the datapoint's ground truth, in prompt coordinates.

    The indices come back shuffled and occasionally with one repeated, to
    exercise the order-free scoring and dedup paths. Output depends only on
    (seed, datapoint), never on call order, so the resolver behaves
    statelessly under any evaluation schedule.
    """

    def __init__(self, seed: int = 0, duplicate_rate: float = 0.5):
        self.seed = seed
        self.duplicate_rate = duplicate_rate

    def resolve(self, prompt: Prompt, datapoint: DataPoint) -> str:
        if not datapoint.ground_truth:
            return "0"
        key = zlib.crc32(datapoint.request.encode("utf-8")) ^ (self.seed * 0x9E3779B1)
        rng = random.Random(key)
        options = sorted(prompt.to_option(i) for i in datapoint.ground_truth)
        rng.shuffle(options)
        if self.duplicate_rate and rng.random() < self.duplicate_rate:
            options.append(rng.choice(options))
        return ", ".join(str(option) for option in options)


class RemoteResolver:
    """HTTP client for a hosted resolver.

    Sends POST {"prompt": ..., "max_tokens": ...} and expects {"text": ...}.
    Each prompt gets exactly one generation: no retries, so the reported
    accuracy is attributable to single calls.
    """

    def __init__(
        self,
        endpoint: str,
        auth_token: str | None = None,
        timeout: float = 30.0,
        max_tokens: int = 16,
    ):
        self.endpoint = endpoint
        self.auth_token = auth_token
        self.timeout = timeout
        self.max_tokens = max_tokens

    def resolve(self, prompt: Prompt, datapoint: DataPoint) -> str:
        headers = {}
        if self.auth_token:
            headers["Authorization"] = f"Bearer {self.auth_token}"
        try:
            response = requests.post(
                self.endpoint,
                json={"prompt": prompt.text, "max_tokens": self.max_tokens},
                headers=headers,
                timeout=self.timeout,
            )
            response.raise_for_status()
            return str(response.json()["text"])
        except (requests.RequestException, ValueError, KeyError) as exc:
            raise ResolverError(f"resolver request failed: {exc}") from exc


# --- dataset evaluation --------------------------------------------------------

@dataclass(frozen=True)
class KindStats:
    total: int = 0
    correct: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass(frozen=True)
class AccuracyReport:
    """Aggregate scores for one dataset run, with a per-kind breakdown."""

    dataset: str
    total: int
    correct: int
    invalid: int
    transport_failures: int
    per_kind: tuple[tuple[str, KindStats], ...]

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def kind_stats(self, kind: str) -> KindStats:
        return dict(self.per_kind).get(kind, KindStats())

    def to_json_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "invalid": self.invalid,
            "transport_failures": self.transport_failures,
            "per_kind": {
                kind: {
                    "total": stats.total,
                    "correct": stats.correct,
                    "accuracy": stats.accuracy,
                }
                for kind, stats in self.per_kind
            },
        }

    def table(self) -> str:
        """Plain-text accuracy table: one row per run, one column per dataset kind."""
        columns = [label for label, _ in _KIND_COLUMNS]
        cells = []
        for _, kind in _KIND_COLUMNS:
            stats = self.kind_stats(kind)
            cells.append(f"{100 * stats.accuracy:.1f}" if stats.total else "-")
        name_width = max(len("Model"), len(self.dataset))
        header = "Model".ljust(name_width) + "".join(c.rjust(8) for c in columns)
        row = self.dataset.ljust(name_width) + "".join(c.rjust(8) for c in cells)
        return header + "\n" + row


def item_seed(run_seed: int, datapoint: DataPoint) -> int:
    """Per-datapoint shuffle seed derived from content, not position, so a
    permuted dataset yields identical prompts per item."""
    digest = zlib.crc32(f"{datapoint.kind}:{datapoint.request}".encode("utf-8"))
    return digest ^ (run_seed * 0x85EBCA6B & 0xFFFFFFFF)


def evaluate_dataset(
    datapoints: Sequence[DataPoint],
    resolver: Resolver,
    config: EncoderConfig | None = None,
    seed: int = 0,
    dataset_name: str = "dataset",
    registry: RuleRegistry | None = None,
    max_workers: int = 1,
    max_failure_rate: float = 0.10,
) -> AccuracyReport:
    """Prompt, resolve, parse, and score every datapoint.

    Transport failures mark the item incorrect and the run continues; the
    run itself fails only when more than max_failure_rate of items could not
    be resolved. With max_workers > 1 resolver calls fan out over a thread
    pool; aggregation is order-independent either way.
    """
    datapoints = list(datapoints)

    def evaluate_item(datapoint: DataPoint) -> tuple[str, bool, bool, bool]:
        prompt = prompt_for_datapoint(
            datapoint, seed=item_seed(seed, datapoint), config=config, registry=registry
        )
        try:
            raw = resolver.resolve(prompt, datapoint)
        except ResolverError:
            return datapoint.kind, False, False, True
        prediction = parse_prediction(raw, len(datapoint.entities))
        if prediction.valid:
            prediction = Prediction(
                options_to_original(prediction.indices, prompt.index_map),
                prediction.raw,
                True,
            )
        correct = score(prediction, datapoint.ground_truth)
        return datapoint.kind, correct, not prediction.valid, False

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            outcomes = list(pool.map(evaluate_item, datapoints))
    else:
        outcomes = [evaluate_item(dp) for dp in datapoints]

    totals: dict[str, int] = {}
    corrects: dict[str, int] = {}
    invalid = 0
    failures = 0
    for kind, correct, was_invalid, failed in outcomes:
        totals[kind] = totals.get(kind, 0) + 1
        corrects[kind] = corrects.get(kind, 0) + (1 if correct else 0)
        invalid += 1 if was_invalid else 0
        failures += 1 if failed else 0

    total = sum(totals.values())
    if total and failures > max_failure_rate * total:
        raise EvaluationError(
            f"{failures}/{total} resolver calls failed (> {max_failure_rate:.0%})"
        )
    per_kind = tuple(
        (kind, KindStats(totals[kind], corrects[kind])) for kind in sorted(totals)
    )
    return AccuracyReport(
        dataset=dataset_name,
        total=total,
        correct=sum(corrects.values()),
        invalid=invalid,
        transport_failures=failures,
        per_kind=per_kind,
    )
