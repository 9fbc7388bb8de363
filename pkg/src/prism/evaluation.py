"""Adversarial privacy/quality evaluation over a synthetic QA corpus.

The privacy score treats an evaluator as an adversary reading the masked
text: PPS = 1 - accuracy. The quality score reads the restored
translation: QS = accuracy. Scanning the substitution ratio produces a
trade-off curve; the area under it (first rectangle plus trapezoids) and
the interpolated quality at a privacy threshold summarize a mechanism.

Documents and multiple-choice questions are generated from templates so
that a deterministic oracle evaluator answers every question correctly on
plaintext: each choice carries probe tokens, and the oracle picks the
first label whose probes all occur in the reference text.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .engines import MockLexicon
from .pipeline import NODECODE, Pipeline
from .textcore import TokenKind, tokenize

LABELS = ("A", "B", "C", "D")

NAMES = [
    "alice", "bob", "carol", "david", "emma", "frank", "grace", "henry",
    "irene", "jack", "karen", "leo", "mary", "nathan", "olivia", "peter",
    "quinn", "rachel", "sam", "tina",
]
PLACES = [
    "bakery", "library", "harbor", "museum", "garden", "castle", "market",
    "forest", "station", "temple", "bridge", "tower", "farm", "cinema",
    "hospital", "school", "hotel", "shop", "park", "mill",
]
OBJECTS = [
    "lantern", "basket", "violin", "ladder", "mirror", "compass", "kettle",
    "ribbon", "hammer", "candle", "bucket", "blanket", "whistle", "barrel",
    "helmet", "anchor", "shovel", "locket", "saddle", "telescope",
]
ACTIONS = [
    "carried", "painted", "borrowed", "repaired", "polished", "discovered",
    "dropped", "traded", "measured", "wrapped", "buried", "sharpened",
    "cleaned", "weighed", "guarded", "sketched", "counted", "stacked",
    "rinsed", "balanced",
]


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class QaItem:
    doc_id: str
    question: str
    choices: dict  # label -> display string
    answer: str
    probe_tokens: dict  # label -> frozenset of lowercase tokens

    def __post_init__(self) -> None:
        if self.answer not in LABELS:
            raise EvaluationError(f"answer label must be one of {LABELS}, got {self.answer!r}")
        if set(self.choices) != set(LABELS) or set(self.probe_tokens) != set(LABELS):
            raise EvaluationError("choices and probe_tokens must cover labels A-D")
        seen: set = set()
        for label in LABELS:
            probes = self.probe_tokens[label]
            if seen & probes:
                raise EvaluationError("probe token sets must be pairwise disjoint")
            seen |= probes


def generate_synthetic_corpus(size: int, seed: int = 0) -> tuple[list[str], list[QaItem]]:
    """Seeded documents with four answerable questions each.

    Every document fills name/place/object/action slots; the questions'
    gold choices are exactly those fillers and the distractors never occur
    in the document, so the oracle evaluator is correct on plaintext.
    """
    if size < 1:
        raise EvaluationError("size must be >= 1")
    rng = random.Random(seed)
    documents: list[str] = []
    items: list[QaItem] = []
    for index in range(size):
        name = rng.choice(NAMES)
        place = rng.choice(PLACES)
        obj = rng.choice(OBJECTS)
        action = rng.choice(ACTIONS)
        title = name.title()
        documents.append(
            f"{title} went to the {place} in the morning. "
            f"{title} {action} the {obj} near the {place}. "
            f"Everyone at the {place} admired the {obj}. "
            f"Later {title} returned home and rested."
        )
        doc_id = f"doc-{index:04d}"
        slots = {name, place, obj, action}
        specs = [
            (f"Who {action} the {obj}?", name, NAMES),
            (f"Where did {title} go in the morning?", place, PLACES),
            (f"What did {title} {action} near the {place}?", obj, OBJECTS),
            (f"What did {title} do with the {obj}?", action, ACTIONS),
        ]
        for question, gold, bank in specs:
            distractors = rng.sample([w for w in bank if w != gold and w not in slots], 3)
            gold_label = LABELS[rng.randrange(4)]
            choices = {}
            probes = {}
            pool = iter(distractors)
            for label in LABELS:
                word = gold if label == gold_label else next(pool)
                choices[label] = word
                probes[label] = frozenset({word})
            items.append(
                QaItem(
                    doc_id=doc_id,
                    question=question,
                    choices=choices,
                    answer=gold_label,
                    probe_tokens=probes,
                )
            )
    return documents, items


def oracle_evaluate(reference_text: str, item: QaItem) -> str:
    """First label (A to D) whose probe tokens all occur in the text;
    "A" when none match. Deterministic by construction."""
    present = {
        t.surface.lower()
        for t in tokenize(reference_text).tokens
        if t.kind is not TokenKind.PUNCTUATION
    }
    for label in LABELS:
        if item.probe_tokens[label] <= present:
            return label
    return "A"


Evaluator = Callable[[str, QaItem], str]


def translate_probe_tokens(items: Sequence[QaItem], lexicon: MockLexicon) -> list[QaItem]:
    """Map probe tokens into the target language so the oracle can read
    translated references."""
    mapped = []
    for item in items:
        probes = {
            label: frozenset(lexicon.lookup(w) or w for w in tokens)
            for label, tokens in item.probe_tokens.items()
        }
        mapped.append(
            QaItem(
                doc_id=item.doc_id,
                question=item.question,
                choices=item.choices,
                answer=item.answer,
                probe_tokens=probes,
            )
        )
    return mapped


def _items_by_doc(documents: Sequence[str], items: Sequence[QaItem]) -> list[tuple[str, list[QaItem]]]:
    if not documents:
        raise EvaluationError("no documents to evaluate")
    grouped: dict[str, list[QaItem]] = {}
    for item in items:
        grouped.setdefault(item.doc_id, []).append(item)
    pairs = []
    for index, doc in enumerate(documents):
        doc_id = f"doc-{index:04d}"
        pairs.append((doc, grouped.get(doc_id, [])))
    if not any(qa for _, qa in pairs):
        raise EvaluationError("no questions matched the documents")
    return pairs


def _doc_seed(seed: int, index: int) -> int:
    return seed * 100003 + index


def pps(
    pipeline: Pipeline,
    method: str,
    ratio: float,
    documents: Sequence[str],
    items: Sequence[QaItem],
    evaluator: Evaluator = oracle_evaluate,
    seed: int = 0,
    beta: float = 0.0,
) -> float:
    """Privacy-preserving score: 1 - adversary accuracy on masked text.

    Only the encoder runs; the questions are never shown to it.
    """
    from .mechanisms import MechanismParams

    encode_method = "prism_star" if method == NODECODE else method
    correct = 0
    total = 0
    for index, (doc, qa) in enumerate(_items_by_doc(documents, items)):
        params = MechanismParams(
            method=encode_method, ratio=ratio, beta=beta, seed=_doc_seed(seed, index)
        )
        x_pub = pipeline.encode(doc, params).x_pub
        for item in qa:
            total += 1
            if evaluator(x_pub, item) == item.answer:
                correct += 1
    return 1.0 - correct / total


def qs(
    pipeline: Pipeline,
    method: str,
    ratio: float,
    documents: Sequence[str],
    items: Sequence[QaItem],
    engine_id: str,
    evaluator: Evaluator = oracle_evaluate,
    seed: int = 0,
    beta: float = 0.0,
    target_items: Optional[Sequence[QaItem]] = None,
) -> float:
    """Quality score: evaluator accuracy on the restored translation.

    Probe tokens are mapped through the engine's mock lexicon unless
    pre-translated items are supplied.
    """
    if target_items is None:
        lexicon = pipeline.registry.mock_lexicon(engine_id)
        target_items = translate_probe_tokens(items, lexicon) if lexicon else items
    correct = 0
    total = 0
    for index, (doc, qa) in enumerate(_items_by_doc(documents, target_items)):
        result = pipeline.run(
            doc, method, ratio, engine_id, seed=_doc_seed(seed, index), beta=beta
        )
        for item in qa:
            total += 1
            if evaluator(result.y_pri, item) == item.answer:
                correct += 1
    return correct / total


@dataclass(frozen=True)
class TradeoffPoint:
    param: float
    pps: float
    qs: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.pps <= 1.0 and 0.0 <= self.qs <= 1.0):
            raise EvaluationError("pps and qs must lie in [0, 1]")


@dataclass(frozen=True)
class TradeoffCurve:
    points: tuple[TradeoffPoint, ...]
    mechanism: str = ""
    engine: str = ""

    def __post_init__(self) -> None:
        for prev, cur in zip(self.points, self.points[1:]):
            if cur.pps <= prev.pps:
                raise EvaluationError("curve points must be strictly increasing in pps")


def make_curve(points: Iterable[TradeoffPoint], mechanism: str = "", engine: str = "") -> TradeoffCurve:
    """Sort by pps and merge equal-pps points, keeping the best qs."""
    merged: dict[float, TradeoffPoint] = {}
    for point in points:
        kept = merged.get(point.pps)
        if kept is None or point.qs > kept.qs:
            merged[point.pps] = point
    ordered = tuple(merged[k] for k in sorted(merged))
    return TradeoffCurve(points=ordered, mechanism=mechanism, engine=engine)


def sweep(
    pipeline: Pipeline,
    method: str,
    grid: Sequence[float],
    documents: Sequence[str],
    items: Sequence[QaItem],
    engine_id: str,
    evaluator: Evaluator = oracle_evaluate,
    seed: int = 0,
    beta: float = 0.0,
) -> TradeoffCurve:
    """One trade-off point per distinct grid value."""
    if not grid:
        raise EvaluationError("parameter grid must be non-empty")
    values = sorted(set(grid))
    points = []
    for gi, value in enumerate(values):
        point_seed = _doc_seed(seed, 7919 * (gi + 1))
        points.append(
            TradeoffPoint(
                param=value,
                pps=pps(pipeline, method, value, documents, items, evaluator, seed=point_seed, beta=beta),
                qs=qs(pipeline, method, value, documents, items, engine_id, evaluator, seed=point_seed, beta=beta),
            )
        )
    return make_curve(points, mechanism=method, engine=engine_id)


def aupqc(curve: TradeoffCurve) -> float:
    """Area under the privacy-quality curve.

    The first point contributes its rectangle pps*qs; each following pair
    adds the trapezoid (pps_i - pps_{i-1}) * (qs_{i-1} + qs_i) / 2.
    """
    if not curve.points:
        raise EvaluationError("cannot integrate an empty curve")
    area = 0.0
    prev: Optional[TradeoffPoint] = None
    for point in curve.points:
        if prev is None:
            area += point.pps * point.qs
        else:
            area += (point.pps - prev.pps) * (prev.qs + point.qs) / 2
        prev = point
    return area


@dataclass(frozen=True)
class QsAt:
    value: float
    extrapolated: bool


def qs_at(curve: TradeoffCurve, p: float) -> QsAt:
    """Quality at privacy level p: linear interpolation between the
    bracketing points, clamped (and flagged) outside the measured range."""
    if not curve.points:
        raise EvaluationError("cannot interpolate an empty curve")
    points = curve.points
    if p <= points[0].pps:
        return QsAt(value=points[0].qs, extrapolated=p < points[0].pps)
    if p >= points[-1].pps:
        return QsAt(value=points[-1].qs, extrapolated=p > points[-1].pps)
    for left, right in zip(points, points[1:]):
        if left.pps <= p <= right.pps:
            t = (p - left.pps) / (right.pps - left.pps)
            return QsAt(value=left.qs + t * (right.qs - left.qs), extrapolated=False)
    raise AssertionError("unreachable: p inside range but no bracket found")


CURVE_HEADER = ["param", "pps", "qs"]


def save_curve(curve: TradeoffCurve, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_HEADER)
        for point in curve.points:
            writer.writerow([repr(point.param), repr(point.pps), repr(point.qs)])


def load_curve(path, mechanism: str = "", engine: str = "") -> TradeoffCurve:
    points = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CURVE_HEADER:
            raise EvaluationError(f"{path}: expected header {CURVE_HEADER}, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise EvaluationError(f"{path}:{lineno}: expected 3 columns")
            try:
                points.append(TradeoffPoint(param=float(row[0]), pps=float(row[1]), qs=float(row[2])))
            except ValueError:
                raise EvaluationError(f"{path}:{lineno}: non-numeric value") from None
    return make_curve(points, mechanism=mechanism, engine=engine)


def render_curve_figure(curves: Sequence[TradeoffCurve], path) -> None:
    """Plot privacy vs quality to a PNG next to the delimited output."""
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.0, 4.5), dpi=120)
    ax = fig.add_subplot(111)
    for curve in curves:
        xs = [p.pps for p in curve.points]
        ys = [p.qs for p in curve.points]
        ax.plot(xs, ys, marker="o", label=curve.mechanism or "curve")
    ax.set_xlabel("privacy-preserving score")
    ax.set_ylabel("quality score")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    if len(curves) > 1 or (curves and curves[0].mechanism):
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)


def write_report(
    curve: TradeoffCurve,
    out_dir,
    thresholds: Sequence[float] = (0.5,),
    basename: str = "curve",
) -> dict:
    """Emit curve CSV, JSON summary and the rendered figure.

    Returns the summary: {mechanism, engine, aupqc, qs_at: {p: value}}.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_curve(curve, out / f"{basename}.csv")
    render_curve_figure([curve], out / f"{basename}.png")
    summary = {
        "mechanism": curve.mechanism,
        "engine": curve.engine,
        "aupqc": aupqc(curve),
        "qs_at": {},
        "extrapolated": [],
    }
    for p in thresholds:
        result = qs_at(curve, p)
        summary["qs_at"][str(p)] = result.value
        if result.extrapolated:
            summary["extrapolated"].append(p)
    with open(out / f"{basename}_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, ensure_ascii=False, indent=2)
    return summary
