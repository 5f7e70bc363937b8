"""Corpus files, named feature vectors, and canonical report output.

A corpus is line-delimited JSON, one sentence per line:

    {"id": "s1",
     "nodes": 3,
     "goal": 2,
     "edges": [{"head": 0, "tails": [], "features": {"lm": 1.5}, "yield": ["the"]},
               {"head": 2, "tails": [0], "features": {"tm": -1.0},
                "yield": ["$0", "cat"]}],
     "reference": "the cat"}

Feature names are strings; the loader assigns them a stable global index
by sorting all names seen in the corpus, so the dense vector layout does
not depend on sentence order.  Yield entries are strings; "$k" substitutes
tail k's yield (tokens of that exact shape are reserved for slots).
``nodes`` is the node count, or equivalently a list of the ids 0..n-1.

All floats in serialized output use 17 significant digits, dictionary keys
are emitted sorted, and infinities become the strings "inf" and "-inf", so
byte-identical reports mean identical results.
"""

from __future__ import annotations

import json
import math
import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    ForestFormatError,
    MissingFeatureWarning,
    UnknownFeatureWarning,
)
from .forest import Edge, Hypergraph
from .metrics import tokenize

_SLOT_RE = re.compile(r"^\$(\d+)$")
_SENTENCE_KEYS = {"id", "nodes", "goal", "edges", "reference"}
_EDGE_KEYS = {"head", "tails", "features", "yield"}


class FeatureIndex:
    """Stable mapping between feature names and dense vector positions.

    Names are stored sorted, so the index is a function of the name set
    alone; reports record it so vectors can be read back by name.
    """

    __slots__ = ("names", "ids")

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(sorted(set(names)))
        self.ids: dict[str, int] = {n: i for i, n in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureIndex) and self.names == other.names

    def vectorize(self, mapping: Mapping[str, float], label: str) -> np.ndarray:
        """Dense vector from a name -> value map.

        Unknown names are ignored and indexed names absent from the map
        default to 0.0; each case raises one aggregated warning so sparse
        files stay ergonomic without hiding typos.
        """
        vec = np.zeros(len(self.names))
        unknown = sorted(k for k in mapping if k not in self.ids)
        if unknown:
            warnings.warn(
                f"{label}: ignoring feature names not in the corpus: {unknown}",
                UnknownFeatureWarning,
                stacklevel=2,
            )
        missing = sorted(n for n in self.names if n not in mapping)
        if missing:
            warnings.warn(
                f"{label}: features defaulting to 0.0: {missing}",
                MissingFeatureWarning,
                stacklevel=2,
            )
        for k, v in mapping.items():
            i = self.ids.get(k)
            if i is not None:
                vec[i] = float(v)
        return vec

    def to_mapping(self, vec: Sequence[float]) -> dict[str, float]:
        return {name: float(vec[i]) for i, name in enumerate(self.names)}


@dataclass(frozen=True)
class Sentence:
    sid: str
    graph: Hypergraph
    reference: tuple[str, ...]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]
    features: FeatureIndex

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def pairs(self) -> list[tuple[Hypergraph, tuple[str, ...]]]:
        return [(s.graph, s.reference) for s in self.sentences]


def _fail(where: str, message: str) -> ForestFormatError:
    return ForestFormatError(f"{where}: {message}")


def _check_int(value, where: str, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(where, f"{what} must be an integer, got {value!r}")
    return value


def _check_number(value, where: str, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(where, f"{what} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise _fail(where, f"{what} must be finite, got {value!r}")
    return float(value)


def _parse_nodes(value, where: str) -> int:
    if isinstance(value, list):
        ids = [_check_int(x, where, "node id") for x in value]
        if sorted(ids) != list(range(len(ids))) or not ids:
            raise _fail(where, f"node list must be the ids 0..n-1, got {value!r}")
        return len(ids)
    n = _check_int(value, where, "'nodes'")
    if n < 1:
        raise _fail(where, f"'nodes' must be positive, got {n}")
    return n


def _parse_reference(value, where: str) -> tuple[str, ...]:
    if isinstance(value, str):
        return tokenize(value)
    if isinstance(value, list) and all(isinstance(t, str) for t in value):
        return tuple(value)
    raise _fail(where, f"'reference' must be a string or list of tokens, got {value!r}")


def _parse_template(value, where: str) -> tuple[str | int, ...]:
    if not isinstance(value, list):
        raise _fail(where, f"'yield' must be a list, got {value!r}")
    out: list[str | int] = []
    for item in value:
        if not isinstance(item, str):
            raise _fail(where, f"yield entries must be strings, got {item!r}")
        m = _SLOT_RE.match(item)
        out.append(int(m.group(1)) if m else item)
    return tuple(out)


def _parse_doc(doc, where: str) -> dict:
    """Structural checks on one sentence document; features stay named."""
    if not isinstance(doc, dict):
        raise _fail(where, "sentence document must be a JSON object")
    missing = _SENTENCE_KEYS - doc.keys()
    if missing:
        raise _fail(where, f"missing keys: {sorted(missing)}")
    unknown = doc.keys() - _SENTENCE_KEYS
    if unknown:
        raise _fail(where, f"unknown keys: {sorted(unknown)}")
    if not isinstance(doc["id"], str):
        raise _fail(where, f"'id' must be a string, got {doc['id']!r}")
    n_nodes = _parse_nodes(doc["nodes"], where)
    goal = _check_int(doc["goal"], where, "'goal'")
    if not isinstance(doc["edges"], list):
        raise _fail(where, "'edges' must be a list")
    edges = []
    for k, e in enumerate(doc["edges"]):
        ewhere = f"{where}, edge {k}"
        if not isinstance(e, dict):
            raise _fail(ewhere, "edge must be a JSON object")
        bad = e.keys() - _EDGE_KEYS
        if bad:
            raise _fail(ewhere, f"unknown keys: {sorted(bad)}")
        if "head" not in e:
            raise _fail(ewhere, "missing 'head'")
        head = _check_int(e["head"], ewhere, "'head'")
        tails = e.get("tails", [])
        if not isinstance(tails, list):
            raise _fail(ewhere, "'tails' must be a list")
        tails = tuple(_check_int(t, ewhere, "tail") for t in tails)
        features = e.get("features", {})
        if not isinstance(features, dict):
            raise _fail(ewhere, "'features' must be an object")
        feats = {}
        for name, val in features.items():
            feats[name] = _check_number(val, ewhere, f"feature {name!r}")
        template = _parse_template(e.get("yield", []), ewhere)
        edges.append((head, tails, feats, template))
    return {
        "id": doc["id"],
        "n_nodes": n_nodes,
        "goal": goal,
        "edges": edges,
        "reference": _parse_reference(doc["reference"], where),
    }


def loads_corpus(text: str) -> Corpus:
    """Parse line-delimited sentence documents into a Corpus.

    Two passes: the first collects every feature name so the global index
    covers the whole corpus, the second builds the hypergraphs.
    """
    docs = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        where = f"line {i}"
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise _fail(where, f"invalid JSON: {exc}") from None
        docs.append((where, _parse_doc(raw, where)))
    names = {
        name for _, doc in docs for _, _, feats, _ in doc["edges"] for name in feats
    }
    index = FeatureIndex(names)
    sentences = []
    for where, doc in docs:
        edges = [
            Edge.make(head, tails, {index.ids[n]: v for n, v in feats.items()}, template)
            for head, tails, feats, template in doc["edges"]
        ]
        try:
            graph = Hypergraph(doc["n_nodes"], edges, doc["goal"], len(index))
        except ForestFormatError as exc:
            raise _fail(where, str(exc)) from None
        sentences.append(Sentence(doc["id"], graph, doc["reference"]))
    return Corpus(tuple(sentences), index)


def load_corpus(path: str) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return loads_corpus(fh.read())


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical line-delimited form; loads_corpus inverts it exactly."""
    names = corpus.features.names
    lines = []
    for s in corpus.sentences:
        edges = []
        for e in s.graph.edges:
            edges.append(
                {
                    "head": e.head,
                    "tails": list(e.tails),
                    "features": {names[i]: v for i, v in e.features},
                    "yield": [f"${x}" if isinstance(x, int) else x for x in e.template],
                }
            )
        doc = {
            "id": s.sid,
            "nodes": s.graph.n_nodes,
            "goal": s.graph.goal,
            "edges": edges,
            "reference": " ".join(s.reference),
        }
        lines.append(canonical_json(doc))
    return "\n".join(lines) + "\n" if lines else ""


def load_vector_map(path: str, label: str) -> dict[str, float]:
    """A JSON object of feature name -> finite number."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{label} file {path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError(f"{label} file {path}: expected a JSON object of name: value")
    out = {}
    for name, val in raw.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise DataError(f"{label} file {path}: {name!r} must map to a number")
        if not math.isfinite(val):
            raise DataError(f"{label} file {path}: {name!r} must be finite")
        out[name] = float(val)
    return out


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the search commands."""

    metric: str = "exact"
    merge_eps: float = 1e-9
    offset: float = 0.1
    strategy: str = "midpoint"
    iterations: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.strategy != "midpoint":
            raise ConfigError(f"unknown step strategy {self.strategy!r}")
        if self.merge_eps < 0:
            raise ConfigError(f"merge-eps must be >= 0, got {self.merge_eps}")
        if self.offset <= 0:
            raise ConfigError(f"offset must be positive, got {self.offset}")
        if self.iterations < 0:
            raise ConfigError(f"iterations must be >= 0, got {self.iterations}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")


def _float_repr(x: float) -> str:
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        raise ValueError("refusing to serialize NaN")
    out = format(x, ".17g")
    # ".17g" may emit bare exponents like "1e+300"; that is valid JSON.
    return out


def _write_canonical(obj, out: list[str]) -> None:
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float_repr(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _write_canonical(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise ValueError(f"report keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _write_canonical(obj[key], out)
        out.append("}")
    else:
        raise ValueError(f"cannot serialize {type(obj).__name__} canonically")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, 17-significant-digit floats, no
    whitespace, infinities as the strings "inf"/"-inf"."""
    out: list[str] = []
    _write_canonical(obj, out)
    return "".join(out)
