"""Domain ontology: entities, synonyms, typed relations, rooted is-a tree.

The is-a edges must form a tree so every pair of entities has a unique least
common subsumer; entities without an explicit parent are attached directly
under the root. Query expansion walks synonyms, one-level hyponyms and
non-hierarchical relations to add related terms at reduced weight, which is
what lets a search for temples surface documents that only mention wats.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import OntologyError
from .textproc import TokenStream, normalize

IS_A = "is_a"
CONTAINMENT = ("located_in", "part_of")


@dataclass(frozen=True)
class Entity:
    id: str
    label: str
    synonyms: tuple[str, ...] = ()
    entity_type: str = ""
    properties: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.label:
            raise OntologyError(f"entity {self.id!r} has an empty label")
        if len(set(self.synonyms)) != len(self.synonyms):
            raise OntologyError(f"entity {self.id!r} has duplicate synonyms")
        if self.label in self.synonyms:
            raise OntologyError(f"entity {self.id!r} lists its label as a synonym")


@dataclass(frozen=True)
class Relation:
    subject: str
    predicate: str
    object: str


class Ontology:
    """Validated, immutable ontology with a rooted is-a hierarchy."""

    def __init__(self, entities: Iterable[Entity], relations: Iterable[Relation], root: str):
        self.root = root
        self.entities: dict[str, Entity] = {}
        for ent in entities:
            if ent.id in self.entities:
                raise OntologyError(f"duplicate entity id {ent.id!r}")
            self.entities[ent.id] = ent
        if root not in self.entities:
            # Synthetic root: hierarchies may be declared as a forest.
            self.entities[root] = Entity(id=root, label=root, entity_type="root")
        self.relations: tuple[Relation, ...] = tuple(relations)
        self._validate_relations()
        self._parent = self._build_tree()
        self._children: dict[str, tuple[str, ...]] = {}
        kids: dict[str, list[str]] = {eid: [] for eid in self.entities}
        for child, parent in self._parent.items():
            kids[parent].append(child)
        self._children = {eid: tuple(sorted(c)) for eid, c in kids.items()}
        self._depth = self._compute_depths()
        self._term_index = self._build_term_index()

    def _validate_relations(self) -> None:
        for rel in self.relations:
            for endpoint in (rel.subject, rel.object):
                if endpoint not in self.entities:
                    raise OntologyError(
                        f"relation ({rel.subject}, {rel.predicate}, {rel.object}) "
                        f"references unknown entity {endpoint!r}"
                    )
            if rel.predicate in (IS_A,) + CONTAINMENT and rel.subject == rel.object:
                raise OntologyError(
                    f"self-loop {rel.predicate} relation on {rel.subject!r}"
                )

    def _build_tree(self) -> dict[str, str]:
        parent: dict[str, str] = {}
        for rel in self.relations:
            if rel.predicate != IS_A:
                continue
            if rel.subject in parent:
                raise OntologyError(
                    f"entity {rel.subject!r} has multiple is_a parents "
                    f"({parent[rel.subject]!r} and {rel.object!r})"
                )
            parent[rel.subject] = rel.object
        # Re-root: parentless entities hang off the root.
        for eid in self.entities:
            if eid != self.root and eid not in parent:
                parent[eid] = self.root
        return parent

    def _compute_depths(self) -> dict[str, int]:
        depth = {self.root: 1}
        for eid in self.entities:
            chain = []
            node = eid
            seen = set()
            while node not in depth:
                if node in seen:
                    raise OntologyError(f"is_a cycle involving {node!r}")
                seen.add(node)
                chain.append(node)
                node = self._parent[node]
            base = depth[node]
            for offset, member in enumerate(reversed(chain), start=1):
                depth[member] = base + offset
        return depth

    def _build_term_index(self) -> dict[str, str]:
        index: dict[str, str] = {}
        for eid in sorted(self.entities):
            ent = self.entities[eid]
            for term in (ent.label, *ent.synonyms):
                index.setdefault(normalize(term), eid)
        return index

    # -- hierarchy queries ---------------------------------------------------

    def depth(self, entity_id: str) -> int:
        self._require(entity_id)
        return self._depth[entity_id]

    def parent(self, entity_id: str) -> str | None:
        self._require(entity_id)
        return self._parent.get(entity_id)

    def children(self, entity_id: str) -> tuple[str, ...]:
        self._require(entity_id)
        return self._children.get(entity_id, ())

    def ancestors(self, entity_id: str) -> list[str]:
        """Chain from the entity up to and including the root."""
        self._require(entity_id)
        chain = [entity_id]
        node = entity_id
        while node != self.root:
            node = self._parent[node]
            chain.append(node)
        return chain

    def match_term(self, term: str) -> str | None:
        """Entity whose normalized label or synonym equals the term."""
        return self._term_index.get(normalize(term))

    def _require(self, entity_id: str) -> None:
        if entity_id not in self.entities:
            raise OntologyError(f"unknown entity id {entity_id!r}")

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "entities": [
                {
                    "id": e.id,
                    "label": e.label,
                    "synonyms": list(e.synonyms),
                    "type": e.entity_type,
                    "properties": dict(e.properties),
                }
                for e in (self.entities[eid] for eid in sorted(self.entities))
            ],
            "relations": [
                {"subject": r.subject, "predicate": r.predicate, "object": r.object}
                for r in sorted(self.relations, key=lambda r: (r.subject, r.predicate, r.object))
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Ontology":
        try:
            root = data["root"]
            raw_entities = data.get("entities", [])
            raw_relations = data.get("relations", [])
        except (TypeError, KeyError) as exc:
            raise OntologyError(f"malformed ontology document: missing {exc}") from exc
        entities = [
            Entity(
                id=e["id"],
                label=e["label"],
                synonyms=tuple(e.get("synonyms", [])),
                entity_type=e.get("type", ""),
                properties=e.get("properties", {}),
            )
            for e in raw_entities
        ]
        relations = [
            Relation(subject=r["subject"], predicate=r["predicate"], object=r["object"])
            for r in raw_relations
        ]
        return cls(entities, relations, root)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.root == other.root
            and self.entities == other.entities
            and sorted(self.relations, key=lambda r: (r.subject, r.predicate, r.object))
            == sorted(other.relations, key=lambda r: (r.subject, r.predicate, r.object))
        )


def load_ontology(path: str | Path) -> Ontology:
    """Load and validate an ontology JSON file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise OntologyError(f"{path}: invalid JSON: {exc}") from exc
    return Ontology.from_dict(data)


def save_ontology(ont: Ontology, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(ont.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def lcs(a: str, b: str, ont: Ontology) -> str:
    """Least common subsumer: the deepest shared is_a ancestor-or-self."""
    ancestors_a = set(ont.ancestors(a))
    for node in ont.ancestors(b):
        if node in ancestors_a:
            return node
    return ont.root


def wu_palmer(a: str, b: str, ont: Ontology) -> float:
    """Taxonomy similarity 2*depth(lcs) / (depth(a) + depth(b)), in (0, 1]."""
    shared = lcs(a, b, ont)
    return 2.0 * ont.depth(shared) / (ont.depth(a) + ont.depth(b))


# -- query expansion ---------------------------------------------------------


@dataclass(frozen=True)
class ExpansionConfig:
    weight: float = 0.5
    hyponym_levels: int = 1

    def __post_init__(self):
        if not 0.0 < self.weight < 1.0:
            raise ValueError("expansion weight must be in (0, 1)")
        if self.hyponym_levels < 0:
            raise ValueError("hyponym_levels must be >= 0")


@dataclass(frozen=True)
class ExpansionTerm:
    term: str
    weight: float
    entity_id: str
    relation: str


@dataclass(frozen=True)
class ExpandedQuery:
    """Original query terms at weight 1.0 plus ontology terms below 1.0."""

    original_terms: tuple[tuple[str, float], ...]
    expansion_terms: tuple[ExpansionTerm, ...] = ()

    def weights(self) -> dict[str, float]:
        vec = {term: w for term, w in self.original_terms}
        for exp in self.expansion_terms:
            vec.setdefault(exp.term, exp.weight)
        return vec

    def term_set(self) -> set[str]:
        return {t for t, _ in self.original_terms} | {e.term for e in self.expansion_terms}

    @classmethod
    def from_terms(cls, terms: Iterable[str]) -> "ExpandedQuery":
        seen: dict[str, float] = {}
        for t in terms:
            seen.setdefault(t, 1.0)
        return cls(original_terms=tuple(seen.items()))


def _containment_context(ont: Ontology, entity_id: str) -> set[str]:
    """Transitive located_in / part_of containers of an entity."""
    context: set[str] = set()
    frontier = [entity_id]
    while frontier:
        node = frontier.pop()
        for rel in ont.relations:
            if rel.predicate in CONTAINMENT and rel.subject == node:
                if rel.object not in context:
                    context.add(rel.object)
                    frontier.append(rel.object)
    return context


def _is_container(ont: Ontology, entity_id: str) -> bool:
    return any(
        rel.predicate in CONTAINMENT and rel.object == entity_id for rel in ont.relations
    )


def expand_query(
    stream: TokenStream, ont: Ontology, config: ExpansionConfig = ExpansionConfig()
) -> ExpandedQuery:
    """Expand query terms that name ontology entities.

    For each matched entity the expansion adds its label and synonyms, the
    labels of its direct hyponyms, and the labels of entities related through
    non-hierarchical relations whose containment context does not contradict
    the locations named elsewhere in the query. Terms already present are
    never re-added, and every expansion term carries the entity and relation
    it came from.
    """
    originals: dict[str, float] = {}
    for term in stream.terms():
        originals.setdefault(term, 1.0)

    matched: dict[str, str] = {}
    for term in originals:
        eid = ont.match_term(term)
        if eid is not None and eid != ont.root:
            matched.setdefault(term, eid)

    expansions: dict[str, ExpansionTerm] = {}

    def propose(term: str, entity_id: str, relation: str) -> None:
        norm = normalize(term)
        if norm in originals or norm in expansions:
            return
        expansions[norm] = ExpansionTerm(norm, config.weight, entity_id, relation)

    matched_ids = set(matched.values())
    for term, eid in matched.items():
        ent = ont.entities[eid]
        propose(ent.label, eid, "synonym")
        for syn in ent.synonyms:
            propose(syn, eid, "synonym")

        level = {eid}
        for _ in range(config.hyponym_levels):
            nxt: set[str] = set()
            for node in sorted(level):
                for child in ont.children(node):
                    propose(ont.entities[child].label, eid, "hyponym")
                    nxt.add(child)
            level = nxt

        anchors = {
            other
            for other in matched_ids - {eid}
            if _is_container(ont, other)
        }
        for rel in ont.relations:
            if rel.predicate == IS_A:
                continue
            if eid == rel.subject:
                other = rel.object
            elif eid == rel.object:
                other = rel.subject
            else:
                continue
            context = _containment_context(ont, other) | {other}
            if anchors and not anchors <= context:
                continue
            propose(ont.entities[other].label, eid, rel.predicate)

    ordered = tuple(expansions[k] for k in sorted(expansions))
    return ExpandedQuery(original_terms=tuple(originals.items()), expansion_terms=ordered)


def semantic_similarity(eq: ExpandedQuery, doc) -> float:
    """Cosine between the expanded-query weight vector and the document's
    term-frequency vector (title and body pooled). Zero vectors give 0.0."""
    if doc.title_tokens is None or doc.body_tokens is None:
        raise ValueError(f"document {doc.doc_id} is not tokenized")
    q_vec = eq.weights()
    d_vec: Counter[str] = Counter(doc.title_tokens.terms())
    d_vec.update(doc.body_tokens.terms())
    return cosine(q_vec, d_vec)


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine similarity of two sparse term vectors; 0.0 if either is zero."""
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    shorter, longer = (a, b) if len(a) <= len(b) else (b, a)
    dot = sum(v * longer.get(k, 0.0) for k, v in shorter.items())
    return dot / (norm_a * norm_b)
