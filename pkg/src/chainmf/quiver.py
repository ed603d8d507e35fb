"""The inductive quiver with relations presenting the endomorphism algebra of the collection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .collection import (
    Collection,
    Label,
    Report,
    Violation,
    build_collection,
    canonical_lambda,
    canonical_sigma,
    canonical_theta,
    check_exponents,
    label_text,
    phi_j_morphism,
    psi_i_morphism,
)
from .factorization import MfMorphism, compose, identity
from .hom import hom_basis, hom_computation, homotopic, is_null_homotopic
from .linalg import Echelon

SCHEMA = "chainmf.quiver/1"


class QuiverError(ValueError):
    pass


class CyclicQuiver(QuiverError):
    pass


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    kind: str  # inherited-psi, inherited-phi, lambda, sigma, theta
    index: int
    name: str
    # how to rebuild the canonical morphism: (kind, index, arrow or vertex of the sub-quiver)
    origin: Tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class Relation:
    """``Null(path)`` when ``other`` is None, else ``Comm(path, other)``.

    Paths are tuples of arrow indices in travel order (first arrow first).
    """

    path: Tuple[int, ...]
    other: Optional[Tuple[int, ...]] = None
    family: str = ""

    @property
    def is_null(self) -> bool:
        return self.other is None


@dataclass
class Quiver:
    exponents: Tuple[int, ...]
    vertices: List[Label]
    arrows: List[Arrow]
    prev: Optional["Quiver"] = field(default=None, repr=False)
    prev2: Optional["Quiver"] = field(default=None, repr=False)

    @property
    def level(self) -> int:
        return len(self.exponents)

    def arrows_between(self, s: int, t: int) -> List[int]:
        return [k for k, a in enumerate(self.arrows) if a.source == s and a.target == t]


@dataclass
class RelationSet:
    relations: List[Relation]

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)


def _path_ok(Q: Quiver, path: Sequence[int]) -> bool:
    return all(Q.arrows[a].target == Q.arrows[b].source for a, b in zip(path, path[1:]))


# ---------------------------------------------------------------------------
# construction


def _quiver_rec(a: Tuple[int, ...], cache: Dict) -> Tuple[Quiver, RelationSet]:
    if a in cache:
        return cache[a]
    n = len(a)
    if n == 0:
        out = (Quiver((), [()], []), RelationSet([]))
        cache[a] = out
        return out
    Q1, I1 = _quiver_rec(a[:-1], cache)
    if n >= 2:
        Q2, I2 = _quiver_rec(a[:-2], cache)
    else:
        Q2, I2 = Quiver((), [], []), RelationSet([])
    an = a[-1]
    an1 = a[-2] if n >= 2 else 1
    n1, n2 = len(Q1.vertices), len(Q2.vertices)
    psi_off = lambda i: i * n1
    phi_off = lambda j: (an - 1) * n1 + j * n2

    vertices: List[Label] = []
    for i in range(an - 1):
        vertices += [(("psi", i),) + v for v in Q1.vertices]
    for j in range(an1 if n >= 2 else 0):
        vertices += [(("phi", j),) + v for v in Q2.vertices]

    arrows: List[Arrow] = []
    psi_copy, phi_copy, lam, sig, the = {}, {}, {}, {}, {}

    def add(arrow: Arrow) -> int:
        arrows.append(arrow)
        return len(arrows) - 1

    for i in range(an - 1):
        for k, ar in enumerate(Q1.arrows):
            psi_copy[(i, k)] = add(Arrow(psi_off(i) + ar.source, psi_off(i) + ar.target, "inherited-psi", i,
                                         f"psi{i}({ar.name})", ("psi", i, k)))
    if n >= 2:
        for j in range(an1):
            for k, ar in enumerate(Q2.arrows):
                phi_copy[(j, k)] = add(Arrow(phi_off(j) + ar.source, phi_off(j) + ar.target, "inherited-phi", j,
                                             f"phi{j}({ar.name})", ("phi", j, k)))
    for i in range(an - 2):
        for v in range(n1):
            lam[(i, v)] = add(Arrow(psi_off(i) + v, psi_off(i + 1) + v, "lambda", i,
                                    f"lambda{i}[{label_text(Q1.vertices[v])}]", ("lambda", i, v)))
    if n >= 2 and an >= 2:
        # vertex psi_j v of Q^{n-1} sits at index j * n2 there
        for j in range(an1 - 1):
            for v in range(n2):
                sig[(j, v)] = add(Arrow(psi_off(an - 2) + j * n2 + v, phi_off(j) + v, "sigma", j,
                                        f"sigma{j}[{label_text(Q2.vertices[v])}]", ("sigma", j, v)))
        if an1 >= 2:
            for v in range(n2):
                the[v] = add(Arrow(psi_off(an - 2) + (an1 - 2) * n2 + v, phi_off(an1 - 1) + v, "theta", 0,
                                   f"theta[{label_text(Q2.vertices[v])}]", ("theta", 0, v)))

    # Q^{n-1} records where its psi-copies of Q^{n-2} arrows went
    psi_copy_prev = Q1._psi_copy if n >= 2 else {}

    rels: List[Relation] = []
    for i in range(an - 1):
        for r in I1:
            rels.append(Relation(tuple(psi_copy[(i, k)] for k in r.path),
                                 None if r.other is None else tuple(psi_copy[(i, k)] for k in r.other),
                                 f"psi{i}({r.family})"))
    if n >= 2:
        for j in range(an1):
            for r in I2:
                rels.append(Relation(tuple(phi_copy[(j, k)] for k in r.path),
                                     None if r.other is None else tuple(phi_copy[(j, k)] for k in r.other),
                                     f"phi{j}({r.family})"))
    for i in range(an - 3):
        for v in range(n1):
            rels.append(Relation((lam[(i, v)], lam[(i + 1, v)]), None, "J_lambda_null"))
    for i in range(an - 2):
        for k, ar in enumerate(Q1.arrows):
            rels.append(Relation((lam[(i, ar.source)], psi_copy[(i + 1, k)]),
                                 (psi_copy[(i, k)], lam[(i, ar.target)]), "J_lambda_comm"))
    if an >= 3:
        for (j, v), s in sorted(sig.items()):
            rels.append(Relation((lam[(an - 3, j * n2 + v)], s), None, "J_sigma_null"))
    for (j, v), s in sorted(sig.items()):
        for k, ar in enumerate(Q2.arrows):
            if ar.source != v:
                continue
            inner = psi_copy_prev[(j, k)]
            rels.append(Relation((s, phi_copy[(j, k)]),
                                 (psi_copy[(an - 2, inner)], sig[(j, ar.target)]), "J_sigma_comm"))
    if an >= 3:
        for v, t in sorted(the.items()):
            rels.append(Relation((lam[(an - 3, (an1 - 2) * n2 + v)], t), None, "J_theta_null"))
    for v, t in sorted(the.items()):
        for k, ar in enumerate(Q2.arrows):
            if ar.source != v:
                continue
            inner = psi_copy_prev[(an1 - 2, k)]
            rels.append(Relation((t, phi_copy[(an1 - 1, k)]),
                                 (psi_copy[(an - 2, inner)], the[ar.target]), "J_theta_comm"))

    Q = Quiver(a, vertices, arrows, prev=Q1, prev2=Q2 if n >= 2 else None)
    Q._psi_copy = psi_copy
    out = (Q, RelationSet(rels))
    cache[a] = out
    return out


def build_quiver(exponents: Sequence[int]) -> Tuple[Quiver, RelationSet]:
    a = check_exponents(exponents)
    Q, I = _quiver_rec(a, {})
    for r in I:
        for p in (r.path, r.other):
            if p is not None and not _path_ok(Q, p):
                raise QuiverError(f"ill-typed relation {r.family}")
    return Q, I


# ---------------------------------------------------------------------------
# canonical morphisms


def arrow_morphism(Q: Quiver, k: int, _cache: Optional[Dict] = None) -> MfMorphism:
    """The canonical morphism attached to arrow ``k`` of ``Q``."""
    cache = _cache if _cache is not None else Q.__dict__.setdefault("_morphisms", {})
    if k in cache:
        return cache[k]
    a = Q.exponents
    kind, idx, ref = Q.arrows[k].origin
    if kind == "psi":
        m = psi_i_morphism(arrow_morphism(Q.prev, ref), idx, a)
    elif kind == "phi":
        m = phi_j_morphism(arrow_morphism(Q.prev2, ref), idx, a)
    else:
        if kind == "lambda":
            v = build_collection_level(a[:-1], ref)
            m = canonical_lambda(v, idx, a)
        elif kind == "sigma":
            m = canonical_sigma(build_collection_level(a[:-2], ref), idx, a)
        else:
            m = canonical_theta(build_collection_level(a[:-2], ref), a)
    cache[k] = m
    return m


def build_collection_level(prefix: Tuple[int, ...], v: int):
    from .collection import base_object
    if not prefix:
        return base_object()
    return build_collection(prefix).objects[v].object


def path_morphism(Q: Quiver, path: Sequence[int]) -> MfMorphism:
    m = arrow_morphism(Q, path[0])
    for k in path[1:]:
        m = compose(arrow_morphism(Q, k), m)
    return m


# ---------------------------------------------------------------------------
# irreducible morphisms and verification


def irr(c: Collection, s: int, t: int) -> int:
    """Dimension of Hom(E_s, E_t) modulo composites through the other members."""
    if s == t:
        return 0
    A, B = c.objects[s].object, c.objects[t].object
    hc = hom_computation(A, B)
    if hc.dim == 0:
        return 0
    ech = hc.homotopy.copy()
    base = ech.rank
    for u, mid in enumerate(c.objects):
        if u in (s, t):
            continue
        fs = hom_basis(A, mid.object).basis
        if not fs:
            continue
        gs = hom_basis(mid.object, B).basis
        for f in fs:
            for g in gs:
                ech.add(hc.vector(compose(g, f)))
    return hc.dim - (ech.rank - base)


def _topological_order(nv: int, arrows: Sequence[Tuple[int, int]]) -> List[int]:
    indeg = [0] * nv
    out: Dict[int, List[int]] = {}
    for s, t in arrows:
        indeg[t] += 1
        out.setdefault(s, []).append(t)
    ready = [v for v in range(nv) if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in out.get(v, []):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    if len(order) != nv:
        raise CyclicQuiver("quiver has an oriented cycle")
    return order


def all_paths(nv: int, arrows: Sequence[Tuple[int, int]]) -> List[Tuple[int, Tuple[int, ...]]]:
    """Every path as ``(start vertex, arrow indices)``, trivial paths included."""
    _topological_order(nv, arrows)
    out_arrows: Dict[int, List[int]] = {}
    for k, (s, _) in enumerate(arrows):
        out_arrows.setdefault(s, []).append(k)
    paths = []

    def walk(start, v, seq):
        paths.append((start, tuple(seq)))
        for k in out_arrows.get(v, []):
            seq.append(k)
            walk(start, arrows[k][1], seq)
            seq.pop()

    for v in range(nv):
        walk(v, v, [])
    return paths


def path_algebra_dim(Q: Quiver, I: RelationSet) -> int:
    """``dim kQ/I`` for a finite acyclic quiver, with ``I`` the two-sided ideal of the relations."""
    arrows = [(a.source, a.target) for a in Q.arrows]
    return _path_algebra_dim(len(Q.vertices), arrows, [(r.path, r.other) for r in I])


def _path_algebra_dim(nv, arrows, relations) -> int:
    paths = all_paths(nv, arrows)
    index = {p: k for k, p in enumerate(paths)}
    ending: Dict[int, List[Tuple[int, ...]]] = {}
    starting: Dict[int, List[Tuple[int, ...]]] = {}
    for start, seq in paths:
        end = arrows[seq[-1]][1] if seq else start
        ending.setdefault(end, []).append(seq)
        starting.setdefault(start, []).append(seq)
    ech = Echelon()
    for path, other in relations:
        src = arrows[path[0]][0]
        tgt = arrows[path[-1]][1]
        for pre in ending.get(src, []):
            pre_start = arrows[pre[0]][0] if pre else src
            for post in starting.get(tgt, []):
                v = {}
                v[index[(pre_start, pre + tuple(path) + post)]] = 1
                if other is not None:
                    k = index[(pre_start, pre + tuple(other) + post)]
                    v[k] = v.get(k, 0) - 1
                ech.add(v)
    return len(paths) - ech.rank


def verify_quiver(c: Collection, Q: Quiver, I: RelationSet) -> Report:
    rep = Report("quiver")
    N = len(c.objects)
    if [o.label for o in c.objects] != list(Q.vertices):
        rep.violations.append(Violation("vertices differ from collection", -1, -1, 0, len(Q.vertices), N))
        return rep
    # canonical morphisms have the right ends and are nonzero in the homotopy category
    for k, ar in enumerate(Q.arrows):
        rep.checked += 1
        m = arrow_morphism(Q, k)
        if m.source != c.objects[ar.source].object or m.target != c.objects[ar.target].object:
            rep.violations.append(Violation(f"arrow {ar.name} has wrong endpoints", ar.source, ar.target, 0, 0, None))
        elif is_null_homotopic(m):
            rep.violations.append(Violation(f"arrow {ar.name} is null-homotopic", ar.source, ar.target, 0, 0, None))
    # (a) arrow multiplicities
    for s in range(N):
        for t in range(N):
            rep.checked += 1
            want = irr(c, s, t)
            got = len(Q.arrows_between(s, t))
            if got != want:
                rep.violations.append(Violation("arrow count != irr", s, t, 0, got, want))
    # (b), (c) relations
    for r in I:
        rep.checked += 1
        p = path_morphism(Q, r.path)
        ok = is_null_homotopic(p) if r.is_null else homotopic(p, path_morphism(Q, r.other))
        if not ok:
            rep.violations.append(Violation(f"relation {r.family} fails", Q.arrows[r.path[0]].source,
                                            Q.arrows[r.path[-1]].target, 0, 1, 0))
    # (d) dimension
    rep.checked += 1
    from .hom import hom_dim
    total = sum(hom_dim(A.object, B.object, 0) for A in c.objects for B in c.objects)
    d = path_algebra_dim(Q, I)
    if d != total:
        rep.violations.append(Violation("dim kQ/I != sum of hom dims", -1, -1, 0, d, total))
    return rep


# ---------------------------------------------------------------------------
# export


def export_dot(Q: Quiver) -> str:
    lines = ["digraph Q {", "  rankdir=LR;"]
    for v, lab in enumerate(Q.vertices):
        lines.append(f'  v{v} [label="{label_text(lab)}"];')
    for a in Q.arrows:
        lines.append(f'  v{a.source} -> v{a.target} [label="{a.kind} {a.index}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def quiver_to_dict(Q: Quiver, I: RelationSet) -> dict:
    return {
        "schema": SCHEMA,
        "exponents": list(Q.exponents),
        "vertices": [label_text(v) for v in Q.vertices],
        "labels": [[list(step) for step in v] for v in Q.vertices],
        "arrows": [{"source": a.source, "target": a.target, "kind": a.kind, "index": a.index, "name": a.name}
                   for a in Q.arrows],
        "relations": [{"family": r.family, "type": "null" if r.is_null else "comm",
                       "paths": [list(r.path)] + ([] if r.is_null else [list(r.other)])} for r in I],
    }


def export_json(Q: Quiver, I: RelationSet) -> str:
    return json.dumps(quiver_to_dict(Q, I), indent=2, sort_keys=True) + "\n"


def quiver_from_json(text: str) -> Tuple[Quiver, RelationSet]:
    """Structure only; canonical morphisms are not restored."""
    d = json.loads(text)
    if d.get("schema") != SCHEMA:
        raise QuiverError(f"unsupported schema {d.get('schema')!r}")
    vertices = [tuple((k, i) for k, i in v) for v in d["labels"]]
    arrows = [Arrow(a["source"], a["target"], a["kind"], a["index"], a["name"]) for a in d["arrows"]]
    rels = [Relation(tuple(r["paths"][0]), None if r["type"] == "null" else tuple(r["paths"][1]), r["family"])
            for r in d["relations"]]
    return Quiver(tuple(d["exponents"]), vertices, arrows), RelationSet(rels)
