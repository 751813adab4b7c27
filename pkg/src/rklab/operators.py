"""Theory-building operators as transformers on finite structure specs.

Each operator takes a structure spec, adds ground relation tuples
realizing its axiom schemes, and updates the type registry's prime and
limit bookkeeping.  "Infinitely many" in a scheme is rendered as a
configured fan-out of witnesses per required class; the fan-out is
recorded in the application history so the scheme checker re-evaluates
against the same figure.

The limit operators do not materialise relations at all: they emit
identity systems (consumed by the word-congruence engine) plus registry
annotations recording the intended number of limit models over a type
or a sequence, and the fact that the linking relations never
semi-isolate backwards.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .cardinal import CONTINUUM, OMEGA, Card, card_eq, fin, render
from .domination import DomEdge, DominationGraph, TypeNode
from .limitcount import FREE_SYSTEM, IdentitySystem, Schema
from .report import Report, ReportBuilder

Color = int | None  # None is the infinite color


def pnode(pred: str) -> str:
    return f"p({pred})"


def stub_name(pred: str, bits: str) -> str:
    return f"p({pred})[{bits}]"


def joint_name(p1: str, p2: str) -> str:
    return f"q({p1},{p2})"


# -- registry -----------------------------------------------------------------

@dataclass(frozen=True)
class RegNode:
    name: str
    principal: bool = False
    prime: bool = False
    stub_of: str | None = None
    stub_bits: str = ""
    realized: bool = False


@dataclass(frozen=True)
class RegEdge:
    src: str
    dst: str
    label: str
    principal: bool = False


@dataclass(frozen=True)
class Registry:
    nodes: dict[str, RegNode] = field(default_factory=dict)
    edges: tuple[RegEdge, ...] = ()
    limit_targets: dict[str, Card] = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def with_node(self, node: RegNode) -> "Registry":
        nodes = dict(self.nodes)
        nodes[node.name] = node
        return replace(self, nodes=nodes)

    def update_node(self, name: str, **changes) -> "Registry":
        if name not in self.nodes:
            raise KeyError(f"no registry node {name!r}")
        return self.with_node(replace(self.nodes[name], **changes))

    def with_edge(self, edge: RegEdge) -> "Registry":
        if edge in self.edges:
            return self
        return replace(self, edges=self.edges + (edge,))

    def with_target(self, key: str, value: Card) -> "Registry":
        targets = dict(self.limit_targets)
        targets[key] = value
        return replace(self, limit_targets=targets)

    def with_note(self, note: str) -> "Registry":
        return replace(self, notes=self.notes + (note,))

    def stubs_of(self, p: str) -> list[RegNode]:
        return sorted(
            (n for n in self.nodes.values() if n.stub_of == p),
            key=lambda n: n.name,
        )

    def realized_stubs(self) -> list[RegNode]:
        return sorted(
            (n for n in self.nodes.values() if n.stub_of is not None and n.realized),
            key=lambda n: n.name,
        )

    def to_domination_graph(self) -> DominationGraph:
        nodes = tuple(
            TypeNode(n.name, principal=n.principal, prime=n.prime)
            for n in sorted(self.nodes.values(), key=lambda n: n.name)
        )
        edges = tuple(
            DomEdge(e.src, e.dst, e.label, e.principal) for e in self.edges
        )
        return DominationGraph(nodes, edges)


# -- structure specs ----------------------------------------------------------

@dataclass(frozen=True)
class OpRecord:
    op: str
    params: dict[str, object]


@dataclass(frozen=True)
class StructSpec:
    universe: tuple[str, ...]
    unary: dict[str, tuple[str, ...]]
    coloring: dict[str, Color]
    binary: dict[str, tuple[tuple[str, str], ...]]
    ternary: dict[str, tuple[tuple[str, str, str], ...]]
    registry: Registry = field(default_factory=Registry)
    history: tuple[OpRecord, ...] = ()

    def __post_init__(self) -> None:
        known = set(self.universe)
        if len(known) != len(self.universe):
            raise ValueError("duplicate universe elements")
        for pred, extent in self.unary.items():
            for el in extent:
                if el not in known:
                    raise ValueError(f"{pred} contains unknown element {el!r}")
        for el in self.coloring:
            if el not in known:
                raise ValueError(f"coloring mentions unknown element {el!r}")

    def extent(self, pred: str) -> tuple[str, ...]:
        if pred not in self.unary:
            raise KeyError(f"no unary predicate {pred!r}")
        return self.unary[pred]

    def color(self, el: str) -> Color:
        if el not in self.coloring:
            raise KeyError(f"element {el!r} is uncolored")
        return self.coloring[el]


def empty_spec() -> StructSpec:
    return StructSpec((), {}, {}, {}, {})


def colored_base(
    parts: int,
    colors: int,
    per_color: int = 1,
    q_edges: Sequence[tuple[int, int, bool]] = (),
) -> StructSpec:
    """Partitioned colored structure: the common starting point.

    ``parts`` unary predicates partition the universe; each part carries
    every color 0..colors-1 (``per_color`` elements each) plus one
    infinite-color element, whose type is the part's non-principal type.
    ``q_edges`` entries (low, high, principal) link the types of two
    parts so the high type dominates the low one, materialised as a
    color-monotone binary predicate.
    """
    if parts < 1 or colors < 1 or per_color < 1:
        raise ValueError("parts, colors, per_color must be positive")
    universe: list[str] = []
    unary: dict[str, tuple[str, ...]] = {}
    coloring: dict[str, Color] = {}
    registry = Registry()
    for i in range(parts):
        extent: list[str] = []
        for c in range(colors):
            for r in range(per_color):
                el = f"a{i}c{c}" + (f"_{r}" if per_color > 1 else "")
                extent.append(el)
                coloring[el] = c
        el = f"a{i}inf"
        extent.append(el)
        coloring[el] = None
        universe.extend(extent)
        unary[f"P{i}"] = tuple(extent)
        registry = registry.with_node(RegNode(pnode(f"P{i}"), prime=True))
    binary: dict[str, tuple[tuple[str, str], ...]] = {}
    for low, high, principal in q_edges:
        if not (0 <= low < parts and 0 <= high < parts) or low == high:
            raise ValueError(f"bad q edge ({low},{high})")
        qname = f"Q{low}_{high}"
        pairs: list[tuple[str, str]] = []
        for j in range(colors):  # range side color
            for i in range(j, colors):  # domain side color, i >= j
                x = f"a{low}c{i}" + ("_0" if per_color > 1 else "")
                y = f"a{high}c{j}" + ("_0" if per_color > 1 else "")
                pairs.append((x, y))
        pairs.append((f"a{low}inf", f"a{high}inf"))
        binary[qname] = tuple(pairs)
        registry = registry.with_edge(
            RegEdge(pnode(f"P{high}"), pnode(f"P{low}"), qname, principal)
        )
    return StructSpec(tuple(universe), unary, coloring, binary, {}, registry)


def verify_q_order(spec: StructSpec) -> Report:
    """Ground check of the color-monotone link conditions on Q predicates."""
    rb = ReportBuilder("q-order")
    for qname, pairs in sorted(spec.binary.items()):
        if not qname.startswith("Q"):
            continue
        bad = [
            (x, y)
            for x, y in pairs
            if spec.color(x) is not None
            and spec.color(y) is not None
            and spec.color(x) < spec.color(y)
        ]
        rb.check(
            f"{qname}.monotone",
            not bad,
            f"{len(bad)} pairs go up in color" if bad else "",
        )
        rb.check(f"{qname}.nonempty", bool(pairs))
    return rb.done()


# -- sizing helpers -----------------------------------------------------------

def _eff_color(c: Color, depth: int) -> int:
    return depth if c is None else c


def icp_need(spec: StructSpec, sub: str, depth: int, fan_out: int) -> int:
    return sum(
        (2 ** _eff_color(spec.color(x), depth)) * fan_out for x in spec.extent(sub)
    )


def bu_need(spec: StructSpec, sub1: str, sub2: str, depth: int, fan_out: int) -> int:
    total = 0
    for x1 in spec.extent(sub1):
        for x2 in spec.extent(sub2):
            c1, c2 = spec.color(x1), spec.color(x2)
            if c1 is None and c2 is None:
                eff = depth
            else:
                eff = min(c for c in (c1, c2) if c is not None)
            total += (2**eff) * fan_out
    return total


def _check_colored_extent(spec: StructSpec, sub: str, ceiling: int) -> None:
    extent = spec.extent(sub)
    if not extent:
        raise ValueError(f"{sub} has an empty extent")
    colors = [spec.color(x) for x in extent]
    if not any(c is None for c in colors):
        raise ValueError(f"{sub} has no infinite-color element")
    too_deep = [c for c in colors if c is not None and c > ceiling]
    if too_deep:
        raise ValueError(
            f"{sub} carries finite colors above {ceiling}: {sorted(too_deep)}"
        )


# -- the operators ------------------------------------------------------------

def icp(
    spec: StructSpec,
    sub: str,
    fresh_y: int,
    depth: int,
    fan_out: int = 3,
    seed: int = 0,
) -> StructSpec:
    """Continual partition over the designated substructure.

    Splits each colored element's image set into 2^color nonempty
    disjoint blocks (2^depth for the infinite-color element, the
    truncated stand-in for the continuum split), kills the prime model
    over the substructure's non-principal type, and registers one
    continuation stub per depth-length bit string.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    _check_colored_extent(spec, sub, depth)
    need = icp_need(spec, sub, depth, fan_out)
    if fresh_y < need:
        raise ValueError(f"Y of size {fresh_y} cannot honor the splits, need {need}")
    app = len(spec.history)
    ys = [f"Y{app}s{seed}_{k}" for k in range(fresh_y)]
    if set(ys) & set(spec.universe):
        raise ValueError("fresh Y elements collide with the universe")
    rels = [f"{sub}.icp{app}.R{i}" for i in range(depth + 1)]
    tuples: dict[str, list[tuple[str, str]]] = {r: [] for r in rels}
    cursor = 0
    for x in sorted(spec.extent(sub)):
        eff = _eff_color(spec.color(x), depth)
        for block in range(2**eff):
            bits = [(block >> (i - 1)) & 1 for i in range(1, eff + 1)]
            for _ in range(fan_out):
                y = ys[cursor]
                cursor += 1
                tuples[rels[0]].append((x, y))
                for i in range(1, eff + 1):
                    if bits[i - 1]:
                        tuples[rels[i]].append((x, y))
    binary = dict(spec.binary)
    for r in rels:
        binary[r] = tuple(tuples[r])
    p = pnode(sub)
    registry = spec.registry
    if p not in registry.nodes:
        registry = registry.with_node(RegNode(p))
    registry = registry.update_node(p, prime=False)
    for bits in itertools.product("01", repeat=depth):
        b = "".join(bits)
        registry = registry.with_node(
            RegNode(stub_name(sub, b), stub_of=p, stub_bits=b)
        )
    registry = registry.with_note(f"icp on {sub}: no prime model over {p}")
    record = OpRecord(
        "icp",
        {
            "sub": sub,
            "depth": depth,
            "fan_out": fan_out,
            "rels": tuple(rels),
            "ys": tuple(ys),
            "seed": seed,
        },
    )
    return replace(
        spec,
        universe=spec.universe + tuple(ys),
        binary=binary,
        coloring=dict(spec.coloring),
        registry=registry,
        history=spec.history + (record,),
    )


def css(
    spec: StructSpec,
    q_subset: Sequence[str],
    sub: str,
    fan_out: int = 3,
    seed: int = 0,
    linked: bool = False,
) -> StructSpec:
    """Allocation for a countable subset of the continuum of stubs.

    Links the substructure's colored elements to fresh approximation
    witnesses of each selected stub type: a color-i source gets images
    of every color k >= i and none below, per stub.  Restores the prime
    model over the substructure's non-principal type, realizing exactly
    the selected stubs.  With ``linked`` set, the allocation is recorded
    as tied to the type (the downward-ban reading of the same operator).
    """
    if not q_subset:
        raise ValueError("q_subset must be nonempty")
    stubs = []
    for name in q_subset:
        node = spec.registry.nodes.get(name)
        if node is None or node.stub_of is None:
            raise ValueError(f"{name!r} is not a continuation stub")
        stubs.append(node)
    depths = {len(n.stub_bits) for n in stubs}
    if len(depths) != 1:
        raise ValueError("stubs come from different split depths")
    ceiling = depths.pop()
    _check_colored_extent(spec, sub, ceiling)
    app = len(spec.history)
    rels = [f"{sub}.css{app}.R{j}" for j in range(len(stubs))]
    universe = list(spec.universe)
    coloring = dict(spec.coloring)
    tuples: dict[str, list[tuple[str, str]]] = {r: [] for r in rels}
    fresh = 0
    for j, _stub in enumerate(stubs):
        for x in sorted(spec.extent(sub)):
            c = spec.color(x)
            targets: list[Color]
            if c is None:
                targets = [None] * fan_out
            else:
                targets = [k for k in range(c, ceiling + 1) for _ in range(fan_out)]
            for tcol in targets:
                t = f"T{app}s{seed}_{fresh}"
                fresh += 1
                universe.append(t)
                coloring[t] = tcol
                tuples[rels[j]].append((x, t))
    binary = dict(spec.binary)
    for r in rels:
        binary[r] = tuple(tuples[r])
    p = pnode(sub)
    registry = spec.registry
    if p not in registry.nodes:
        registry = registry.with_node(RegNode(p))
    registry = registry.update_node(p, prime=True)
    for node in stubs:
        registry = registry.update_node(node.name, realized=True)
    msg = f"css on {sub}: prime model over {p} realizes exactly {len(stubs)} stubs"
    if linked:
        msg += " (linked: removing a realized stub removes the type)"
    registry = registry.with_note(msg)
    record = OpRecord(
        "css",
        {
            "sub": sub,
            "stubs": tuple(n.name for n in stubs),
            "rels": tuple(rels),
            "ceiling": ceiling,
            "fan_out": fan_out,
            "linked": linked,
            "seed": seed,
        },
    )
    return replace(
        spec,
        universe=tuple(universe),
        coloring=coloring,
        binary=binary,
        registry=registry,
        history=spec.history + (record,),
    )


def bd(
    spec: StructSpec,
    q_subset: Sequence[str],
    sub: str,
    fan_out: int = 3,
    seed: int = 0,
) -> StructSpec:
    """Ban for downward movement: the allocation operator with its output
    tied to the type, under the same input parameters."""
    return css(spec, q_subset, sub, fan_out=fan_out, seed=seed, linked=True)


def bu(
    spec: StructSpec,
    sub1: str,
    sub2: str,
    fresh_z: int,
    depth: int,
    fan_out: int = 3,
    seed: int = 0,
) -> StructSpec:
    """Ban for upward movement between two designated substructures.

    Joint images of element pairs split into 2^min(color, color) blocks
    (2^depth when both colors are infinite); the joint types over both
    non-principal types lose their prime models while the two types
    themselves keep their flags.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    ext1, ext2 = spec.extent(sub1), spec.extent(sub2)
    if set(ext1) & set(ext2):
        raise ValueError(f"{sub1} and {sub2} overlap")
    _check_colored_extent(spec, sub1, depth)
    _check_colored_extent(spec, sub2, depth)
    need = bu_need(spec, sub1, sub2, depth, fan_out)
    if fresh_z < need:
        raise ValueError(f"Z of size {fresh_z} cannot honor the splits, need {need}")
    app = len(spec.history)
    zs = [f"Z{app}s{seed}_{k}" for k in range(fresh_z)]
    if set(zs) & set(spec.universe):
        raise ValueError("fresh Z elements collide with the universe")
    rels = [f"{sub1}*{sub2}.bu{app}.R{i}" for i in range(depth + 1)]
    tuples: dict[str, list[tuple[str, str, str]]] = {r: [] for r in rels}
    cursor = 0
    for x1 in sorted(ext1):
        for x2 in sorted(ext2):
            c1, c2 = spec.color(x1), spec.color(x2)
            if c1 is None and c2 is None:
                eff = depth
            else:
                eff = min(c for c in (c1, c2) if c is not None)
            for block in range(2**eff):
                bits = [(block >> (i - 1)) & 1 for i in range(1, eff + 1)]
                for _ in range(fan_out):
                    z = zs[cursor]
                    cursor += 1
                    tuples[rels[0]].append((x1, x2, z))
                    for i in range(1, eff + 1):
                        if bits[i - 1]:
                            tuples[rels[i]].append((x1, x2, z))
    ternary = dict(spec.ternary)
    for r in rels:
        ternary[r] = tuple(tuples[r])
    p1, p2 = pnode(sub1), pnode(sub2)
    registry = spec.registry
    for p in (p1, p2):
        if p not in registry.nodes:
            registry = registry.with_node(RegNode(p))
    joint = joint_name(p1, p2)
    registry = registry.with_node(RegNode(joint, prime=False))
    registry = registry.with_edge(RegEdge(joint, p1, "x=y1", principal=True))
    registry = registry.with_edge(RegEdge(joint, p2, "x=y2", principal=True))
    registry = registry.with_note(
        f"bu on {sub1},{sub2}: no prime models over joint types {joint}"
    )
    record = OpRecord(
        "bu",
        {
            "sub1": sub1,
            "sub2": sub2,
            "depth": depth,
            "fan_out": fan_out,
            "rels": tuple(rels),
            "zs": tuple(zs),
            "seed": seed,
        },
    )
    return replace(
        spec,
        universe=spec.universe + tuple(zs),
        ternary=ternary,
        registry=registry,
        history=spec.history + (record,),
    )


# -- limit-model operators ----------------------------------------------------

def lmt(p: str, lam: Card, reading: str = "gt") -> IdentitySystem:
    """Identity family sizing the limit models over a single type."""
    if lam.finite:
        n = lam.value
        if n < 1:
            raise ValueError("the finite case needs at least one limit model")
        return IdentitySystem(
            "lmt",
            (
                Schema("single_rename", n),
                Schema("idem_below", n),
                Schema("drop_to_min"),
            ),
            fin(n),
            n=n,
        )
    if lam == OMEGA:
        return IdentitySystem(
            "lmt",
            (Schema("idem_all"), Schema("drop_to_min"), Schema("pair_to_run")),
            OMEGA,
        )
    raise ValueError(f"limit-model count must be in w+1, got {render(lam)}")


def lms(q_len: int, lam: Card, reading: str = "gt") -> IdentitySystem:
    """Identity family sizing the limit models over a domination sequence."""
    if q_len < 1:
        raise ValueError("sequence length must be positive")
    if reading not in ("gt", "geq"):
        raise ValueError("reading must be 'gt' or 'geq'")
    if lam.finite:
        n = lam.value
        if n < 1:
            raise ValueError("the finite case needs at least one limit model")
        return IdentitySystem(
            "lms",
            (Schema("single_rename", n), Schema("ascend_to_power")),
            fin(n),
            n=n,
            seq_len=q_len,
        )
    if lam == OMEGA:
        return IdentitySystem(
            "lms",
            (
                Schema("ascend_to_power"),
                Schema("ascend_to_run"),
                Schema("ascend_to_capped_run"),
            ),
            OMEGA,
            reading=reading,
            seq_len=q_len,
        )
    raise ValueError(f"limit-model count must be in w+1, got {render(lam)}")


def apply_lmt(
    spec: StructSpec, p: str, lam: Card, reading: str = "gt"
) -> tuple[StructSpec, IdentitySystem]:
    """Record the limit target over a type in the registry.

    A continuum target means the extension tree is left free (no
    identities); finite and countable targets carry the corresponding
    identity system.
    """
    if card_eq(lam, CONTINUUM, ch=False):
        system = FREE_SYSTEM
    else:
        system = lmt(p, lam, reading)
    registry = spec.registry
    if p not in registry.nodes:
        registry = registry.with_node(RegNode(p))
    registry = registry.with_target(p, lam)
    registry = registry.with_note(
        f"lmt over {p}: linking relations entail the type and never semi-isolate back"
    )
    record = OpRecord(
        "lmt", {"node": p, "lam": render(lam), "reading": reading}
    )
    return (
        replace(spec, registry=registry, history=spec.history + (record,)),
        system,
    )


def seq_key(nodes: Sequence[str]) -> str:
    return ">".join(nodes)


def apply_lms(
    spec: StructSpec, nodes: Sequence[str], lam: Card, reading: str = "gt"
) -> tuple[StructSpec, IdentitySystem]:
    if not nodes:
        raise ValueError("sequence must be nonempty")
    if card_eq(lam, CONTINUUM, ch=False):
        system = FREE_SYSTEM
    else:
        system = lms(len(nodes), lam, reading)
    registry = spec.registry
    for p in nodes:
        if p not in registry.nodes:
            registry = registry.with_node(RegNode(p))
    key = seq_key(nodes)
    registry = registry.with_target(key, lam)
    registry = registry.with_note(
        f"lms over {key}: linking relations step down the sequence, never semi-isolating back"
    )
    record = OpRecord(
        "lms", {"nodes": tuple(nodes), "lam": render(lam), "reading": reading}
    )
    return (
        replace(spec, registry=registry, history=spec.history + (record,)),
        system,
    )


# -- ground scheme verification -----------------------------------------------

def _pair_index(pairs: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for x, y in pairs:
        out.setdefault(x, set()).add(y)
    return out


def _triple_index(triples: Iterable[tuple[str, str, str]]) -> dict[tuple[str, str], set[str]]:
    out: dict[tuple[str, str], set[str]] = {}
    for x, y, z in triples:
        out.setdefault((x, y), set()).add(z)
    return out


def _verify_icp(spec: StructSpec, rb: ReportBuilder, tag: str, params: Mapping) -> None:
    sub = params["sub"]
    depth = params["depth"]
    fan_out = params["fan_out"]
    rels = params["rels"]
    images = [_pair_index(spec.binary.get(r, ())) for r in rels]
    extent = sorted(spec.extent(sub))

    base_bad: list[str] = []
    split_bad: list[str] = []
    contain_bad: list[str] = []
    for x in extent:
        eff = _eff_color(spec.color(x), depth)
        img0 = images[0].get(x, set())
        if spec.color(x) == 0 and len(img0) < fan_out:
            base_bad.append(f"{x}: base image {len(img0)} < {fan_out}")
        for i in range(1, depth + 1):
            extra = images[i].get(x, set()) - img0
            if extra:
                contain_bad.append(f"{x}: R{i} outside R0 ({len(extra)})")
            if i > eff and images[i].get(x):
                split_bad.append(f"{x}: color {eff} but R{i} nonempty")
        for block in range(2**eff):
            bits = [(block >> (i - 1)) & 1 for i in range(1, eff + 1)]
            part = {
                y
                for y in img0
                if all(
                    (y in images[i].get(x, set())) == bool(bits[i - 1])
                    for i in range(1, eff + 1)
                )
            }
            if len(part) < fan_out:
                split_bad.append(
                    f"{x}: block {bits} has {len(part)} witnesses, need {fan_out}"
                )
    rb.check(f"{tag}.base-images", not base_bad, "; ".join(base_bad[:3]))
    rb.check(f"{tag}.splits", not split_bad, "; ".join(split_bad[:3]))
    rb.check(f"{tag}.containment", not contain_bad, "; ".join(contain_bad[:3]))

    disjoint_bad = []
    for a, b in itertools.combinations(extent, 2):
        if images[0].get(a, set()) & images[0].get(b, set()):
            disjoint_bad.append(f"{a},{b}")
    rb.check(f"{tag}.disjoint-images", not disjoint_bad, "; ".join(disjoint_bad[:3]))


def _verify_css(spec: StructSpec, rb: ReportBuilder, tag: str, params: Mapping) -> None:
    sub = params["sub"]
    ceiling = params["ceiling"]
    fan_out = params["fan_out"]
    rels = params["rels"]
    extent = sorted(spec.extent(sub))
    color_bad: list[str] = []
    disjoint_bad: list[str] = []
    for ri, r in enumerate(rels):
        images = _pair_index(spec.binary.get(r, ()))
        for x in extent:
            c = spec.color(x)
            img = images.get(x, set())
            if c is None:
                if len(img) < fan_out:
                    color_bad.append(f"{x}/R{ri}: {len(img)} images, need {fan_out}")
                continue
            for k in range(c, ceiling + 1):
                hits = sum(1 for y in img if spec.color(y) == k)
                if hits < fan_out:
                    color_bad.append(
                        f"{x}/R{ri}: color {k} has {hits} images, need {fan_out}"
                    )
            low = [y for y in img if spec.color(y) is not None and spec.color(y) < c]
            if low:
                color_bad.append(f"{x}/R{ri}: {len(low)} images below color {c}")
        for a, b in itertools.combinations(extent, 2):
            if images.get(a, set()) & images.get(b, set()):
                disjoint_bad.append(f"{a},{b}/R{ri}")
    rb.check(f"{tag}.color-monotone", not color_bad, "; ".join(color_bad[:3]))
    rb.check(f"{tag}.disjoint-images", not disjoint_bad, "; ".join(disjoint_bad[:3]))


def _verify_bu(spec: StructSpec, rb: ReportBuilder, tag: str, params: Mapping) -> None:
    sub1, sub2 = params["sub1"], params["sub2"]
    depth = params["depth"]
    fan_out = params["fan_out"]
    rels = params["rels"]
    images = [_triple_index(spec.ternary.get(r, ())) for r in rels]
    pairs = [
        (x1, x2) for x1 in sorted(spec.extent(sub1)) for x2 in sorted(spec.extent(sub2))
    ]
    split_bad: list[str] = []
    contain_bad: list[str] = []
    for x1, x2 in pairs:
        c1, c2 = spec.color(x1), spec.color(x2)
        eff = depth if (c1 is None and c2 is None) else min(
            c for c in (c1, c2) if c is not None
        )
        img0 = images[0].get((x1, x2), set())
        for i in range(1, depth + 1):
            extra = images[i].get((x1, x2), set()) - img0
            if extra:
                contain_bad.append(f"({x1},{x2}): R{i} outside R0")
            if i > eff and images[i].get((x1, x2)):
                split_bad.append(f"({x1},{x2}): min color {eff} but R{i} nonempty")
        for block in range(2**eff):
            bits = [(block >> (i - 1)) & 1 for i in range(1, eff + 1)]
            part = {
                z
                for z in img0
                if all(
                    (z in images[i].get((x1, x2), set())) == bool(bits[i - 1])
                    for i in range(1, eff + 1)
                )
            }
            if len(part) < fan_out:
                split_bad.append(
                    f"({x1},{x2}): block {bits} has {len(part)}, need {fan_out}"
                )
    rb.check(f"{tag}.splits", not split_bad, "; ".join(split_bad[:3]))
    rb.check(f"{tag}.containment", not contain_bad, "; ".join(contain_bad[:3]))
    disjoint_bad = []
    for (a1, a2), (b1, b2) in itertools.combinations(pairs, 2):
        if a1 == b1 or a2 == b2:
            continue
        for i, idx in enumerate(images):
            if idx.get((a1, a2), set()) & idx.get((b1, b2), set()):
                disjoint_bad.append(f"({a1},{a2})~({b1},{b2})/R{i}")
    rb.check(f"{tag}.disjoint-images", not disjoint_bad, "; ".join(disjoint_bad[:3]))


def verify_schemes(spec: StructSpec, op_tag: str) -> Report:
    """Re-evaluate every ground instance of the named operator's schemes.

    Checks every recorded application of that operator against the
    current relations; a mutation of the structure shows up as a FAIL
    entry, never an exception.
    """
    if op_tag not in ("icp", "css", "bu"):
        raise ValueError(f"no ground schemes for {op_tag!r}")
    records = [
        (i, rec) for i, rec in enumerate(spec.history) if rec.op == op_tag
    ]
    if not records:
        raise ValueError(f"spec has no recorded {op_tag} application")
    rb = ReportBuilder(f"schemes:{op_tag}")
    for i, rec in records:
        tag = f"app{i}"
        rb.fact(f"{tag}.fan_out", rec.params["fan_out"])
        if op_tag == "icp":
            _verify_icp(spec, rb, tag, rec.params)
        elif op_tag == "css":
            _verify_css(spec, rb, tag, rec.params)
        else:
            _verify_bu(spec, rb, tag, rec.params)
    return rb.done()
