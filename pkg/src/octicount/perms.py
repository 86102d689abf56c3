"""Exact permutation-group engine for small degrees.

Permutations act on {1..degree}.  Groups are given by generators; element
lists, conjugacy data and the subgroup lattice are computed lazily and
cached.  Everything is exact integer arithmetic, sized for groups of order
a few hundred (the largest group this project cares about has order 384).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional

MAX_DEGREE = 24
MAX_ELEMENTS = 10**6
SUBGROUP_ORDER_CAP = 10**4
ISO_DEGREE_CAP = 12


class GroupTooLargeError(ValueError):
    """Raised when an enumeration would exceed a hard size cap."""


class Perm:
    """A permutation of {1..degree}, stored as its tuple of images."""

    __slots__ = ("degree", "images")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        n = len(images)
        if not 1 <= n <= MAX_DEGREE:
            raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {n}")
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {images}")
        object.__setattr__(self, "degree", n)
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Iterable[int]]) -> "Perm":
        images = list(range(1, degree + 1))
        for cycle in cycles:
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if not 1 <= a <= degree:
                    raise ValueError(f"point {a} outside 1..{degree}")
                images[a - 1] = b
        return cls(images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        # (p * q)(x) = p(q(x))
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        imgs = self.images
        return Perm(imgs[i - 1] for i in other.images)

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, y in enumerate(self.images):
            inv[y - 1] = i + 1
        return Perm(inv)

    def conjugate_by(self, g: "Perm") -> "Perm":
        """g * self * g^-1"""
        return g * self * g.inverse()

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for start in range(1, self.degree + 1):
            if seen[start - 1]:
                continue
            cyc = [start]
            seen[start - 1] = True
            x = self(start)
            while x != start:
                cyc.append(x)
                seen[x - 1] = True
                x = self(x)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Cycle lengths, fixed points included, sorted descending."""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def orbit_count(self) -> int:
        return len(self.cycles(include_fixed=True))

    @property
    def index(self) -> int:
        """degree minus the number of orbits; drives tame discriminant valuations."""
        return self.degree - self.orbit_count()

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def is_even(self) -> bool:
        return self.index % 2 == 0

    def is_identity(self) -> bool:
        return all(self.images[i] == i + 1 for i in range(self.degree))

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        # rotate each cycle to start at its minimum, sort cycles by first point
        norm = []
        for cyc in cycs:
            k = cyc.index(min(cyc))
            norm.append(cyc[k:] + cyc[:k])
        norm.sort()
        return "".join("(" + ",".join(map(str, c)) + ")" for c in norm)

    def __repr__(self) -> str:
        return f"Perm{self.degree}[{self.cycle_string()}]"


def parse_cycle_string(degree: int, text: str) -> Perm:
    """Inverse of Perm.cycle_string, e.g. "(1,2)(3,4)" -> a Perm."""
    text = text.strip()
    if text in ("()", ""):
        return Perm.identity(degree)
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycles = []
    for chunk in text[1:-1].split(")("):
        cycles.append([int(tok) for tok in chunk.split(",")])
    return Perm.from_cycles(degree, cycles)


def perm_index(g: Perm) -> int:
    """ind(g) = degree minus the number of orbits of <g> on the points."""
    return g.index


class PermGroup:
    """Group generated by permutations of a common degree.

    Immutable; the element list, order and conjugacy classes are computed
    once on first use.  Equality is equality of element sets.
    """

    def __init__(self, generators: Iterable[Perm], degree: Optional[int] = None):
        gens = tuple(generators)
        if not gens:
            if degree is None:
                raise ValueError("need generators or an explicit degree")
            gens = (Perm.identity(degree),)
        if degree is None:
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("generators must share one degree")
        self.degree = degree
        self.generators = gens

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls((), degree=degree)

    @classmethod
    def symmetric(cls, degree: int) -> "PermGroup":
        if degree == 1:
            return cls.trivial(1)
        gens = [Perm.from_cycles(degree, [(1, 2)])]
        if degree > 2:
            gens.append(Perm.from_cycles(degree, [tuple(range(1, degree + 1))]))
        return cls(gens)

    @cached_property
    def elements(self) -> frozenset[Perm]:
        ident = Perm.identity(self.degree)
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = x * g
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
                        if len(elems) > MAX_ELEMENTS:
                            raise GroupTooLargeError(
                                f"group exceeds {MAX_ELEMENTS} elements"
                            )
            frontier = nxt
        return frozenset(elems)

    @cached_property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g: Perm) -> bool:
        return g.degree == self.degree and g in self.elements

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def __repr__(self) -> str:
        gens = " ".join(g.cycle_string() for g in self.generators)
        return f"PermGroup(degree={self.degree}, <{gens}>)"

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements

    def is_normal_in(self, other: "PermGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        elems = self.elements
        return all(
            g * h * g.inverse() in elems for g in other.generators for h in self.generators
        )

    def orbit(self, point: int) -> frozenset[int]:
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = g(x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def orbits(self) -> list[frozenset[int]]:
        remaining = set(range(1, self.degree + 1))
        out = []
        while remaining:
            orb = self.orbit(min(remaining))
            out.append(orb)
            remaining -= orb
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.degree

    @cached_property
    def conjugacy_classes(self) -> list[frozenset[Perm]]:
        """Conjugacy classes of elements, ordered by (min cycle type, size)."""
        elems = self.elements
        remaining = set(elems)
        classes = []
        while remaining:
            x = next(iter(remaining))
            cls = frozenset(g * x * g.inverse() for g in elems)
            classes.append(cls)
            remaining -= cls
        classes.sort(key=lambda c: (sorted(p.cycle_type() for p in c)[0], len(c)))
        return classes

    def stabilizer(self, point: int) -> "PermGroup":
        """Point stabilizer, by element scan (fine at this scale)."""
        elems = [g for g in self.elements if g(point) == point]
        return PermGroup(elems, degree=self.degree)

    def normalizer(self, sub: "PermGroup") -> "PermGroup":
        subset = sub.elements
        elems = [
            g
            for g in self.elements
            if all(g * h * g.inverse() in subset for h in sub.generators)
        ]
        return PermGroup(elems, degree=self.degree)

    def normal_core(self, sub: "PermGroup") -> "PermGroup":
        """Largest normal subgroup of self contained in sub."""
        core = set(sub.elements)
        for g in self.elements:
            ginv = g.inverse()
            core &= {g * h * ginv for h in sub.elements}
            if len(core) == 1:
                break
        return PermGroup(list(core), degree=self.degree)

    def conjugate(self, g: Perm) -> "PermGroup":
        ginv = g.inverse()
        return PermGroup([g * h * ginv for h in self.generators], degree=self.degree)

    def schreier_order(self) -> int:
        """Order via an orbit-stabilizer chain, independent of element listing."""
        return _stabilizer_chain_order([list(g.images) for g in self.generators], self.degree)

    def element_orders(self) -> set[int]:
        return {g.order() for g in self.elements}

    def canonical_text(self) -> str:
        """Canonical serialization: degree, then sorted generator cycle strings."""
        gens = sorted(g.cycle_string() for g in self.generators)
        return f"{self.degree}: " + " ".join(gens)

    @classmethod
    def from_canonical_text(cls, text: str) -> "PermGroup":
        head, _, body = text.partition(":")
        degree = int(head.strip())
        gens = [parse_cycle_string(degree, tok) for tok in body.split()]
        return cls(gens, degree=degree)


def _stabilizer_chain_order(gen_images: list[list[int]], degree: int) -> int:
    """Product of orbit sizes along a stabilizer chain (Schreier-Sims, naive)."""
    gens = [tuple(g) for g in gen_images]
    order = 1
    base_domain = list(range(degree))
    for b in base_domain:
        gens = [g for g in gens if len(g) == degree]
        moved = [g for g in gens if any(g[i] != i + 1 for i in range(b, degree))]
        if not moved:
            break
        # orbit of b+1 with transversal
        orbit = {b + 1: tuple(range(1, degree + 1))}
        frontier = [b + 1]
        while frontier:
            nxt = []
            for x in frontier:
                t = orbit[x]
                for g in gens:
                    y = g[x - 1]
                    if y not in orbit:
                        orbit[y] = tuple(g[t[i] - 1] for i in range(degree))
                        nxt.append(y)
            frontier = nxt
        order *= len(orbit)
        # Schreier generators for the stabilizer of b+1
        inv = {}
        for y, t in orbit.items():
            ti = [0] * degree
            for i, v in enumerate(t):
                ti[v - 1] = i + 1
            inv[y] = tuple(ti)
        sgens = set()
        for y, t in orbit.items():
            for g in gens:
                gy = g[y - 1]
                u = inv[gy]
                # u * g * t
                comp = tuple(u[g[t[i] - 1] - 1] for i in range(degree))
                if any(comp[i] != i + 1 for i in range(degree)):
                    sgens.add(comp)
        gens = list(sgens)
        if not gens:
            break
    return order


# ---------------------------------------------------------------------------
# Malle invariants


def malle_alpha(G: PermGroup) -> Fraction:
    """1 / min{ind(g) : g in G, g != e}, as an exact rational."""
    indices = [g.index for g in G.elements if not g.is_identity()]
    if not indices:
        raise ValueError("no nonidentity element")
    return Fraction(1, min(indices))


def index_set(G: PermGroup) -> set[int]:
    return {g.index for g in G.elements if not g.is_identity()}


def cyclic_subgroup_orders(G: PermGroup) -> set[int]:
    return {g.order() for g in G.elements}


def wreath_c2_s4() -> PermGroup:
    """The imprimitive wreath product on 8 points, blocks {1,2},{3,4},{5,6},{7,8}.

    Generators: the four block flips plus lifts of S4 generators permuting
    the blocks.
    """
    flips = [Perm.from_cycles(8, [(2 * i + 1, 2 * i + 2)]) for i in range(4)]
    swap_blocks = Perm.from_cycles(8, [(1, 3), (2, 4)])  # lift of (1 2)
    cycle_blocks = Perm.from_cycles(8, [(1, 3, 5, 7), (2, 4, 6, 8)])  # lift of (1 2 3 4)
    return PermGroup(flips + [swap_blocks, cycle_blocks])


# ---------------------------------------------------------------------------
# Fast indexed context for subgroup computations

class _Ctx:
    """Element-indexed view of a group: multiplication by integer indices."""

    def __init__(self, G: PermGroup):
        self.G = G
        self.elems: list[Perm] = sorted(G.elements, key=lambda p: p.images)
        self.idx = {p: i for i, p in enumerate(self.elems)}
        self.n = len(self.elems)
        self.e = self.idx[G.identity]
        self.inv = [self.idx[p.inverse()] for p in self.elems]
        self._table: Optional[list[list[int]]] = None
        if self.n <= 2048:
            idx = self.idx
            self._table = [
                [idx[a * b] for b in self.elems] for a in self.elems
            ]

    def mul(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        return self.idx[self.elems[i] * self.elems[j]]

    def conj(self, i: int, g: int) -> int:
        """g * i * g^-1"""
        return self.mul(self.mul(g, i), self.inv[g])

    def cyclic(self, i: int) -> frozenset[int]:
        out = [self.e]
        x = i
        while x != self.e:
            out.append(x)
            x = self.mul(x, i)
        return frozenset(out)

    def close(self, base: frozenset[int], gens: tuple[int, ...]) -> frozenset[int]:
        """Subgroup generated by a closed subgroup `base` and extra `gens`.

        Coset enumeration: the result is a union of right cosets of base.
        """
        elems = set(base)
        mul = self.mul
        base_list = list(base)
        queue = [self.e]
        while queue:
            t = queue.pop()
            for g in gens:
                u = mul(t, g)
                if u not in elems:
                    elems.update(mul(h, u) for h in base_list)
                    queue.append(u)
        return frozenset(elems)

    def subgroup(self, members: frozenset[int]) -> PermGroup:
        return PermGroup([self.elems[i] for i in members], degree=self.G.degree)


@dataclass(frozen=True)
class SubgroupClass:
    """One conjugacy class of subgroups of `ambient`."""

    representative: PermGroup
    class_size: int
    ambient: PermGroup

    @property
    def order(self) -> int:
        return self.representative.order


@lru_cache(maxsize=64)
def subgroup_classes(G: PermGroup) -> tuple[SubgroupClass, ...]:
    """All subgroups of G up to G-conjugacy, by iterative cyclic extension.

    Start with the cyclic subgroups; repeatedly join class representatives
    with cyclic subgroups and dedup by element set.  Exact and fast enough
    for |G| <= a few hundred.  Results are cached per group (groups are
    immutable and hash by element set).
    """
    if G.order > SUBGROUP_ORDER_CAP:
        raise GroupTooLargeError(f"subgroup lattice capped at order {SUBGROUP_ORDER_CAP}")
    ctx = _Ctx(G)
    all_idx = range(ctx.n)

    cyclics: dict[frozenset[int], int] = {}
    for i in all_idx:
        cyclics.setdefault(ctx.cyclic(i), i)

    seen: dict[frozenset[int], int] = {}
    reps: list[frozenset[int]] = []
    rep_gens: list[tuple[int, ...]] = []
    class_sizes: list[int] = []

    def add_class(members: frozenset[int], gens: tuple[int, ...]) -> bool:
        if members in seen:
            return False
        cid = len(reps)
        orbit = {members}
        for g in all_idx:
            conj = frozenset(ctx.conj(i, g) for i in members)
            orbit.add(conj)
        for s in orbit:
            seen[s] = cid
        reps.append(members)
        rep_gens.append(gens)
        class_sizes.append(len(orbit))
        return True

    add_class(frozenset([ctx.e]), ())
    for members, gen in sorted(cyclics.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
        add_class(members, (gen,))

    cursor = 0
    cyclic_items = sorted(cyclics.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    while cursor < len(reps):
        members = reps[cursor]
        gens = rep_gens[cursor]
        for cyc, cgen in cyclic_items:
            if cyc <= members:
                continue
            joined = ctx.close(members, gens + (cgen,))
            add_class(joined, gens + (cgen,))
        cursor += 1

    out = [
        SubgroupClass(ctx.subgroup(reps[i]), class_sizes[i], G)
        for i in range(len(reps))
    ]
    out.sort(
        key=lambda c: (
            c.order,
            sorted(p.images for p in c.representative.elements),
        )
    )
    return tuple(out)


def all_subgroups(G: PermGroup) -> list[PermGroup]:
    """Every subgroup of G (not up to conjugacy).  Brute expansion of classes."""
    ctx = _Ctx(G)
    out_sets: set[frozenset[int]] = set()
    for cls in subgroup_classes(G):
        members = frozenset(ctx.idx[p] for p in cls.representative.elements)
        for g in range(ctx.n):
            out_sets.add(frozenset(ctx.conj(i, g) for i in members))
    return [ctx.subgroup(s) for s in sorted(out_sets, key=lambda s: (len(s), sorted(s)))]


def normal_subgroups(G: PermGroup, max_order: Optional[int] = None) -> list[PermGroup]:
    """Normal subgroups of G with order <= max_order (default: all).

    A normal subgroup is a join of element conjugacy classes; BFS over
    class joins, pruned by the order bound.
    """
    cap = max_order if max_order is not None else G.order
    ctx = _Ctx(G)
    classes = []
    for cls in G.conjugacy_classes:
        classes.append(frozenset(ctx.idx[p] for p in cls))
    found: set[frozenset[int]] = set()
    trivial = frozenset([ctx.e])
    found.add(trivial)
    queue = [trivial]
    while queue:
        cur = queue.pop()
        for cls in classes:
            if cls <= cur:
                continue
            if len(cur) + len(cls) > cap:
                continue
            gens = tuple(cls)
            joined = ctx.close(cur, gens)
            if len(joined) <= cap and joined not in found:
                found.add(joined)
                queue.append(joined)
    return [ctx.subgroup(s) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


# ---------------------------------------------------------------------------
# Coset actions and quotients


@dataclass(frozen=True)
class CosetAction:
    """Transitive action of `group` on the left cosets of `point_stabilizer`."""

    group: PermGroup
    point_stabilizer: PermGroup
    induced_degree: int
    _coset_of: dict  # Perm -> coset index (1-based)
    _reps: tuple     # coset representatives, reps[0] = identity

    def act(self, g: Perm) -> Perm:
        """Image of g as a permutation of the coset space."""
        if g not in self.group:
            raise ValueError("element not in the acting group")
        coset_of = self._coset_of
        return Perm(coset_of[g * r] for r in self._reps)

    def image(self) -> PermGroup:
        return PermGroup(
            [self.act(g) for g in self.group.generators], degree=self.induced_degree
        )

    def kernel(self) -> PermGroup:
        ident = Perm.identity(self.induced_degree)
        elems = [g for g in self.group.elements if self.act(g) == ident]
        return PermGroup(elems, degree=self.group.degree)


def coset_action(G: PermGroup, H: PermGroup, max_index: int = 24) -> CosetAction:
    """Action of G on the left cosets gH."""
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    index = G.order // H.order
    if index > max_index:
        raise GroupTooLargeError(f"coset index {index} exceeds cap {max_index}")
    h_elems = list(H.elements)
    coset_of: dict[Perm, int] = {}
    reps = []
    for h in h_elems:
        coset_of[h] = 1
    reps.append(G.identity)
    queue = [G.identity]
    while queue:
        r = queue.pop(0)
        for g in G.generators:
            x = g * r
            if x not in coset_of:
                k = len(reps) + 1
                for h in h_elems:
                    coset_of[x * h] = k
                reps.append(x)
                queue.append(x)
    assert len(reps) == index
    return CosetAction(G, H, index, coset_of, tuple(reps))


def quotient_as_perm(G: PermGroup, N: PermGroup) -> PermGroup:
    """G/N as a permutation group via the regular action on cosets of N."""
    if not N.is_normal_in(G):
        raise ValueError("N is not normal in G")
    q = G.order // N.order
    if q == 1:
        return PermGroup.trivial(1)
    action = coset_action(G, N, max_index=max(q, 24))
    return action.image()


# ---------------------------------------------------------------------------
# Isomorphism testing


def _centralizer_order_in_sym(cycle_type: tuple[int, ...]) -> int:
    from collections import Counter
    from math import factorial

    out = 1
    for length, mult in Counter(cycle_type).items():
        out *= length**mult * factorial(mult)
    return out


def _conjugators(g: Perm, b: Perm) -> Iterable[Perm]:
    """All c in S_degree with c g c^-1 = b.

    Such c are exactly the maps sending the cycles of g onto same-length
    cycles of b, with arbitrary cycle matching and rotation; there are
    |centralizer(g)| of them.
    """
    from collections import defaultdict

    n = g.degree
    by_len_g: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    by_len_b: dict[int, list[tuple[int, ...]]] = defaultdict(list)
    for cyc in g.cycles(include_fixed=True):
        by_len_g[len(cyc)].append(cyc)
    for cyc in b.cycles(include_fixed=True):
        by_len_b[len(cyc)].append(cyc)
    lengths = sorted(by_len_g)

    def assignments(k: int, mapping: list[int]):
        if k == len(lengths):
            yield tuple(mapping)
            return
        length = lengths[k]
        gcycs = by_len_g[length]
        for perm_b in itertools.permutations(by_len_b[length]):
            for rots in itertools.product(range(length), repeat=len(gcycs)):
                m = list(mapping)
                for gc, bc, r in zip(gcycs, perm_b, rots):
                    for i, x in enumerate(gc):
                        m[x - 1] = bc[(i + r) % length]
                yield from assignments(k + 1, m)

    for m in assignments(0, [0] * n):
        yield Perm(m)


def perm_isomorphic(A: PermGroup, B: PermGroup) -> Optional[Perm]:
    """Search for c with c A c^-1 = B; None when no conjugator exists.

    Invariant prefilters (order, cycle-type census, transitivity), then
    exact enumeration of the conjugators of one well-chosen generator.
    The returned witness is re-verified before being handed back.
    """
    if A.degree != B.degree:
        raise ValueError("degrees differ")
    n = A.degree
    if n > ISO_DEGREE_CAP:
        raise GroupTooLargeError(f"degree capped at {ISO_DEGREE_CAP}")
    if A.order != B.order:
        return None
    census_a = sorted(p.cycle_type() for p in A.elements)
    census_b = sorted(p.cycle_type() for p in B.elements)
    if census_a != census_b:
        return None
    if sorted(map(len, A.orbits())) != sorted(map(len, B.orbits())):
        return None

    gens = sorted(
        A.generators, key=lambda g: _centralizer_order_in_sym(g.cycle_type())
    )
    b_set = B.elements
    if gens[0].is_identity():
        # A (hence B) is trivial; any permutation conjugates
        return Perm.identity(n)
    g1 = gens[0]
    rest = gens[1:]
    t1 = g1.cycle_type()
    for b1 in sorted(b_set, key=lambda p: p.images):
        if b1.cycle_type() != t1:
            continue
        for c in _conjugators(g1, b1):
            cinv = c.inverse()
            if all(c * g * cinv in b_set for g in rest):
                # verify the full witness, never trust the search
                assert all(c * g * cinv in b_set for g in A.generators)
                return c
    return None


def small_generating_set(G: PermGroup) -> list[Perm]:
    """Greedy small generating set, highest element orders first."""
    elems = sorted(G.elements, key=lambda p: (-p.order(), p.images))
    gens: list[Perm] = []
    span = {G.identity}
    for p in elems:
        if p in span:
            continue
        gens.append(p)
        span = set(PermGroup(gens, degree=G.degree).elements)
        if len(span) == G.order:
            break
    return gens or [G.identity]


def abstract_isomorphic(A: PermGroup, B: PermGroup) -> bool:
    """Abstract group isomorphism, by generator-image backtracking.

    Degrees may differ.  A candidate image assignment is extended to the
    whole group by closure; any multiplication conflict rejects it.
    """
    if A.order != B.order:
        return False
    if sorted(g.order() for g in A.elements) != sorted(g.order() for g in B.elements):
        return False
    gens = small_generating_set(A)
    b_elems = sorted(B.elements, key=lambda p: p.images)

    def extend(images: list[Perm]) -> bool:
        # build the map <gens> -> B by breadth-first closure
        phi = {A.identity: B.identity}
        frontier = [A.identity]
        while frontier:
            nxt = []
            for a in frontier:
                fa = phi[a]
                for g, fg in zip(gens, images):
                    ag = a * g
                    fag = fa * fg
                    if ag in phi:
                        if phi[ag] != fag:
                            return False
                    else:
                        phi[ag] = fag
                        nxt.append(ag)
            frontier = nxt
        return len(phi) == A.order and len(set(phi.values())) == A.order

    def backtrack(k: int, images: list[Perm]) -> bool:
        if k == len(gens):
            return extend(images)
        want = gens[k].order()
        for b in b_elems:
            if b.order() != want:
                continue
            if backtrack(k + 1, images + [b]):
                return True
        return False

    return backtrack(0, [])
