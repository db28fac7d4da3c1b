"""Exact finite permutation groups stored by full element enumeration.

Permutations are tuples of images of ``0..degree-1`` (one-line notation,
0-indexed; the JSON interchange format is 1-indexed).  Composition is
left-to-right: ``(a*b)(x) = b(a(x))``, so ``x^g = g^-1 * x * g``.

Everything here is capped and exhaustive by design: groups are small
enough that every predicate can be decided by complete enumeration, and
all outputs are canonically ordered (lexicographic on one-line images)
so results are byte-deterministic.
"""

from __future__ import annotations

from typing import Iterable, Optional

Perm = tuple[int, ...]

DEFAULT_GROUP_CAP = 10_000


class GroupError(ValueError):
    """Invalid group-theoretic input."""


class SizeCapExceeded(GroupError):
    """A closure grew past the configured size cap."""


# -- permutation primitives -------------------------------------------------

def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def compose(a: Perm, b: Perm) -> Perm:
    """Apply a, then b."""
    return tuple(b[x] for x in a)


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def conjugate(x: Perm, g: Perm) -> Perm:
    """x^g = g^-1 x g."""
    gi = inverse(g)
    return compose(compose(gi, x), g)


def is_bijection(a: Iterable[int], degree: int) -> bool:
    a = tuple(a)
    return len(a) == degree and sorted(a) == list(range(degree))


def from_cycles(degree: int, *cycles: tuple[int, ...]) -> Perm:
    """Build a permutation from disjoint cycles in 1-indexed points."""
    images = list(range(degree))
    for cyc in cycles:
        for i, pt in enumerate(cyc):
            images[pt - 1] = cyc[(i + 1) % len(cyc)] - 1
    p = tuple(images)
    if not is_bijection(p, degree):
        raise GroupError(f"cycles {cycles!r} are not disjoint on 1..{degree}")
    return p


def perm_order(a: Perm) -> int:
    n = 1
    x = a
    e = identity_perm(len(a))
    while x != e:
        x = compose(x, a)
        n += 1
    return n


def _closure(gens: Iterable[Perm], degree: int, cap: int) -> set[Perm]:
    e = identity_perm(degree)
    seen = {e}
    frontier = [e]
    gens = list(gens)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise SizeCapExceeded(
                            f"closure exceeds cap of {cap} elements")
                    new.append(y)
        frontier = new
    return seen


# -- groups and subgroups ---------------------------------------------------

class FiniteGroup:
    """A finite permutation group with its full element set."""

    __slots__ = ("degree", "generators", "elements", "eset", "identity",
                 "_index")

    def __init__(self, degree: int, generators: Iterable[Perm],
                 max_size: int = DEFAULT_GROUP_CAP):
        if degree < 1:
            raise GroupError("degree must be positive")
        gens = []
        for g in generators:
            g = tuple(g)
            if not is_bijection(g, degree):
                raise GroupError(f"{g!r} is not a permutation of 0..{degree - 1}")
            gens.append(g)
        self.degree = degree
        self.generators = tuple(sorted(set(gens)))
        self.elements: tuple[Perm, ...] = tuple(
            sorted(_closure(gens, degree, max_size)))
        self.eset = frozenset(self.elements)
        self.identity = identity_perm(degree)
        self._index = {x: i for i, x in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.eset

    def index(self, x: Perm) -> int:
        return self._index[x]

    def mul(self, a: Perm, b: Perm) -> Perm:
        return compose(a, b)

    def inv(self, a: Perm) -> Perm:
        return inverse(a)

    def conj(self, x: Perm, g: Perm) -> Perm:
        return conjugate(x, g)

    def subgroup(self, elems: Iterable[Perm], check: bool = True) -> "Subgroup":
        return Subgroup(self, elems, check=check)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, self.elements, check=False)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (self.identity,), check=False)

    # JSON interchange: {"degree": n, "generators": [[1-indexed images], ...]}
    @classmethod
    def from_descriptor(cls, d: dict, max_size: int = DEFAULT_GROUP_CAP) -> "FiniteGroup":
        degree = d["degree"]
        gens = [tuple(i - 1 for i in row) for row in d.get("generators", [])]
        return cls(degree, gens, max_size=max_size)

    def to_descriptor(self) -> dict:
        return {"degree": self.degree,
                "generators": [[i + 1 for i in g] for g in self.generators]}

    def __repr__(self):
        return f"FiniteGroup(degree={self.degree}, order={self.order})"


class Subgroup:
    """A subgroup of a :class:`FiniteGroup`, stored as an explicit subset."""

    __slots__ = ("parent", "elements", "eset")

    def __init__(self, parent: FiniteGroup, elems: Iterable[Perm],
                 check: bool = True):
        elements = tuple(sorted(set(tuple(x) for x in elems)))
        if check:
            for x in elements:
                if x not in parent.eset:
                    raise GroupError(f"{x!r} is not an element of the parent group")
            if parent.identity not in elements:
                raise GroupError("subgroup must contain the identity")
            es = frozenset(elements)
            for a in elements:
                if inverse(a) not in es:
                    raise GroupError(f"subgroup not closed under inversion at {a!r}")
                for b in elements:
                    if compose(a, b) not in es:
                        raise GroupError(
                            f"subgroup not closed under product at {a!r}*{b!r}")
        self.parent = parent
        self.elements = elements
        self.eset = frozenset(elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.eset

    def __le__(self, other: "Subgroup") -> bool:
        return self.eset <= other.eset

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.eset == other.eset \
            and self.parent.degree == other.parent.degree

    def __hash__(self):
        return hash((self.parent.degree, self.eset))

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def group_from_generators(generators: Iterable[Perm], degree: int,
                          max_size: int = DEFAULT_GROUP_CAP) -> FiniteGroup:
    return FiniteGroup(degree, generators, max_size=max_size)


def generated_subgroup(G: FiniteGroup, gens: Iterable[Perm]) -> Subgroup:
    """Closure of ``gens`` inside G (gens must lie in G)."""
    gens = [tuple(g) for g in gens]
    for g in gens:
        if g not in G.eset:
            raise GroupError(f"{g!r} is not an element of the group")
    return Subgroup(G, _closure(gens, G.degree, len(G)), check=False)


# -- subgroup enumeration ---------------------------------------------------

def all_subgroups(G: FiniteGroup, within: Optional[Subgroup] = None,
                  cap: int = DEFAULT_GROUP_CAP) -> list[Subgroup]:
    """Every subgroup of G (or of ``within``), canonically ordered.

    Join-closure of the cyclic subgroups: every subgroup is the join of
    the cyclic subgroups it contains, so iterating pairwise joins from
    the cyclic ones reaches all of them.
    """
    ambient = within.elements if within is not None else G.elements
    if len(ambient) > cap:
        raise SizeCapExceeded(f"subgroup enumeration cap {cap} exceeded")
    e = G.identity

    # cyclic subgroups, each with a single generator
    seeds: dict[frozenset, tuple[Perm, ...]] = {frozenset((e,)): ()}
    for x in ambient:
        cyc = set()
        y = x
        while y not in cyc:
            cyc.add(y)
            y = compose(y, x)
        key = frozenset(cyc)
        if key not in seeds:
            seeds[key] = (x,)

    subs = dict(seeds)
    worklist = list(seeds.items())
    while worklist:
        key_a, gens_a = worklist.pop()
        for key_b, gens_b in list(subs.items()):
            if key_a <= key_b or key_b <= key_a:
                continue
            gens = tuple(sorted(set(gens_a + gens_b)))
            join = frozenset(_closure(gens, G.degree, len(ambient)))
            if join not in subs:
                subs[join] = gens
                worklist.append((join, gens))
    return sorted((Subgroup(G, s, check=False) for s in subs),
                  key=lambda H: (H.order, H.elements))


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, via join-closure of normal closures of elements."""
    closures: set[frozenset] = {frozenset((G.identity,))}
    for x in G.elements:
        cls = {conjugate(x, g) for g in G.elements}
        closures.add(frozenset(_closure(cls, G.degree, len(G))))
    normals = set(closures)
    worklist = list(closures)
    while worklist:
        a = worklist.pop()
        for b in list(normals):
            join = frozenset(_closure(a | b, G.degree, len(G)))
            if join not in normals:
                normals.add(join)
                worklist.append(join)
    return sorted((Subgroup(G, s, check=False) for s in normals),
                  key=lambda H: (H.order, H.elements))


# -- local analysis ---------------------------------------------------------

def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    elems = [g for g in G.elements
             if all(conjugate(h, g) in H.eset for h in H.elements)]
    return Subgroup(G, elems, check=False)


def centralizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    elems = [g for g in G.elements
             if all(conjugate(h, g) == h for h in H.elements)]
    return Subgroup(G, elems, check=False)


def center(H: Subgroup) -> Subgroup:
    elems = [z for z in H.elements
             if all(compose(z, h) == compose(h, z) for h in H.elements)]
    return Subgroup(H.parent, elems, check=False)


def _p_part(n: int, p: int) -> int:
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def is_p_group(H: Subgroup, p: int) -> bool:
    return _p_part(H.order, p) == H.order


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown deterministically by p-element adjunction.

    At each step the canonically least p-element of N_G(P) outside P is
    adjoined; P < Sylow always admits one, so the result is Sylow.
    Returns the trivial subgroup when p does not divide |G|.
    """
    if p < 2 or any(p % d == 0 for d in range(2, p)):
        raise GroupError(f"{p} is not prime")
    P = G.trivial_subgroup()
    while True:
        N = normalizer(G, P)
        x = next((y for y in N.elements
                  if y not in P.eset and _p_part(perm_order(y), p) == perm_order(y)),
                 None)
        if x is None:
            return P
        P = generated_subgroup(G, set(P.elements) | {x})


def p_core(G: FiniteGroup, p: int) -> Subgroup:
    """O_p(G): the intersection of all Sylow p-subgroups."""
    P = sylow_subgroup(G, p)
    core = set(P.eset)
    for g in G.elements:
        core &= {conjugate(x, g) for x in P.elements}
        if len(core) == 1:
            break
    return Subgroup(G, core, check=False)


def is_characteristic_p(G: FiniteGroup, p: int) -> bool:
    """True iff C_G(O_p(G)) <= O_p(G)."""
    Q = p_core(G, p)
    return centralizer(G, Q).eset <= Q.eset


# -- abstract groups via the regular action ---------------------------------

def cayley_group(elements: list, mul) -> tuple[FiniteGroup, dict]:
    """Permutation realization of an abstract group by right multiplication.

    Returns the realized group and the element -> permutation map.
    """
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    to_perm = {x: tuple(idx[mul(e, x)] for e in elements) for x in elements}
    G = FiniteGroup(n, to_perm.values(), max_size=max(n, 1))
    return G, to_perm
