"""Permutation-group machinery: orbits with words, stabilizer chains,
membership, double-coset closure and a Jordan-type alternating certificate.

All routines are deterministic. Generators are applied in the order given and
BFS queues are FIFO, so words and iteration orders are reproducible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .perm import DTYPE, Permutation, compose, cycle_lengths, is_even, power

DEFAULT_BSGS_DEGREE_CAP = 256
DEFAULT_CLOSURE_CAP = 1 << 20

MASK64 = (1 << 64) - 1


class DegreeCapError(ValueError):
    """The stabilizer chain would exceed the configured degree cap."""


class ClosureCapError(RuntimeError):
    """A closure grew past its configured element cap."""


class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood): 64-bit state, Weyl increment
    0x9E3779B97F4A7C15 followed by two xor-shift-multiply mixing rounds."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """Uniform integer in [0, k) by rejection."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            r = self.next_u64()
            if r < limit:
                return r % k


@dataclass
class GeneratedGroup:
    """A permutation group given by labelled generators."""

    generators: list[Permutation]
    labels: list[str] | None = None

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a generated group needs at least one generator")
        n = self.generators[0].degree
        for g in self.generators:
            if g.degree != n:
                raise ValueError("generators have different degrees")
            if g.is_identity():
                raise ValueError("identity generators must be filtered out by the caller")
        if self.labels is None:
            self.labels = [f"g{i}" for i in range(len(self.generators))]
        if len(self.labels) != len(self.generators):
            raise ValueError("one label per generator is required")

    @property
    def degree(self) -> int:
        return self.generators[0].degree

    def tables(self) -> list[list[int]]:
        return [g.tolist() for g in self.generators]

    def evaluate(self, word: Sequence[str]) -> Permutation:
        """The permutation of a left-to-right word over the labels."""
        lookup = dict(zip(self.labels, self.generators))
        arr = np.arange(self.degree, dtype=DTYPE)
        for w in word:
            arr = lookup[w].images[arr]
        return Permutation._wrap(arr)

    def apply_word(self, point: int, word: Sequence[str]) -> int:
        lookup = dict(zip(self.labels, self.generators))
        for w in word:
            point = lookup[w](point)
        return point


# Orbits and words -----------------------------------------------------------


@dataclass
class Orbit:
    points: list[int]
    words: dict[int, tuple[str, ...]] | None = None

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: int) -> bool:
        return p in set(self.points)


def orbit(group: GeneratedGroup, point: int, track_words: bool = False) -> Orbit:
    if not 0 <= point < group.degree:
        raise ValueError("point out of range")
    tables = group.tables()
    seen = {point}
    order = [point]
    words = {point: ()} if track_words else None
    queue = deque([point])
    while queue:
        p = queue.popleft()
        for label, t in zip(group.labels, tables):
            q = t[p]
            if q not in seen:
                seen.add(q)
                order.append(q)
                queue.append(q)
                if words is not None:
                    words[q] = words[p] + (label,)
    return Orbit(order, words)


def find_word(group: GeneratedGroup, from_point: int, to_point: int) -> tuple[str, ...] | None:
    """A shortest word taking ``from_point`` to ``to_point``, or ``None`` when
    the target is not in the orbit."""
    if from_point == to_point:
        return ()
    tables = group.tables()
    parent: dict[int, tuple[int, str]] = {from_point: (-1, "")}
    queue = deque([from_point])
    while queue:
        p = queue.popleft()
        for label, t in zip(group.labels, tables):
            q = t[p]
            if q in parent:
                continue
            parent[q] = (p, label)
            if q == to_point:
                word = []
                while q != from_point:
                    q, lab = parent[q]
                    word.append(lab)
                return tuple(reversed(word))
            queue.append(q)
    return None


def words_to(group: GeneratedGroup, target: int) -> dict[int, tuple[str, ...]]:
    """Shortest words from every point of the target's orbit to ``target``.

    One backward BFS over the inverse generators; ``words[p]`` maps ``p`` to
    ``target`` when applied left to right.
    """
    inv_tables = []
    for g in group.generators:
        inv = np.empty_like(g.images)
        inv[g.images] = np.arange(group.degree, dtype=DTYPE)
        inv_tables.append(inv.tolist())
    words: dict[int, tuple[str, ...]] = {target: ()}
    queue = deque([target])
    while queue:
        p = queue.popleft()
        for label, t in zip(group.labels, inv_tables):
            q = t[p]
            if q not in words:
                words[q] = (label,) + words[p]
                queue.append(q)
    return words


# Stabilizer chains ----------------------------------------------------------


@dataclass
class _Level:
    base_point: int
    gens: list[np.ndarray] = field(default_factory=list)
    # point -> (u, u^-1) with base_point^u == point
    transversal: dict[int, tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)
    orbit: list[int] = field(default_factory=list)


@dataclass
class StabilizerChain:
    """Base, strong generators and full-table transversals with the exact order."""

    degree: int
    levels: list[_Level]
    strong_generators: list[Permutation]
    order_bound: int
    schreier_generators_sifted: int = 0

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]

    @property
    def transversal_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    @property
    def order(self) -> int:
        return math.prod(self.transversal_sizes)

    def sift(self, p: Permutation) -> tuple[Permutation, int]:
        if p.degree != self.degree:
            raise ValueError(f"degree mismatch: {p.degree} != {self.degree}")
        arr, level = _sift(self.levels, p.images, 0)
        return Permutation._wrap(arr.copy()), level

    def __contains__(self, p: Permutation) -> bool:
        return membership(self, p)


def _sift(levels: list[_Level], g: np.ndarray, start: int) -> tuple[np.ndarray, int]:
    for li in range(start, len(levels)):
        lv = levels[li]
        t = lv.transversal.get(int(g[lv.base_point]))
        if t is None:
            return g, li
        g = t[1][g]
    return g, len(levels)


def _order_upper_bound(gens: list[np.ndarray], n: int) -> int:
    """|G| <= prod over orbits of |orbit|!, halved when every generator is even
    and some orbit is nontrivial."""
    tables = [g.tolist() for g in gens]
    seen = bytearray(n)
    bound = 1
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        stack = [start]
        size = 0
        while stack:
            p = stack.pop()
            size += 1
            for t in tables:
                q = t[p]
                if not seen[q]:
                    seen[q] = 1
                    stack.append(q)
        bound *= math.factorial(size)
    if bound > 1 and all(is_even(Permutation._wrap(g.copy())) for g in gens):
        bound //= 2
    return bound


def schreier_sims(group: GeneratedGroup, *, degree_cap: int = DEFAULT_BSGS_DEGREE_CAP) -> StabilizerChain:
    """Deterministic Schreier-Sims.

    Schreier generators are processed depth-first (newest first). The product
    of basic orbit lengths is always a lower bound for |G|; once it meets the
    a priori upper bound (orbit factorials, halved for even generators) the
    chain is complete and the remaining Schreier generators are skipped.
    Otherwise every Schreier generator is sifted, which is the classical
    completeness criterion. Base points are chosen greedily as the first point
    moved by the element that needs a new level.
    """
    n = group.degree
    if n > degree_cap:
        raise DegreeCapError(
            f"degree {n} exceeds the stabilizer-chain cap {degree_cap}; "
            "use alternating_certificate for large degrees"
        )
    ident = np.arange(n, dtype=DTYPE)
    gens = [np.array(g.images) for g in group.generators]
    bound = _order_upper_bound(gens, n)
    levels: list[_Level] = []
    strong: list[np.ndarray] = []
    pending: list[deque] = []  # per level, FIFO
    sifted = 0

    def extend_orbit(li: int, new_gen: np.ndarray) -> None:
        lv = levels[li]
        fresh = []
        for p in lv.orbit:
            pending[li].append((p, new_gen))
        for p in list(lv.orbit):
            q = int(new_gen[p])
            if q not in lv.transversal:
                _add_point(lv, q, new_gen[lv.transversal[p][0]], fresh)
        i = 0
        while i < len(fresh):
            p = fresh[i]
            i += 1
            u = lv.transversal[p][0]
            for s in lv.gens:
                q = int(s[p])
                if q not in lv.transversal:
                    _add_point(lv, q, s[u], fresh)
                else:
                    pending[li].append((p, s))

    def insert(g: np.ndarray, start: int) -> bool:
        residue, j = _sift(levels, g, start)
        if j == len(levels):
            moved = np.flatnonzero(residue != ident)
            if moved.size == 0:
                return False
            bp = int(moved[0])
            levels.append(_Level(bp, [], {bp: (ident, ident)}, [bp]))
            pending.append(deque())
        residue = residue.copy()
        strong.append(residue)
        for li in range(start, j + 1):
            levels[li].gens.append(residue)
            extend_orbit(li, residue)
        return True

    def complete() -> bool:
        return math.prod(len(lv.orbit) for lv in levels) == bound

    for g in gens:
        insert(g, 0)
        if complete():
            break
    while not complete():
        li = next((i for i, q in enumerate(pending) if q), None)
        if li is None:
            break
        p, s = pending[li].popleft()
        lv = levels[li]
        u = lv.transversal[p][0]
        q = int(s[p])
        uq_inv = lv.transversal[q][1]
        schreier = uq_inv[s[u]]
        sifted += 1
        insert(schreier, li + 1)

    return StabilizerChain(
        degree=n,
        levels=levels,
        strong_generators=[Permutation._wrap(s.copy()) for s in strong],
        order_bound=bound,
        schreier_generators_sifted=sifted,
    )


def _add_point(lv: _Level, q: int, u: np.ndarray, fresh: list[int]) -> None:
    u = np.ascontiguousarray(u, dtype=DTYPE)
    uinv = np.empty_like(u)
    uinv[u] = np.arange(u.shape[0], dtype=DTYPE)
    lv.transversal[q] = (u, uinv)
    lv.orbit.append(q)
    fresh.append(q)


def membership(chain: StabilizerChain, p: Permutation) -> bool:
    residue, _ = chain.sift(p)
    return residue.is_identity()


# Alternating-group certificate ----------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def jordan_primes(n: int) -> list[int]:
    """Primes p with n/2 < p < n - 2."""
    return [p for p in range(n // 2 + 1, n - 2) if is_prime(p)]


def word_length_schedule(n: int) -> int:
    return 10 * max(1, math.ceil(math.log2(n)))


@dataclass
class AltCertificate:
    status: str  # "proven" | "inconclusive"
    degree: int
    transitive: bool
    two_transitive: bool
    all_even: bool
    seed: int
    budget: int
    words_tried: int = 0
    witness_word: list[str] | None = None
    witness_prime: int | None = None
    word_length: int = 0

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "degree": self.degree,
            "transitive": self.transitive,
            "two_transitive": self.two_transitive,
            "all_even": self.all_even,
            "seed": self.seed,
            "budget": self.budget,
            "words_tried": self.words_tried,
            "word_length": self.word_length,
            "witness_word": self.witness_word,
            "witness_prime": self.witness_prime,
        }


def _prime_cycle(p: Permutation, n: int) -> int | None:
    for length in cycle_lengths(p):
        if 2 * length > n and length < n - 2 and is_prime(length):
            return length
    return None


def alternating_certificate(group: GeneratedGroup, point_stabilizer_gens: Sequence[Permutation],
                            seed: int, budget: int, *, point: int = 0) -> AltCertificate:
    """Certify <group> = Alt(n) without a stabilizer chain.

    Proven requires: the group is transitive; the given elements fix ``point``
    and are transitive on the other n-1 points (so the group is 2-transitive,
    hence primitive); all generators are even; and a seeded random word has a
    cycle of prime length p with n/2 < p < n-2. A suitable power of that
    element is a p-cycle, so Jordan's theorem gives Alt(n) <= G, and evenness
    gives equality.
    """
    n = group.degree
    stab = list(point_stabilizer_gens)
    if any(s.degree != n or s(point) != point for s in stab):
        raise ValueError("point stabilizer generators must fix the designated point")
    transitive = len(orbit(group, point)) == n
    two_transitive = False
    nontrivial = [s for s in stab if not s.is_identity()]
    if transitive and nontrivial:
        other = (point + 1) % n
        two_transitive = len(orbit(GeneratedGroup(nontrivial), other)) == n - 1
    all_even = all(is_even(g) for g in group.generators)
    length = word_length_schedule(n)
    cert = AltCertificate("inconclusive", n, transitive, two_transitive, all_even,
                          seed, budget, word_length=length)
    if not (transitive and two_transitive and all_even) or not jordan_primes(n):
        return cert
    rng = SplitMix64(seed)
    k = len(group.generators)
    for attempt in range(1, budget + 1):
        picks = [rng.below(k) for _ in range(length)]
        word = [group.labels[i] for i in picks]
        p = group.evaluate(word)
        prime = _prime_cycle(p, n)
        if prime is not None:
            cert.status = "proven"
            cert.words_tried = attempt
            cert.witness_word = word
            cert.witness_prime = prime
            return cert
    cert.words_tried = budget
    return cert


def verify_alt_certificate(cert: AltCertificate, group: GeneratedGroup,
                           point_stabilizer_gens: Sequence[Permutation]) -> bool:
    """Independently re-check a proven certificate, including that a power of
    the witness is a single prime cycle."""
    if not cert.proven or cert.witness_word is None:
        return False
    n = group.degree
    if len(orbit(group, 0)) != n:
        return False
    stab = [s for s in point_stabilizer_gens if not s.is_identity()]
    if any(s(0) != 0 for s in stab) or len(orbit(GeneratedGroup(stab), 1)) != n - 1:
        return False
    if not all(is_even(g) for g in group.generators):
        return False
    w = group.evaluate(cert.witness_word)
    lengths = cycle_lengths(w)
    p = cert.witness_prime
    if p is None or not is_prime(p) or not (2 * p > n and p < n - 2) or p not in lengths:
        return False
    rest = [c for c in lengths if c != p]
    isolated = power(w, math.lcm(*rest) if rest else 1)
    return sorted(c for c in cycle_lengths(isolated) if c > 1) == [p]


# Double cosets --------------------------------------------------------------


def double_coset_closure(h_gens: Sequence[Permutation], seeds: Sequence[Permutation],
                         cap: int = DEFAULT_CLOSURE_CAP) -> list[Permutation]:
    """All elements of <h_gens> seeds <h_gens>, in BFS discovery order.

    Obtained by closing ``seeds`` under left and right multiplication by the
    generators; for a finite group this is the full double-coset union.
    """
    n = seeds[0].degree
    tables = [g.images for g in h_gens]
    seen: set[bytes] = set()
    out: list[Permutation] = []
    queue: deque[np.ndarray] = deque()
    for s in seeds:
        if s.degree != n:
            raise ValueError("degree mismatch")
        if s.key() not in seen:
            seen.add(s.key())
            out.append(s)
            queue.append(s.images)
    while queue:
        e = queue.popleft()
        for t in tables:
            for cand in (e[t], t[e]):  # t then e; e then t
                k = cand.tobytes()
                if k in seen:
                    continue
                seen.add(k)
                if len(seen) > cap:
                    raise ClosureCapError(f"closure exceeded {cap} elements")
                out.append(Permutation._wrap(cand))
                queue.append(cand)
    return out


def closure_is_stable(elements: Sequence[Permutation], h_gens: Sequence[Permutation]) -> bool:
    """True if one more round of left/right multiplication adds nothing."""
    keys = {e.key() for e in elements}
    for e in elements:
        for g in h_gens:
            if compose(g, e).key() not in keys or compose(e, g).key() not in keys:
                return False
    return True
