"""The permutations x, y, z and the right regular representation R of H.

All maps are materialised as full image tables over the encoded points
``0 .. 2^m - 1`` (see :mod:`cayleycert.halgebra`). Point 0 is the identity of H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import halgebra as ha
from .halgebra import HElement, elem, encode, mul_idx
from .perm import DTYPE, Permutation, compose, inverse

# Exhaustive homomorphism checks up to this m; sampled pairs beyond it.
EXHAUSTIVE_HOM_M = 8


class ConstructionError(RuntimeError):
    """A built object violates a property the construction guarantees."""


def extend_hom(m: int, img_a: int, img_b: int, img_c: list[int]) -> np.ndarray:
    """Table of the map a^i b^j prod c_k^{v_k} -> img_a^i img_b^j prod img_c[k]^{v_k}.

    Images are encoded indices. The table is a homomorphism only if the images
    satisfy the defining relations; callers check that separately.
    """
    idx = ha.all_indices(m)
    apow = [0]
    for _ in range(3):
        apow.append(int(mul_idx(np.int64(apow[-1]), np.int64(img_a))))
    out = np.asarray(apow, dtype=np.int64)[idx & 3]
    out = mul_idx(out, np.where((idx >> 2) & 1, img_b, 0))
    for k, g in enumerate(img_c):
        out = mul_idx(out, np.where((idx >> (3 + k)) & 1, g, 0))
    return out


def is_homomorphism(table: np.ndarray, m: int, domain: np.ndarray | None = None,
                    *, exhaustive_limit: int = EXHAUSTIVE_HOM_M, samples: int = 4096,
                    seed: int = 0) -> bool:
    """Check ``table[g1 g2] == table[g1] table[g2]`` over ``domain`` (a subgroup)."""
    dom = ha.all_indices(m) if domain is None else np.asarray(domain, dtype=np.int64)
    if m <= exhaustive_limit:
        g1 = dom[:, None]
        g2 = dom[None, :]
    else:
        rng = np.random.default_rng(seed)
        g1 = rng.choice(dom, samples)
        g2 = rng.choice(dom, samples)
    return bool(np.array_equal(table[mul_idx(g1, g2)], mul_idx(table[g1], table[g2])))


def _x_images(m: int) -> tuple[int, int, list[int]]:
    img_c = [0] * (m - 3)
    for i in range(ha.floor_half(m - 5) + 1):
        img_c[2 * i] = encode(elem(m, cs=[2 * i + 1]))
        img_c[2 * i + 1] = encode(elem(m, a=2, cs=[2 * i + 1, 2 * i + 2]))
    if m % 2 == 0:
        img_c[m - 4] = encode(elem(m, a=2, cs=[m - 3]))
    return encode(elem(m, a=-1)), encode(elem(m, a=1, b=1)), img_c


def build_x_table(m: int) -> np.ndarray:
    ha.check_m(m)
    img_a, img_b, img_c = _x_images(m)
    table = extend_hom(m, img_a, img_b, img_c)
    if not is_homomorphism(table, m) or np.unique(table).size != table.size:
        raise ConstructionError(f"x is not an automorphism of H at m={m}")
    return table


def build_x(m: int) -> Permutation:
    """The automorphism x of H: a -> a^-1, b -> ab, c_{2i+1} -> c_{2i+1},
    c_{2i+2} -> a^2 c_{2i+1} c_{2i+2}, and c_{m-3} -> a^2 c_{m-3} for even m."""
    return build(m).x


@dataclass(frozen=True)
class Tau:
    """The automorphism tau of K, stored over all of H with -1 outside K."""

    m: int
    table: np.ndarray = field(repr=False)

    def __call__(self, g: HElement) -> HElement:
        if not ha.in_K(g):
            raise ValueError(f"tau is only defined on K; {g} is not in K")
        return ha.decode(int(self.table[encode(g)]), self.m)

    def on_indices(self, idx: np.ndarray) -> np.ndarray:
        out = self.table[idx]
        if np.any(out < 0):
            raise ValueError("tau applied outside K")
        return out


def _tau_images(m: int) -> tuple[int, int, list[int]]:
    img_c = [0] * (m - 3)
    for i in range(ha.floor_half(m - 5) + 1):
        img_c[2 * i] = encode(elem(m, cs=[2 * i - 1, 2 * i, 2 * i + 2]))
        img_c[2 * i + 1] = encode(elem(m, cs=[2 * i - 1, 2 * i, 2 * i + 1]))
    if m % 2 == 0:
        img_c[m - 4] = encode(elem(m, cs=[m - 3]))
    # (a^2)^tau = b and b^tau = a^2
    return encode(elem(m, b=1)), encode(elem(m, a=2)), img_c


def build_tau(m: int) -> Tau:
    """tau: a^2 <-> b, c_{2i+1} -> c_{2i-1} c_{2i} c_{2i+2},
    c_{2i+2} -> c_{2i-1} c_{2i} c_{2i+1}, and c_{m-3} fixed for even m."""
    ha.check_m(m)
    img_a2, img_b, img_c = _tau_images(m)
    idx = ha.all_indices(m)
    k_idx = idx[(idx & 1) == 0]
    # K element a^{2s} b^j c^v has index 2s + 4j + 8v; write it through a^2.
    sub = extend_hom(m, 0, img_b, img_c)
    s_part = np.where(k_idx & 2, img_a2, 0)
    rest = sub[k_idx & ~2]
    images = mul_idx(s_part, rest)
    table = np.full(1 << m, -1, dtype=np.int64)
    table[k_idx] = images
    if np.unique(images).size != images.size or np.any(images & 1):
        raise ConstructionError(f"tau is not a bijection of K at m={m}")
    if not is_homomorphism(table, m, k_idx):
        raise ConstructionError(f"tau is not a homomorphism of K at m={m}")
    return Tau(m, table)


def build_y_table(m: int, tau: Tau) -> np.ndarray:
    idx = ha.all_indices(m)
    h = encode(ha.h_element(m))
    h_inv = encode(ha.h_inv(ha.h_element(m)))
    in_k = (idx & 1) == 0
    k = np.where(in_k, idx, mul_idx(np.int64(h_inv), idx))
    tk = tau.on_indices(k)
    coset = mul_idx(np.int64(h), tk)
    if m % 2 == 0:
        coset = mul_idx(coset, np.int64(encode(elem(m, cs=[m - 3]))))
    return np.where(in_k, tk, coset)


def build_z_table(m: int, y_table: np.ndarray) -> np.ndarray:
    """g -> ((g h)^y) h^-1 (times c_{m-3} for even m)."""
    idx = ha.all_indices(m)
    h_el = ha.h_element(m)
    right = ha.h_inv(h_el)
    if m % 2 == 0:
        right = ha.h_mul(right, elem(m, cs=[m - 3]))
    return mul_idx(y_table[mul_idx(idx, np.int64(encode(h_el)))], np.int64(encode(right)))


def build_R(g: HElement) -> Permutation:
    """Right translation p -> p g."""
    return _R_cached(g.m, encode(g))


@lru_cache(maxsize=4096)
def _R_cached(m: int, g: int) -> Permutation:
    return Permutation._wrap(mul_idx(ha.all_indices(m), np.int64(g)).astype(DTYPE))


def regular_gens(m: int) -> list[Permutation]:
    """R(a), R(b), R(c_1), ..., R(c_{m-3})."""
    ha.check_m(m)
    gens = [elem(m, a=1), elem(m, b=1)] + [elem(m, cs=[k]) for k in range(1, m - 2)]
    return [build_R(g) for g in gens]


def regular_gen_labels(m: int) -> list[str]:
    return ["R(a)", "R(b)"] + [f"R(c{k})" for k in range(1, m - 2)]


@dataclass(frozen=True)
class Construction:
    """Everything built for one value of m.

    Tests substitute corrupted tables with :func:`dataclasses.replace` to make
    sure the checks can fail.
    """

    m: int
    x: Permutation
    y: Permutation
    z: Permutation
    tau: Tau
    rgens: tuple[Permutation, ...]

    @property
    def degree(self) -> int:
        return 1 << self.m

    @property
    def h(self) -> HElement:
        return ha.h_element(self.m)

    def R(self, g: HElement) -> Permutation:
        return build_R(g)

    def connection_set(self) -> tuple[Permutation, Permutation, Permutation]:
        return self.x, self.y, self.z

    def image(self, word: str, g: HElement) -> HElement:
        """Image of ``g`` under a left-to-right word over ``x``, ``y``, ``z``."""
        p = encode(g)
        perms = {"x": self.x, "y": self.y, "z": self.z}
        for ch in word:
            p = perms[ch](p)
        return ha.decode(p, self.m)


@lru_cache(maxsize=32)
def build(m: int) -> Construction:
    """Build (and cache) x, tau, y, z and the R-generators for ``m``."""
    ha.check_m(m)
    x = Permutation(build_x_table(m))
    tau = build_tau(m)
    y_table = build_y_table(m, tau)
    y = Permutation(y_table)
    z = Permutation(build_z_table(m, y_table))
    return Construction(m, x, y, z, tau, tuple(regular_gens(m)))


def build_y(m: int) -> Permutation:
    return build(m).y


def build_z(m: int) -> Permutation:
    return build(m).z


def z_by_definition(m: int) -> Permutation:
    """z as the product R(h) y R(h^-1) (odd m) or R(h) y R(h^-1 c_{m-3}) (even m)."""
    h_el = ha.h_element(m)
    right = ha.h_inv(h_el)
    if m % 2 == 0:
        right = ha.h_mul(right, elem(m, cs=[m - 3]))
    return compose(build_R(h_el), build(m).y, build_R(right))


def connection_set(m: int) -> tuple[Permutation, Permutation, Permutation]:
    """The connection set {x, y, z}; raises if it is not three distinct
    nontrivial involutions fixing point 0."""
    con = build(m)
    validate_connection_set(con.x, con.y, con.z)
    return con.x, con.y, con.z


def validate_connection_set(x: Permutation, y: Permutation, z: Permutation) -> None:
    s = (x, y, z)
    for name, p in zip("xyz", s):
        if p.is_identity():
            raise ConstructionError(f"{name} is the identity")
        if not compose(p, p).is_identity():
            raise ConstructionError(f"{name} is not an involution")
        if p(0) != 0:
            raise ConstructionError(f"{name} moves the identity of H")
    if x == y or y == z or x == z:
        raise ConstructionError("connection set elements coincide")


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """g^-1 p g (left to right)."""
    return compose(inverse(g), p, g)
