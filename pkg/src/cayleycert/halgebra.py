"""Arithmetic in H = D8 x Z2^(m-3).

H is presented as ``<a, b | a^4 = b^2 = (ab)^2 = 1> x <c_1> x ... x <c_{m-3}>``
with central involutions ``c_i``. Every element has a unique normal form
``a^i b^j c_1^{v_1} ... c_{m-3}^{v_{m-3}}`` and is encoded densely as

    index = i + 4*j + 8*v

where ``v`` is the little-endian integer of the c-exponents (bit ``k-1`` holds
the exponent of ``c_k``). The layout is frozen: certificates depend on it.

Index conventions: ``c_0`` and ``c_{-1}`` (and any non-positive index) denote
the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

MIN_M = 4


def check_m(m: int) -> int:
    if not isinstance(m, (int, np.integer)) or m < MIN_M:
        raise ValueError(f"m must be an integer >= {MIN_M}, got {m!r}")
    return int(m)


def order_of_H(m: int) -> int:
    return 1 << m


@dataclass(frozen=True, order=True)
class HElement:
    """``a^a_exp b^b_exp prod c_k^{bit k-1 of c_mask}`` in H for parameter ``m``."""

    m: int
    a_exp: int = 0
    b_exp: int = 0
    c_mask: int = 0

    def __post_init__(self):
        check_m(self.m)
        object.__setattr__(self, "a_exp", self.a_exp % 4)
        object.__setattr__(self, "b_exp", self.b_exp % 2)
        if not 0 <= self.c_mask < (1 << (self.m - 3)):
            raise ValueError(f"c-vector {self.c_mask:#b} does not fit m={self.m}")

    def __mul__(self, other: HElement) -> HElement:
        return h_mul(self, other)

    def __str__(self) -> str:
        parts = []
        if self.a_exp == 1:
            parts.append("a")
        elif self.a_exp:
            parts.append(f"a^{self.a_exp}")
        if self.b_exp:
            parts.append("b")
        parts.extend(f"c{k}" for k in c_indices(self.c_mask))
        return "".join(parts) if parts else "1"

    @property
    def index(self) -> int:
        return encode(self)

    def c(self, k: int) -> int:
        """Exponent of ``c_k`` (0 for the conventional ``c_0``, ``c_{-1}``)."""
        if k < 1:
            return 0
        return (self.c_mask >> (k - 1)) & 1


def c_indices(mask: int) -> list[int]:
    return [k + 1 for k in range(mask.bit_length()) if (mask >> k) & 1]


def c_bit(k: int) -> int:
    """Mask of ``c_k``; zero for ``k < 1`` by the ``c_0 = c_{-1} = 1`` convention."""
    return 0 if k < 1 else 1 << (k - 1)


def h_mul(g1: HElement, g2: HElement) -> HElement:
    if g1.m != g2.m:
        raise ValueError(f"elements belong to different groups (m={g1.m}, m={g2.m})")
    sign = -1 if g1.b_exp else 1
    return HElement(
        g1.m,
        (g1.a_exp + sign * g2.a_exp) % 4,
        g1.b_exp ^ g2.b_exp,
        g1.c_mask ^ g2.c_mask,
    )


def h_prod(m: int, factors: Iterable[HElement]) -> HElement:
    out = identity(m)
    for f in factors:
        out = h_mul(out, f)
    return out


def h_inv(g: HElement) -> HElement:
    # b-type elements are involutions; a^i inverts to a^-i.
    if g.b_exp:
        return g
    return HElement(g.m, -g.a_exp, 0, g.c_mask)


def h_pow(g: HElement, k: int) -> HElement:
    out = identity(g.m)
    for _ in range(k % 4):
        out = h_mul(out, g)
    return out


def encode(g: HElement) -> int:
    return g.a_exp + 4 * g.b_exp + 8 * g.c_mask


def decode(index: int, m: int) -> HElement:
    check_m(m)
    if not 0 <= index < (1 << m):
        raise ValueError(f"index {index} out of range for |H| = {1 << m}")
    return HElement(m, index & 3, (index >> 2) & 1, index >> 3)


def elements(m: int) -> list[HElement]:
    return [decode(i, m) for i in range(1 << m)]


def identity(m: int) -> HElement:
    return HElement(m)


def elem(m: int, a: int = 0, b: int = 0, cs: Iterable[int] = ()) -> HElement:
    """``a^a b^b prod_{k in cs} c_k``; indices below 1 are dropped, repeats cancel."""
    mask = 0
    for k in cs:
        if k > m - 3:
            raise ValueError(f"c_{k} does not exist for m={m}")
        mask ^= c_bit(k)
    return HElement(m, a, b, mask)


def ceil_half(n: int) -> int:
    """ceil(n/2) in the mathematical sense, so ceil(-1/2) == 0."""
    return -((-n) // 2)


def floor_half(n: int) -> int:
    """floor(n/2) in the mathematical sense, so floor(-1/2) == -1."""
    return n // 2


def h_element(m: int) -> HElement:
    """``h = a * prod_{i=0}^{ceil((m-5)/2)} c_{2i+1}``."""
    check_m(m)
    top = ceil_half(m - 5)
    return elem(m, a=1, cs=[2 * i + 1 for i in range(top + 1)])


def h1_element(m: int) -> HElement:
    """``h_1 = h c_{m-3}``, defined for even ``m`` only."""
    check_m(m)
    if m % 2:
        raise ValueError("h1 is only defined for even m")
    return h_mul(h_element(m), elem(m, cs=[m - 3]))


def special_element(name: str, m: int) -> HElement:
    """Named elements: ``identity``, ``a``, ``b``, ``c_i``/``c<i>``, ``h``, ``h1``, ``a2h``."""
    check_m(m)
    if name in ("identity", "1"):
        return identity(m)
    if name == "a":
        return elem(m, a=1)
    if name == "b":
        return elem(m, b=1)
    if name == "h":
        return h_element(m)
    if name == "h1":
        return h1_element(m)
    if name == "a2h":
        return h_mul(elem(m, a=2), h_element(m))
    if name.startswith("c"):
        try:
            k = int(name[1:].lstrip("_"))
        except ValueError:
            raise ValueError(f"unknown element name {name!r}") from None
        if not 1 <= k <= m - 3:
            raise ValueError(f"c_{k} does not exist for m={m}")
        return elem(m, cs=[k])
    raise ValueError(f"unknown element name {name!r}")


# Subsets -------------------------------------------------------------------


def in_K(g: HElement) -> bool:
    """K = <a^2, b, c_1, ..., c_{m-3}>, the elements with even a-exponent."""
    return g.a_exp % 2 == 0


def in_H1(g: HElement) -> bool:
    """H_1 = <a, b, c_1, ..., c_{m-4}>: no c_{m-3} factor."""
    return g.c(g.m - 3) == 0


def in_K1(g: HElement) -> bool:
    return in_K(g) and in_H1(g)


def u_parity_ok(m: int, c_mask: int) -> bool:
    """The parity condition cutting U out of <c_1, ..., c_{m-3}>.

    Odd m: the exponents of c_2, c_4, ..., c_{m-3} sum to 0 mod 2.
    Even m: the exponents of c_2, ..., c_{m-4} sum to the exponent of c_{m-3}.
    """
    even_top = m - 3 if m % 2 else m - 4
    s = 0
    for j in range(2, even_top + 1, 2):
        s ^= (c_mask >> (j - 1)) & 1
    if m % 2 == 0:
        s ^= (c_mask >> (m - 4)) & 1
    return s == 0


def in_U(g: HElement) -> bool:
    return g.a_exp == 0 and g.b_exp == 0 and u_parity_ok(g.m, g.c_mask)


def U_elements(m: int) -> list[HElement]:
    check_m(m)
    return [HElement(m, 0, 0, v) for v in range(1 << (m - 3)) if u_parity_ok(m, v)]


def span(m: int, gens: Iterable[HElement]) -> list[HElement]:
    """All elements of the subgroup generated by ``gens``, sorted by index."""
    seen = {encode(identity(m))}
    frontier = [identity(m)]
    gens = list(gens)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                p = h_mul(g, s)
                i = encode(p)
                if i not in seen:
                    seen.add(i)
                    nxt.append(p)
        frontier = nxt
    return [decode(i, m) for i in sorted(seen)]


def subgroup_M(m: int) -> list[HElement]:
    """The subgroup M whose nonidentity part is the fixed set in the m mod 4 case analysis.

    m = 1 mod 4: <a^2 b> x <c_1 c_2> x ... x <c_{m-4} c_{m-3}>
    m = 3 mod 4: <b> x <c_1 c_2> x ... x <c_{m-4} c_{m-3}>
    m = 2 mod 4: <c_1> x <c_3> x ... x <c_{m-5}> x <a c_{m-3}>
    No M is attached to m = 0 mod 4.
    """
    check_m(m)
    r = m % 4
    if r == 0:
        raise ValueError("no subgroup M is defined for m = 0 mod 4")
    if r in (1, 3):
        first = elem(m, a=2, b=1) if r == 1 else elem(m, b=1)
        gens = [first] + [elem(m, cs=[2 * i - 1, 2 * i]) for i in range(1, (m - 3) // 2 + 1)]
    else:
        gens = [elem(m, cs=[k]) for k in range(1, m - 4, 2)] + [elem(m, a=1, cs=[m - 3])]
    return span(m, gens)


# Vectorised kernels over index arrays ---------------------------------------


def mul_idx(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Elementwise product of encoded elements (broadcasting)."""
    pa = p & 3
    pb = (p >> 2) & 1
    qa = q & 3
    a = (pa + np.where(pb == 1, -qa, qa)) & 3
    b = pb ^ ((q >> 2) & 1)
    c = (p >> 3) ^ (q >> 3)
    return a | (b << 2) | (c << 3)


def inv_idx(p: np.ndarray) -> np.ndarray:
    pa = p & 3
    pb = (p >> 2) & 1
    a = np.where(pb == 1, pa, (-pa) & 3)
    return a | (p & ~3)


def all_indices(m: int) -> np.ndarray:
    return np.arange(1 << check_m(m), dtype=np.int64)
