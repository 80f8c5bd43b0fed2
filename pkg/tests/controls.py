"""Deliberately corrupted constructions, one per check, shared by the test modules."""

import dataclasses

from cayleycert.construction import build, build_R
from cayleycert.halgebra import elem
from cayleycert.perm import Permutation, compose, transposition


def swapped(p: Permutation, i: int, j: int) -> Permutation:
    arr = p.images.copy()
    arr[i], arr[j] = arr[j], arr[i]
    return Permutation(arr)


# Each control: (check id, m, corruption).
def _controls():
    def c(m, **kw):
        return dataclasses.replace(build(m), **kw)

    rb = lambda m: build_R(elem(m, b=1))  # noqa: E731
    return {
        "involutions": (5, lambda: c(5, y=swapped(build(5).y, 1, 2))),
        "alt-containment": (5, lambda: c(5, x=compose(build(5).x, transposition(32, 1, 2)))),
        "aut-h-even": (4, lambda: c(4, x=build(4).y)),
        "arrow-chains": (5, lambda: c(5, x=swapped(build(5).x, 1, 2))),
        "xyz8-cycles": (5, lambda: c(5, z=build(5).y)),
        "transitive-hstar": (6, lambda: c(6, x=build(6).y, z=build(6).y)),
        "word-witnesses": (6, lambda: c(6, x=build(6).y, z=build(6).y)),
        "full-alternating": (5, lambda: c(5, x=rb(5), y=rb(5))),
        "cubic": (5, lambda: c(5, y=build(5).x)),
        "ball-cosets": (4, lambda: c(4, y=build(4).x)),
        "fix-patterns": (7, lambda: c(7, y=build(7).z)),
    }


CONTROLS = _controls()
