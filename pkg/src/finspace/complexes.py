"""Order complexes, face posets, and exports for simplicial tools."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameter
from .space import FiniteSpace, bits, build_space


@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex given by its facets (maximal simplices)."""

    vertices: tuple  # labels
    facets: tuple  # tuple of frozensets of vertex ids

    def __post_init__(self):
        for f in self.facets:
            if not f:
                raise InvalidParameter("empty facet")
            for g in self.facets:
                if f is not g and f <= g:
                    raise InvalidParameter("facet contained in another")
        covered = set().union(*self.facets) if self.facets else set()
        if covered != set(range(len(self.vertices))):
            raise InvalidParameter("every vertex must appear in some facet")

    def simplices(self):
        """All simplices, smallest first."""
        out = set()
        for f in self.facets:
            elems = sorted(f)
            for mask in range(1, 1 << len(elems)):
                out.add(frozenset(elems[i] for i in bits(mask)))
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1


def make_complex(vertices, facets) -> SimplicialComplex:
    fs = [frozenset(f) for f in facets]
    maximal = [f for f in fs if not any(f < g for g in fs)]
    return SimplicialComplex(tuple(vertices), tuple(sorted(
        set(maximal), key=lambda s: (len(s), sorted(s))
    )))


def cycle_complex(n: int) -> SimplicialComplex:
    """The n-cycle graph as a 1-dimensional complex."""
    if n < 3:
        raise InvalidParameter("cycle complex needs n >= 3")
    return make_complex(
        [f"v{i}" for i in range(n)],
        [{i, (i + 1) % n} for i in range(n)],
    )


def order_complex(X: FiniteSpace) -> SimplicialComplex:
    """The complex whose simplices are the chains of X.

    Facets are the maximal chains, found by DFS from minimal elements.
    """
    facets = []

    def extend(chain, top):
        ups = X.up[top] & ~(1 << top)
        nxt = [y for y in bits(ups) if X.interval(top, y) == (1 << top) | (1 << y)]
        if not nxt:
            facets.append(frozenset(chain))
            return
        for y in nxt:
            extend(chain + [y], y)

    for x in bits(X.minimal_elements()):
        extend([x], x)
    return make_complex(list(X.labels), facets)


def face_poset(K: SimplicialComplex) -> FiniteSpace:
    """All simplices of K ordered by inclusion."""
    simp = K.simplices()
    index = {s: i for i, s in enumerate(simp)}
    covers = []
    for s in simp:
        if len(s) == 1:
            continue
        for v in s:
            covers.append((index[s - {v}], index[s]))
    labels = ["|".join(str(K.vertices[v]) for v in sorted(s)) for s in simp]
    return build_space(labels, covers)


def barycentric_facet_count(K: SimplicialComplex) -> int:
    """Expected facet count of the barycentric subdivision: each facet of
    dimension d contributes (d+1)! maximal chains."""
    from math import factorial

    return sum(factorial(len(f)) for f in K.facets)


# -- exports -----------------------------------------------------------


def format_complex(K: SimplicialComplex) -> str:
    lines = [f"asc {len(K.vertices)} {len(K.facets)}"]
    for f in K.facets:
        lines.append(" ".join(str(v) for v in sorted(f)))
    return "\n".join(lines) + "\n"


def export_complex(K: SimplicialComplex, path) -> None:
    if not K.facets:
        raise InvalidParameter("refusing to export an empty complex")
    with open(path, "w") as fh:
        fh.write(format_complex(K))


def format_hasse_dot(X: FiniteSpace, name: str = "space") -> str:
    """Hasse diagram in DOT, edges oriented from lower to higher."""
    if X.n == 0:
        raise InvalidParameter("refusing to export an empty space")
    lines = [f"digraph {name} {{"]
    for p in range(X.n):
        lines.append(f'  n{p} [label="{X.labels[p]}"];')
    for lo, hi in X.covers:
        lines.append(f"  n{lo} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_hasse_dot(X: FiniteSpace, path, name: str = "space") -> None:
    with open(path, "w") as fh:
        fh.write(format_hasse_dot(X, name))
