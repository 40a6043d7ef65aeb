"""Graded vector spaces with zero differential as a dg-category.

For dimension vectors E = (n_0, ..., n_d), P^i(E, F) = (+)_j Hom(E^j, F^{j+i})
with the elementary-matrix basis, ordered block by block (ascending j) and
row-major inside a block.  MC elements of P^1(E, E) are differentials making
E a complex, so the curvature ideal is the Buchsbaum-Eisenbud ideal of the
variety of complexes.
"""
from __future__ import annotations

from .dgcat import DGCategory
from .scalars import Field
from .variety import CurvatureIdeal, Polynomial


def _check_vector(v) -> tuple:
    v = tuple(int(x) for x in v)
    if not v or any(x < 0 for x in v) or not any(v):
        raise ValueError(f"bad dimension vector {v}: need non-negative entries, not all zero")
    return v


def hom_blocks(e: tuple, f: tuple, i: int) -> list[tuple[int, int, int, int]]:
    """Blocks (j, rows, cols, offset) of P^i(E,F) = (+)_j Hom(E^j, F^{j+i})."""
    out = []
    off = 0
    for j in range(len(e)):
        t = j + i
        if 0 <= t < len(f) and e[j] and f[t]:
            out.append((j, f[t], e[j], off))
            off += f[t] * e[j]
    return out


def object_label(v: tuple) -> str:
    return "E" + "".join(str(x) for x in v) if all(x < 10 for x in v) else "E" + "_".join(map(str, v))


def endo_category(vectors, k: Field | None = None, labels=None) -> DGCategory:
    """The dg-category of the given graded spaces, d = 0, matrix composition."""
    k = Field.rationals() if k is None else k
    if vectors and isinstance(vectors[0], int):
        vectors = [vectors]
    vecs = [_check_vector(v) for v in vectors]
    if labels is None:
        labels = [object_label(v) for v in vecs]
        if len(set(labels)) != len(labels):
            labels = [f"{lab}#{n}" for n, lab in enumerate(labels)]
    objs = dict(zip(labels, vecs))
    bound = max(1, max(len(v) - 1 for v in vecs))

    dims, blocks = {}, {}
    for E, e in objs.items():
        for F, f in objs.items():
            by = {}
            for i in range(-(len(e) - 1), len(f)):
                bl = hom_blocks(e, f, i)
                if bl:
                    blocks[(E, F, i)] = bl
                    by[i] = sum(r * c for _, r, c, _ in bl)
            dims[(E, F)] = by

    one = k.one
    comps = {}
    for E, e in objs.items():
        for F in objs:
            for G in objs:
                by = {}
                for i in dims[(E, F)]:
                    for j in dims[(F, G)]:
                        out_blocks = {bj: (r, c, off) for bj, r, c, off in blocks.get((E, G, i + j), [])}
                        table = {}
                        for ja, ra, ca, offa in blocks[(E, F, i)]:
                            # alpha block: E^ja -> F^{ja+i}; beta must start at F^{ja+i}
                            for jb, rb, cb, offb in blocks[(F, G, j)]:
                                if jb != ja + i or ja not in out_blocks:
                                    continue
                                ro, co, offo = out_blocks[ja]
                                for x in range(rb):
                                    for y in range(cb):
                                        for z in range(ca):
                                            p = offb + x * cb + y
                                            q = offa + y * ca + z
                                            table[(p, q)] = {offo + x * co + z: one}
                        if table:
                            by[(j, i)] = table
                if by:
                    comps[(E, F, G)] = by

    ids = {}
    for E, e in objs.items():
        n0 = dims[(E, E)].get(0, 0)
        v = [k.zero] * n0
        for j, r, c, off in blocks.get((E, E, 0), []):
            for x in range(r):
                v[off + x * c + x] = one
        ids[E] = tuple(v)
    return DGCategory(k, labels, dims, {}, comps, ids, bound)


def buchsbaum_eisenbud_ideal(v, k: Field | None = None, label=None) -> CurvatureIdeal:
    """Entries of the consecutive products eta^{i+1} eta^i of generic matrices.

    Built directly from matrix shapes, independent of any category.
    Variables enumerate the matrix units of eta^0, eta^1, ... row-major;
    generators enumerate the entries of the products Hom(E^j, E^{j+2})
    row-major, ascending j.
    """
    k = Field.rationals() if k is None else k
    v = _check_vector(v)
    one = k.one
    var = {}
    for j in range(len(v) - 1):
        for x in range(v[j + 1]):
            for y in range(v[j]):
                var[(j, x, y)] = len(var)
    gens = []
    for j in range(len(v) - 2):
        for x in range(v[j + 2]):
            for z in range(v[j]):
                quad = {}
                for y in range(v[j + 1]):
                    quad[(var[(j + 1, x, y)], var[(j, y, z)])] = one
                gens.append(Polynomial({}, quad))
    label = object_label(v) if label is None else label
    return CurvatureIdeal(label, len(var), tuple(gens), k)


def random_complex(v, k: Field, rng, density: float = 0.5):
    """Coefficients of a random differential on the graded space ``v``.

    Each map is a random matrix supported on a random set of rows and
    columns chosen so that consecutive products vanish: the image of each map
    lives on rows the next map ignores.
    """
    v = _check_vector(v)
    coeffs = []
    kill = set()  # rows of E^j used as image, so next map must ignore them
    for j in range(len(v) - 1):
        cols = [y for y in range(v[j]) if y not in kill]
        rows = [x for x in range(v[j + 1]) if rng.random() < density]
        block = [[k.zero] * v[j] for _ in range(v[j + 1])]
        for x in rows:
            for y in cols:
                block[x][y] = k.random(rng)
        kill = {x for x in rows if any(block[x][y] != 0 for y in range(v[j]))}
        coeffs.extend(c for row in block for c in row)
    return coeffs
