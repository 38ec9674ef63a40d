"""Groebner engine: reduced bases, normal forms, colon ideals and saturation,
and syzygy/kernel computation for matrices over the ring.

Everything runs on one Buchberger core over free-module vectors.  A vector in
R^k is a dict {(position, monomial): coeff}; ideals are the rank-1 case.  The
module order is term-over-position with an optional elimination block, which
is what the tag trick below needs: a tagged generator (M e_j, e_j) carries its
own expression, so one engine yields Groebner bases, membership tests, lifts
through images, and syzygies.

Determinism: pair selection is by (sugar, lcm key, indices), and every output
basis is auto-reduced, monic, and sorted, hence unique for (ideal, order).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import MixedRings, NotGraded, ZeroElement
from .ring import (
    Polynomial,
    RingDescriptor,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

# -- free-module vectors -------------------------------------------------------


class ModuleOrder:
    """Term-over-position order on R^k; positions below ``elim`` dominate all
    others (elimination block), ties go to the lower position."""

    def __init__(self, ring: RingDescriptor, elim: int | None = None):
        self.ring = ring
        self.elim = elim

    def key(self, term):
        pos, mono = term
        block = 1 if self.elim is None or pos < self.elim else 0
        return (block, self.ring.monomial_key(mono), -pos)


def vec_from_column(ring, column, offset=0):
    v = {}
    for i, p in enumerate(column):
        for mono, c in p.terms:
            v[(i + offset, mono)] = c
    return v


def vec_to_polys(ring: RingDescriptor, v: dict, rank: int, lo: int = 0):
    buckets = [dict() for _ in range(rank)]
    for (pos, mono), c in v.items():
        if lo <= pos < lo + rank:
            buckets[pos - lo][mono] = c
    return [ring.from_terms(b) for b in buckets]


def _vlead(v, order: ModuleOrder):
    return max(v, key=order.key)


def _vsub_mul(field, v, coeff, mono, w):
    """v -= coeff * mono * w, in place."""
    for (pos, m), c in w.items():
        key = (pos, mono_mul(mono, m))
        s = field.sub(v.get(key, field.zero), field.mul(coeff, c))
        if s:
            v[key] = s
        else:
            v.pop(key, None)


def _vscale(field, v, c):
    return {k: field.mul(c, val) for k, val in v.items()}


def _sugar(ring, v, base=0):
    return base + max(ring.weighted_degree(m) for _, m in v)


def _normal_form_vec(v, basis, order: ModuleOrder):
    """Full normal form of v against (lead, element) pairs; classic division:
    irreducible lead terms migrate to the remainder."""
    field = order.ring.field
    work = dict(v)
    rem = {}
    while work:
        (pos, mono) = _vlead(work, order)
        c = work[(pos, mono)]
        for (bp, bm), lc, g in basis:
            if bp == pos and mono_divides(bm, mono):
                _vsub_mul(field, work, field.div(c, lc), mono_div(mono, bm), g)
                break
        else:
            rem[(pos, mono)] = c
            del work[(pos, mono)]
    return rem


def _buchberger(gens, order: ModuleOrder, sugar0=None):
    """Reduced Groebner basis of the submodule generated by ``gens``."""
    ring = order.ring
    field = ring.field
    basis = []  # entries: [lead_term, lead_coeff, vec, sugar]
    for idx, g in enumerate(gens):
        if not g:
            continue
        s = sugar0[idx] if sugar0 else _sugar(ring, g)
        lead = _vlead(g, order)
        basis.append([lead, g[lead], g, s])

    def blead(i):
        return basis[i][0]

    pairs = []

    def push_pairs(j):
        (pj, mj) = blead(j)
        for i in range(j):
            (pi, mi) = blead(i)
            if pi != pj:
                continue
            lcm = mono_lcm(mi, mj)
            sug = max(
                basis[i][3] + ring.weighted_degree(mono_div(lcm, mi)),
                basis[j][3] + ring.weighted_degree(mono_div(lcm, mj)),
            )
            pairs.append((sug, order.ring.monomial_key(lcm), i, j, lcm))

    for j in range(len(basis)):
        push_pairs(j)

    # the coprime-lead shortcut is only valid for ideals (rank-1 content)
    rank1 = all(pos == 0 for g in gens for (pos, _) in g)

    while pairs:
        pairs.sort()
        sug, _, i, j, lcm = pairs.pop(0)
        (pi, mi), ci = blead(i), basis[i][1]
        (pj, mj), cj = blead(j), basis[j][1]
        if rank1 and mono_mul(mi, mj) == lcm:
            continue
        s = {}
        _vsub_mul(field, s, field.neg(field.inv(ci)), mono_div(lcm, mi), basis[i][2])
        _vsub_mul(field, s, field.inv(cj), mono_div(lcm, mj), basis[j][2])
        red = _normal_form_vec(s, [(b[0], b[1], b[2]) for b in basis], order)
        if red:
            lead = _vlead(red, order)
            basis.append([lead, red[lead], red, sug])
            push_pairs(len(basis) - 1)

    # minimalize: ascending by lead, keep only leads not divisible by a kept lead
    basis.sort(key=lambda b: order.key(b[0]))
    minimal = []
    for b in basis:
        (p, m) = b[0]
        if not any(kp == p and mono_divides(km, m) for ((kp, km), _, _) in minimal):
            minimal.append((b[0], b[1], b[2]))
    # tail-reduce each against the others and normalize; the result is the
    # unique reduced basis, so repeated runs are byte-identical
    out = []
    for i, b in enumerate(minimal):
        others = [m for k, m in enumerate(minimal) if k != i]
        red = _normal_form_vec(b[2], others, order)
        lead = _vlead(red, order)
        out.append(_vscale(field, red, field.inv(red[lead])))
    out.sort(key=lambda v: order.key(_vlead(v, order)))
    return out


# -- ideals ----------------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    ring: RingDescriptor
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if g.ring != self.ring:
                raise MixedRings("generator from a different ring")

    @staticmethod
    def of(ring: RingDescriptor, *gens) -> "Ideal":
        return Ideal(ring, tuple(gens))

    def gb(self) -> tuple:
        return _ideal_gb(self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def is_subset_of(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: "Ideal") -> bool:
        """Mathematical equality, via the canonical reduced bases."""
        return self.ring == other.ring and self.gb() == other.gb()

    def plus(self, *polys) -> "Ideal":
        return Ideal(self.ring, self.generators + tuple(polys))

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@lru_cache(maxsize=4096)
def _ideal_gb_cached(ring: RingDescriptor, gens: tuple) -> tuple:
    order = ModuleOrder(ring)
    vecs = [vec_from_column(ring, [g]) for g in gens if not g.is_zero()]
    out = _buchberger(vecs, order)
    return tuple(vec_to_polys(ring, v, 1)[0] for v in out)


def _ideal_gb(ideal: Ideal) -> tuple:
    return _ideal_gb_cached(ideal.ring, ideal.generators)


def groebner_basis(ideal: Ideal) -> tuple:
    """The unique reduced, monic Groebner basis under the ring's order."""
    return ideal.gb()


def normal_form(f: Polynomial, ideal: Ideal) -> Polynomial:
    if f.ring != ideal.ring:
        raise MixedRings(f"{f.ring} vs {ideal.ring}")
    gb = ideal.gb()
    if not gb or f.is_zero():
        return f
    order = ModuleOrder(ideal.ring)
    basis = [
        ((0, g.leading_monomial()), g.leading_term()[1], vec_from_column(ideal.ring, [g]))
        for g in gb
    ]
    red = _normal_form_vec(vec_from_column(ideal.ring, [f]), basis, order)
    return vec_to_polys(ideal.ring, red, 1)[0]


def ideal_quotient(ideal: Ideal, f: Polynomial, k: int = 1) -> Ideal:
    """The colon ideal (I : f^k) for a finite positive exponent k."""
    if f.is_zero():
        raise ZeroElement("colon by zero")
    g = f**k
    ring = ideal.ring
    cols = [[p] for p in ideal.generators if not p.is_zero()] + [[g]]
    syz = syzygies_of_columns(ring, cols, rank=1)
    gens = tuple(s[-1] for s in syz if not s[-1].is_zero())
    reduced = _ideal_gb_cached(ring, gens)
    return Ideal(ring, reduced)


def saturate(ideal: Ideal, f: Polynomial):
    """(I : f^inf) together with the minimal stabilization exponent.

    Doubles the exponent until two successive colon ideals have equal reduced
    bases (noetherian stabilization pinches the whole chain in between), then
    walks forward to the first exponent realizing the saturation.
    """
    if f.is_zero():
        raise ZeroElement("saturation by zero")
    prev = ideal
    k = 1
    while True:
        cur = ideal_quotient(ideal, f, k)
        if cur.gb() == prev.gb():
            sat = cur
            break
        prev = cur
        k *= 2
    j = 0
    while True:
        q = ideal if j == 0 else ideal_quotient(ideal, f, j)
        if q.gb() == sat.gb():
            return Ideal(ideal.ring, sat.gb()), j
        j += 1


def radical_contains(ideal: Ideal, f: Polynomial) -> bool:
    """f in rad(I), decided by saturation: (I : f^inf) = (1)."""
    if f.is_zero():
        return ideal.contains(f)
    sat, _ = saturate(ideal, f)
    return sat.contains(ideal.ring.one())


def same_radical(a: Ideal, b: Ideal) -> bool:
    """Verified equality of radicals: each generator set saturates the other."""
    return all(radical_contains(b, g) for g in a.generators) and all(
        radical_contains(a, g) for g in b.generators
    )


# -- matrices over the ring -------------------------------------------------------


@dataclass(frozen=True)
class FreeModuleMatrix:
    """A matrix of polynomials mapping a free source into a free target.

    Twists are generator degrees: a twist list (a_1..a_k) stands for the free
    module R(-a_1) + ... + R(-a_k).  When both twist lists are present each
    entry must be zero or homogeneous of degree col_twist(j) - row_twist(i).
    """

    ring: RingDescriptor
    entries: tuple  # row-major tuple of tuples of Polynomial
    row_twists: tuple | None = None
    col_twists: tuple | None = None
    ncols: int = -1  # explicit column count; required when there are no rows

    def __post_init__(self):
        if self.entries:
            width = len(self.entries[0])
            if any(len(r) != width for r in self.entries):
                raise ValueError("ragged matrix")
        elif self.col_twists is not None:
            width = len(self.col_twists)
        else:
            width = max(self.ncols, 0)
        object.__setattr__(self, "ncols", width)
        for row in self.entries:
            for p in row:
                if p.ring != self.ring:
                    raise MixedRings("matrix entry from a different ring")
        if self.graded:
            if len(self.row_twists) != self.rows or len(self.col_twists) != self.cols:
                raise ValueError("twist lists must match the matrix shape")
            for i, row in enumerate(self.entries):
                for j, p in enumerate(row):
                    want = self.col_twists[j] - self.row_twists[i]
                    if not p.is_zero() and p.homogeneous_degree() != want:
                        raise NotGraded(
                            f"entry ({i},{j}) must be homogeneous of degree {want}"
                        )

    @property
    def graded(self) -> bool:
        return self.row_twists is not None and self.col_twists is not None

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return self.ncols

    @staticmethod
    def build(ring, rows_of_polys, row_twists=None, col_twists=None, ncols=-1) -> "FreeModuleMatrix":
        return FreeModuleMatrix(
            ring,
            tuple(tuple(row) for row in rows_of_polys),
            tuple(row_twists) if row_twists is not None else None,
            tuple(col_twists) if col_twists is not None else None,
            ncols,
        )

    @staticmethod
    def zero(ring, rows, cols, row_twists=None, col_twists=None) -> "FreeModuleMatrix":
        z = ring.zero()
        return FreeModuleMatrix.build(
            ring, [[z] * cols for _ in range(rows)], row_twists, col_twists, ncols=cols
        )

    @staticmethod
    def identity(ring, n, twists=None) -> "FreeModuleMatrix":
        one, z = ring.one(), ring.zero()
        return FreeModuleMatrix.build(
            ring,
            [[one if i == j else z for j in range(n)] for i in range(n)],
            twists,
            twists,
        )

    def column(self, j) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def __matmul__(self, other: "FreeModuleMatrix") -> "FreeModuleMatrix":
        if self.ring != other.ring:
            raise MixedRings("matrix product across rings")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        z = self.ring.zero()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = z
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        rt = self.row_twists
        ct = other.col_twists
        if not (self.graded and other.graded):
            rt = ct = None
        return FreeModuleMatrix.build(self.ring, out, rt, ct, ncols=other.cols)

    def scale(self, p: Polynomial) -> "FreeModuleMatrix":
        out = [[e * p for e in row] for row in self.entries]
        rt, ct = self.row_twists, self.col_twists
        if self.graded:
            d = p.homogeneous_degree()
            if d is not None:
                ct = tuple(t + d for t in ct)
            elif not p.is_zero():
                rt = ct = None
        return FreeModuleMatrix.build(self.ring, out, rt, ct)

    def __add__(self, other: "FreeModuleMatrix") -> "FreeModuleMatrix":
        out = [
            [a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)
        ]
        same = self.graded and other.graded and self.row_twists == other.row_twists and self.col_twists == other.col_twists
        return FreeModuleMatrix.build(
            self.ring, out, self.row_twists if same else None, self.col_twists if same else None
        )

    def __neg__(self) -> "FreeModuleMatrix":
        return FreeModuleMatrix.build(
            self.ring,
            [[-e for e in row] for row in self.entries],
            self.row_twists,
            self.col_twists,
        )

    def hstack(self, other: "FreeModuleMatrix") -> "FreeModuleMatrix":
        ct = None
        if self.graded and other.graded and self.row_twists == other.row_twists:
            ct = self.col_twists + other.col_twists
        return FreeModuleMatrix.build(
            self.ring,
            [ra + rb for ra, rb in zip(self.entries, other.entries)],
            self.row_twists if ct is not None else None,
            ct,
            ncols=self.cols + other.cols,
        )

    def take_columns(self, idxs) -> "FreeModuleMatrix":
        return FreeModuleMatrix.build(
            self.ring,
            [[row[j] for j in idxs] for row in self.entries],
            self.row_twists,
            tuple(self.col_twists[j] for j in idxs) if self.graded else None,
            ncols=len(list(idxs)),
        )

    def __str__(self):
        body = "; ".join(", ".join(str(p) for p in row) for row in self.entries)
        return f"[{body}]"


def syzygies_of_columns(ring: RingDescriptor, cols, rank: int):
    """Generators of the syzygy module of the given columns of R^rank,
    by the tag trick under an elimination order.  Returns lists of length
    len(cols)."""
    m = len(cols)
    order = ModuleOrder(ring, elim=rank)
    tagged = []
    for j, col in enumerate(cols):
        v = vec_from_column(ring, col)
        v[(rank + j, (0,) * ring.nvars)] = ring.field.one
        tagged.append(v)
    gb = _buchberger(tagged, order)
    out = []
    for v in gb:
        if all(pos >= rank for (pos, _) in v):
            out.append(vec_to_polys(ring, v, m, lo=rank))
    return out


class SubmoduleGB:
    """Reduced tagged Groebner basis of a column-span inside R^rank; answers
    membership, normal forms, and lifts through the generators."""

    def __init__(self, ring: RingDescriptor, cols, rank: int):
        self.ring = ring
        self.rank = rank
        self.ncols = len(cols)
        self.order = ModuleOrder(ring, elim=rank)
        tagged = []
        for j, col in enumerate(cols):
            v = vec_from_column(ring, col)
            v[(rank + j, (0,) * ring.nvars)] = ring.field.one
            tagged.append(v)
        self._gb = _buchberger(tagged, self.order)
        self._basis = [(_vlead(v, self.order), v[_vlead(v, self.order)], v) for v in self._gb]

    def lead_terms(self):
        """Leads (position, monomial) of the untagged part of the basis."""
        return [lt for (lt, _, _) in self._basis if lt[0] < self.rank]

    def reduce_tagged(self, column):
        v = vec_from_column(self.ring, column)
        return _normal_form_vec(v, self._basis, self.order)

    def normal_form(self, column):
        red = self.reduce_tagged(column)
        return vec_to_polys(self.ring, red, self.rank)

    def contains(self, column) -> bool:
        red = self.reduce_tagged(column)
        return all(pos >= self.rank for (pos, _) in red)

    def lift(self, column):
        """Coefficients a with  sum a_j col_j == column, or None."""
        red = self.reduce_tagged(column)
        if any(pos < self.rank for (pos, _) in red):
            return None
        tags = vec_to_polys(self.ring, red, self.ncols, lo=self.rank)
        return [-t for t in tags]


@lru_cache(maxsize=8192)
def _column_span_gb_cached(ring: RingDescriptor, cols_key: tuple, rank: int) -> tuple:
    vecs = [
        vec_from_column(ring, [Polynomial(ring, t) for t in col]) for col in cols_key
    ]
    vecs = [v for v in vecs if v]
    gb = _buchberger(vecs, ModuleOrder(ring))
    return tuple(tuple(vec_to_polys(ring, v, rank)) for v in gb)


def column_span_gb(ring: RingDescriptor, cols, rank: int) -> tuple:
    """Canonical reduced module GB of the span of ``cols`` in R^rank; equal
    submodules give structurally equal outputs."""
    key = tuple(tuple(p.terms for p in col) for col in cols)
    return _column_span_gb_cached(ring, key, rank)


def syzygy_kernel(matrix: FreeModuleMatrix, modulus: tuple = ()) -> FreeModuleMatrix:
    """Columns generating ker(matrix).  With ``modulus`` generators J, the
    kernel is taken over R/J: relations J*e_i are adjoined to the image and the
    syzygies are projected back onto the original columns, entries reduced
    mod J."""
    ring = matrix.ring
    cols = matrix.columns()
    ncols = len(cols)
    extra = []
    if modulus:
        z = ring.zero()
        for g in modulus:
            for i in range(matrix.rows):
                col = [z] * matrix.rows
                col[i] = g
                extra.append(col)
    syz = syzygies_of_columns(ring, cols + extra, matrix.rows)
    jideal = Ideal(ring, tuple(modulus)) if modulus else None
    out_cols = []
    for s in syz:
        head = s[:ncols]
        if jideal:
            head = [normal_form(p, jideal) for p in head]
        if any(not p.is_zero() for p in head):
            out_cols.append(head)
    # deduplicate identical columns (can arise after mod-J reduction)
    seen, uniq = set(), []
    for c in out_cols:
        key = tuple(p.terms for p in c)
        if key not in seen:
            seen.add(key)
            uniq.append(c)
    row_twists = matrix.col_twists
    col_twists = None
    if matrix.graded and row_twists is not None:
        col_twists = []
        ok = True
        for c in uniq:
            degs = {
                p.homogeneous_degree() + row_twists[i]
                for i, p in enumerate(c)
                if not p.is_zero() and p.homogeneous_degree() is not None
            }
            if len(degs) == 1:
                col_twists.append(degs.pop())
            else:
                ok = False
                break
        col_twists = tuple(col_twists) if ok else None
        if col_twists is None:
            row_twists = None
    entries = [[uniq[j][i] for j in range(len(uniq))] for i in range(ncols)]
    return FreeModuleMatrix.build(ring, entries, row_twists, col_twists, ncols=len(uniq))
