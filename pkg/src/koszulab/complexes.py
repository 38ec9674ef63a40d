"""Bounded cohomological complexes of twisted free modules.

Sign conventions, fixed once:
  tensor   d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db
  Hom      (df)(c)    = d(f(c)) - (-1)^{|f|} f(dc),   Hom^n = (+)_p Hom(C^p, D^{p+n})
  cone(f)  cone^n = C^{n+1} (+) D^n,  d(c, d) = (-dc, f(c) + dd)
  shift    C[n]^i = C^{n+i},  d_{C[n]} = (-1)^n d_C

Tensor blocks are ordered by ascending first-factor degree, with first-factor
index major; Hom blocks by ascending contravariant degree, contravariant index
major.  Every constructed complex verifies d o d = 0, and every ComplexMap
verifies commutation with the differentials, both exactly.

A ModuleComplex is the same shape with finitely presented coefficients; its
homology and induced maps run through the modules workhorse, so free complexes
are just the zero-relations case.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import MixedRings
from .groebner import FreeModuleMatrix
from .modules import FpModule, HomologyData, ModuleMap, homology_presentation, induced_map
from .ring import Polynomial, RingDescriptor


@dataclass(frozen=True)
class FreeComplex:
    """Support is degrees lo .. lo+len(ranks)-1; diffs[i]: C^{lo+i} -> C^{lo+i+1}."""

    ring: RingDescriptor
    lo: int
    ranks: tuple
    twists: tuple | None  # per-degree generator-degree tuples, or None
    diffs: tuple

    def __post_init__(self):
        assert len(self.diffs) == max(len(self.ranks) - 1, 0)
        for a, b in zip(self.diffs, self.diffs[1:]):
            if not (b @ a).is_zero():
                raise AssertionError("d o d != 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    @property
    def graded(self) -> bool:
        return self.twists is not None

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def rank(self, i: int) -> int:
        return self.ranks[i - self.lo] if self.lo <= i <= self.hi else 0

    def twist(self, i: int):
        if not self.graded:
            return None
        return self.twists[i - self.lo] if self.lo <= i <= self.hi else ()

    def diff(self, i: int) -> FreeModuleMatrix:
        """d^i: C^i -> C^{i+1} (zero matrix outside the stored range)."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return FreeModuleMatrix.build(
            self.ring,
            [[self.ring.zero()] * self.rank(i) for _ in range(self.rank(i + 1))],
            self.twist(i + 1),
            self.twist(i),
            ncols=self.rank(i),
        )

    def node(self, i: int) -> FpModule:
        return FpModule.free(self.ring, self.rank(i), self.twist(i))

    @staticmethod
    def build(ring, lo, ranks, twists, diffs) -> "FreeComplex":
        return FreeComplex(
            ring,
            lo,
            tuple(ranks),
            tuple(tuple(t) for t in twists) if twists is not None else None,
            tuple(diffs),
        )

    @staticmethod
    def concentrated(ring, degree, rank=1, twists=None) -> "FreeComplex":
        tw = None if twists is None else [tuple(twists)]
        return FreeComplex.build(ring, degree, [rank], tw, [])

    @staticmethod
    def from_matrix(m: FreeModuleMatrix, lo: int = 0) -> "FreeComplex":
        """Two-term complex  source -> target  in degrees lo, lo+1."""
        tw = [m.col_twists, m.row_twists] if m.graded else None
        return FreeComplex.build(m.ring, lo, [m.cols, m.rows], tw, [m])

    def trim(self) -> "FreeComplex":
        """Drop zero-rank degrees at both ends."""
        ranks = list(self.ranks)
        lo = self.lo
        while ranks and ranks[0] == 0:
            ranks.pop(0)
            lo += 1
        while ranks and ranks[-1] == 0:
            ranks.pop()
        if not ranks:
            return FreeComplex.build(self.ring, 0, [0], [()] if self.graded else None, [])
        a = lo - self.lo
        tw = self.twists[a : a + len(ranks)] if self.graded else None
        return FreeComplex.build(
            self.ring, lo, ranks, tw, self.diffs[a : a + len(ranks) - 1]
        )


@dataclass(frozen=True)
class ComplexMap:
    """Degree-0 chain map; components verified to commute with differentials."""

    source: FreeComplex
    target: FreeComplex
    parts: tuple  # ((degree, FreeModuleMatrix), ...) for overlapping support

    def __post_init__(self):
        for i, m in self.parts:
            if m.rows != self.target.rank(i) or m.cols != self.source.rank(i):
                raise AssertionError(f"component shape mismatch in degree {i}")
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for i in range(lo, hi):
            left = self.target.diff(i) @ self.part(i)
            right = self.part(i + 1) @ self.source.diff(i)
            if not (left + (-right)).is_zero():
                raise AssertionError(f"chain map fails to commute in degree {i}")

    def part(self, i: int) -> FreeModuleMatrix:
        for d, m in self.parts:
            if d == i:
                return m
        return FreeModuleMatrix.build(
            self.source.ring,
            [[self.source.ring.zero()] * self.source.rank(i) for _ in range(self.target.rank(i))],
            self.target.twist(i),
            self.source.twist(i),
            ncols=self.source.rank(i),
        )

    @staticmethod
    def build(source, target, parts_dict) -> "ComplexMap":
        return ComplexMap(source, target, tuple(sorted(parts_dict.items())))

    @staticmethod
    def identity(c: FreeComplex) -> "ComplexMap":
        parts = {
            i: FreeModuleMatrix.identity(c.ring, c.rank(i), c.twist(i)) for i in c.degrees()
        }
        return ComplexMap.build(c, c, parts)

    def after(self, other: "ComplexMap") -> "ComplexMap":
        lo = min(other.source.lo, self.target.lo)
        hi = max(other.source.hi, self.target.hi)
        parts = {}
        for i in range(lo, hi + 1):
            if self.target.rank(i) and other.source.rank(i):
                parts[i] = self.part(i) @ other.part(i)
        return ComplexMap.build(other.source, self.target, parts)

    def equals(self, other: "ComplexMap") -> bool:
        lo = min(self.source.lo, other.source.lo)
        hi = max(self.source.hi, other.source.hi)
        for i in range(lo, hi + 1):
            if not (self.part(i) + (-other.part(i))).is_zero():
                return False
        return True


# -- constructions ---------------------------------------------------------------


def _tensor_blocks(C: FreeComplex, D: FreeComplex, n: int):
    """(p, q) blocks of degree n, first-factor degree descending (so Koszul
    bases come out in lexicographic subset order), with index offsets."""
    out = []
    off = 0
    for p in reversed(C.degrees()):
        q = n - p
        r = C.rank(p) * D.rank(q)
        if r:
            out.append((p, q, off))
            off += r
    return out, off


def tensor_complexes(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    if C.ring != D.ring:
        raise MixedRings("tensor across rings")
    ring = C.ring
    lo, hi = C.lo + D.lo, C.hi + D.hi
    graded = C.graded and D.graded
    ranks, twists = [], []
    for n in range(lo, hi + 1):
        blocks, total = _tensor_blocks(C, D, n)
        ranks.append(total)
        if graded:
            tw = []
            for p, q, _ in blocks:
                for a in C.twist(p):
                    tw.extend(a + b for b in D.twist(q))
            twists.append(tuple(tw))
    diffs = []
    z = ring.zero()
    for n in range(lo, hi):
        src_blocks, src_total = _tensor_blocks(C, D, n)
        tgt_blocks, tgt_total = _tensor_blocks(C, D, n + 1)
        tgt_off = {(p, q): off for p, q, off in tgt_blocks}
        mat = [[z] * src_total for _ in range(tgt_total)]
        for p, q, off in src_blocks:
            rc, rd = C.rank(p), D.rank(q)
            # d_C (x) 1 into block (p+1, q)
            if (p + 1, q) in tgt_off and C.rank(p + 1):
                dc = C.diff(p)
                o2 = tgt_off[(p + 1, q)]
                for i2 in range(C.rank(p + 1)):
                    for i in range(rc):
                        e = dc.entries[i2][i]
                        if e.is_zero():
                            continue
                        for j in range(rd):
                            mat[o2 + i2 * rd + j][off + i * rd + j] = e
            # (-1)^p (x) d_D into block (p, q+1)
            if (p, q + 1) in tgt_off and D.rank(q + 1):
                dd = D.diff(q)
                o2 = tgt_off[(p, q + 1)]
                sgn = -1 if p % 2 else 1
                for j2 in range(D.rank(q + 1)):
                    for j in range(rd):
                        e = dd.entries[j2][j]
                        if e.is_zero():
                            continue
                        if sgn < 0:
                            e = -e
                        for i in range(rc):
                            mat[o2 + i * D.rank(q + 1) + j2][off + i * rd + j] = e
        diffs.append(
            FreeModuleMatrix.build(
                ring,
                mat,
                twists[n + 1 - lo] if graded else None,
                twists[n - lo] if graded else None,
                ncols=src_total,
            )
        )
    return FreeComplex.build(ring, lo, ranks, twists if graded else None, diffs)


def _hom_blocks(C: FreeComplex, D: FreeComplex, n: int):
    out = []
    off = 0
    for p in C.degrees():
        r = C.rank(p) * D.rank(p + n)
        if r:
            out.append((p, off))
            off += r
    return out, off


def hom_complex(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    """Hom^n = (+)_p Hom(C^p, D^{p+n}); twists negate on the contravariant slot."""
    if C.ring != D.ring:
        raise MixedRings("Hom across rings")
    ring = C.ring
    lo, hi = D.lo - C.hi, D.hi - C.lo
    graded = C.graded and D.graded
    ranks, twists = [], []
    for n in range(lo, hi + 1):
        blocks, total = _hom_blocks(C, D, n)
        ranks.append(total)
        if graded:
            tw = []
            for p, _ in blocks:
                for a in C.twist(p):
                    tw.extend(b - a for b in D.twist(p + n))
            twists.append(tuple(tw))
    diffs = []
    z = ring.zero()
    for n in range(lo, hi):
        src_blocks, src_total = _hom_blocks(C, D, n)
        tgt_blocks, tgt_total = _hom_blocks(C, D, n + 1)
        tgt_off = dict(tgt_blocks)
        mat = [[z] * src_total for _ in range(tgt_total)]
        sgn = -1 if n % 2 == 0 else 1  # -(-1)^n
        for p, off in src_blocks:
            rc, rd = C.rank(p), D.rank(p + n)
            # post-composition d_D o phi: block p at level n+1
            if p in tgt_off and D.rank(p + n + 1):
                dd = D.diff(p + n)
                o2 = tgt_off[p]
                for j2 in range(D.rank(p + n + 1)):
                    for j in range(rd):
                        e = dd.entries[j2][j]
                        if e.is_zero():
                            continue
                        for i in range(rc):
                            mat[o2 + i * D.rank(p + n + 1) + j2][off + i * rd + j] = e
            # -(-1)^n phi o d_C: block p-1 at level n+1
            if (p - 1) in tgt_off and C.rank(p - 1):
                dc = C.diff(p - 1)
                o2 = tgt_off[p - 1]
                for i in range(rc):
                    for i2 in range(C.rank(p - 1)):
                        e = dc.entries[i][i2]
                        if e.is_zero():
                            continue
                        if sgn < 0:
                            e = -e
                        for j in range(rd):
                            mat[o2 + i2 * rd + j][off + i * rd + j] = e
        diffs.append(
            FreeModuleMatrix.build(
                ring,
                mat,
                twists[n + 1 - lo] if graded else None,
                twists[n - lo] if graded else None,
                ncols=src_total,
            )
        )
    return FreeComplex.build(ring, lo, ranks, twists if graded else None, diffs)


def shift_complex(C: FreeComplex, n: int) -> FreeComplex:
    """C[n]^i = C^{n+i}; odd shifts negate the differentials."""
    diffs = tuple(d if n % 2 == 0 else -d for d in C.diffs)
    return FreeComplex.build(C.ring, C.lo - n, C.ranks, C.twists, diffs)


def shift_map(f: ComplexMap, n: int) -> ComplexMap:
    parts = {d - n: m for d, m in f.parts}
    return ComplexMap.build(shift_complex(f.source, n), shift_complex(f.target, n), parts)


def cone(f: ComplexMap) -> FreeComplex:
    """Mapping cone, C-block first in each degree."""
    C, D = f.source, f.target
    ring = C.ring
    lo = min(C.lo - 1, D.lo)
    hi = max(C.hi - 1, D.hi)
    graded = C.graded and D.graded
    ranks, twists = [], []
    for n in range(lo, hi + 1):
        ranks.append(C.rank(n + 1) + D.rank(n))
        if graded:
            twists.append(tuple(C.twist(n + 1)) + tuple(D.twist(n)))
    z = ring.zero()
    diffs = []
    for n in range(lo, hi):
        rows = C.rank(n + 2) + D.rank(n + 1)
        cols = C.rank(n + 1) + D.rank(n)
        mat = [[z] * cols for _ in range(rows)]
        dc = C.diff(n + 1)
        for i in range(C.rank(n + 2)):
            for j in range(C.rank(n + 1)):
                e = dc.entries[i][j]
                if not e.is_zero():
                    mat[i][j] = -e
        fm = f.part(n + 1)
        for i in range(D.rank(n + 1)):
            for j in range(C.rank(n + 1)):
                e = fm.entries[i][j]
                if not e.is_zero():
                    mat[C.rank(n + 2) + i][j] = e
        dd = D.diff(n)
        for i in range(D.rank(n + 1)):
            for j in range(D.rank(n)):
                e = dd.entries[i][j]
                if not e.is_zero():
                    mat[C.rank(n + 2) + i][C.rank(n + 1) + j] = e
        diffs.append(
            FreeModuleMatrix.build(
                ring,
                mat,
                twists[n + 1 - lo] if graded else None,
                twists[n - lo] if graded else None,
                ncols=cols,
            )
        )
    return FreeComplex.build(ring, lo, ranks, twists if graded else None, diffs)


def cone_inclusion(f: ComplexMap) -> ComplexMap:
    """D -> cone(f)."""
    cn = cone(f)
    C, D = f.source, f.target
    ring = C.ring
    parts = {}
    for n in cn.degrees():
        if D.rank(n) == 0:
            continue
        z = ring.zero()
        one = ring.one()
        rows = cn.rank(n)
        mat = [[z] * D.rank(n) for _ in range(rows)]
        for j in range(D.rank(n)):
            mat[C.rank(n + 1) + j][j] = one
        parts[n] = FreeModuleMatrix.build(
            ring, mat, cn.twist(n), D.twist(n), ncols=D.rank(n)
        )
    return ComplexMap.build(D, cn, parts)


def cone_projection(f: ComplexMap) -> ComplexMap:
    """cone(f) -> C[1]."""
    cn = cone(f)
    C = f.source
    s = shift_complex(C, 1)
    ring = C.ring
    parts = {}
    for n in cn.degrees():
        if C.rank(n + 1) == 0:
            continue
        z = ring.zero()
        one = ring.one()
        mat = [[z] * cn.rank(n) for _ in range(C.rank(n + 1))]
        for i in range(C.rank(n + 1)):
            mat[i][i] = one
        parts[n] = FreeModuleMatrix.build(
            ring, mat, s.twist(n), cn.twist(n), ncols=cn.rank(n)
        )
    return ComplexMap.build(cn, s, parts)


def tensor_map(f: ComplexMap, g: ComplexMap) -> ComplexMap:
    """f (x) g on the tensor complexes (degree-0 components, no signs)."""
    src = tensor_complexes(f.source, g.source)
    tgt = tensor_complexes(f.target, g.target)
    ring = src.ring
    z = ring.zero()
    parts = {}
    for n in src.degrees():
        if src.rank(n) == 0 or tgt.rank(n) == 0:
            continue
        sblocks, stotal = _tensor_blocks(f.source, g.source, n)
        tblocks, ttotal = _tensor_blocks(f.target, g.target, n)
        toff = {(p, q): off for p, q, off in tblocks}
        mat = [[z] * stotal for _ in range(ttotal)]
        for p, q, off in sblocks:
            if (p, q) not in toff:
                continue
            fp, gq = f.part(p), g.part(q)
            o2 = toff[(p, q)]
            rd_s, rd_t = g.source.rank(q), g.target.rank(q)
            for i2 in range(f.target.rank(p)):
                for i in range(f.source.rank(p)):
                    a = fp.entries[i2][i]
                    if a.is_zero():
                        continue
                    for j2 in range(rd_t):
                        for j in range(rd_s):
                            b = gq.entries[j2][j]
                            if b.is_zero():
                                continue
                            mat[o2 + i2 * rd_t + j2][off + i * rd_s + j] = a * b
        parts[n] = FreeModuleMatrix.build(
            ring, mat, tgt.twist(n), src.twist(n), ncols=stotal
        )
    return ComplexMap.build(src, tgt, parts)


def hom_map(u: ComplexMap, v: ComplexMap) -> ComplexMap:
    """Hom(u, v): Hom(C, D) -> Hom(C', D') via phi -> v o phi o u, for
    u: C' -> C and v: D -> D'."""
    src = hom_complex(u.target, v.source)
    tgt = hom_complex(u.source, v.target)
    ring = src.ring
    z = ring.zero()
    parts = {}
    for n in src.degrees():
        sblocks, stotal = _hom_blocks(u.target, v.source, n)
        tblocks, ttotal = _hom_blocks(u.source, v.target, n)
        if stotal == 0 and ttotal == 0:
            continue
        toff = dict(tblocks)
        mat = [[z] * stotal for _ in range(ttotal)]
        for p, off in sblocks:
            if p not in toff:
                continue
            up, vpn = u.part(p), v.part(p + n)
            o2 = toff[p]
            rd_s, rd_t = v.source.rank(p + n), v.target.rank(p + n)
            for i in range(u.target.rank(p)):
                for i2 in range(u.source.rank(p)):
                    a = up.entries[i][i2]
                    if a.is_zero():
                        continue
                    for j2 in range(rd_t):
                        for j in range(rd_s):
                            b = vpn.entries[j2][j]
                            if b.is_zero():
                                continue
                            mat[o2 + i2 * rd_t + j2][off + i * rd_s + j] = a * b
        parts[n] = FreeModuleMatrix.build(
            ring, mat, tgt.twist(n), src.twist(n), ncols=stotal
        )
    return ComplexMap.build(src, tgt, parts)


def matrix_right_inverse(m: FreeModuleMatrix):
    """A right inverse over the ring, or None (columns must span the target)."""
    from .modules import submodule_gb

    ring = m.ring
    gb = submodule_gb(ring, m.columns(), m.rows)
    cols = []
    z = ring.zero()
    one = ring.one()
    for i in range(m.rows):
        e = [z] * m.rows
        e[i] = one
        lift = gb.lift(e)
        if lift is None:
            return None
        cols.append(lift)
    return FreeModuleMatrix.build(
        ring,
        [[cols[j][i] for j in range(m.rows)] for i in range(m.cols)],
        m.col_twists,
        m.row_twists,
        ncols=m.rows,
    )


def is_chain_isomorphism(f: ComplexMap) -> bool:
    """Degreewise invertibility over the ring, checked exactly."""
    for i in range(min(f.source.lo, f.target.lo), max(f.source.hi, f.target.hi) + 1):
        if f.source.rank(i) != f.target.rank(i):
            return False
        if f.source.rank(i) == 0:
            continue
        m = f.part(i)
        inv = matrix_right_inverse(m)
        if inv is None:
            return False
        if not ((inv @ m) + (-FreeModuleMatrix.identity(m.ring, m.cols, m.col_twists))).is_zero():
            return False
    return True


# -- complexes with finitely presented coefficients ---------------------------------


@dataclass(frozen=True)
class ModuleComplex:
    """A bounded complex of presented modules; nodes[i]: degree lo+i."""

    lo: int
    nodes: tuple
    maps: tuple  # ModuleMap nodes[i] -> nodes[i+1]

    @property
    def hi(self) -> int:
        return self.lo + len(self.nodes) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def node(self, i: int) -> FpModule | None:
        return self.nodes[i - self.lo] if self.lo <= i <= self.hi else None

    def map_at(self, i: int) -> ModuleMap | None:
        return self.maps[i - self.lo] if self.lo <= i < self.hi else None

    @staticmethod
    def from_free(C: FreeComplex) -> "ModuleComplex":
        nodes = [C.node(i) for i in C.degrees()]
        maps = [
            ModuleMap(nodes[i - C.lo], nodes[i + 1 - C.lo], C.diff(i))
            for i in range(C.lo, C.hi)
        ]
        return ModuleComplex(C.lo, tuple(nodes), tuple(maps))


def _block_module(ring, rank, ctwists, M: FpModule) -> FpModule:
    n = M.cover_rank
    graded = M.graded and ctwists is not None
    tw = None
    if graded:
        tw = tuple(ctwists[i] + M.cover_twists[l] for i in range(rank) for l in range(n))
    cols = []
    z = ring.zero()
    for i in range(rank):
        for c in M.relations.columns():
            col = [z] * (rank * n)
            for l in range(n):
                col[i * n + l] = c[l]
            cols.append(col)
    return FpModule.make(ring, tw, cols, cover_rank=rank * n, quotient=M.quotient)


def _block_matrix(d: FreeModuleMatrix, M: FpModule) -> list:
    n = M.cover_rank
    z = d.ring.zero()
    out = [[z] * (d.cols * n) for _ in range(d.rows * n)]
    for i in range(d.rows):
        for j in range(d.cols):
            e = d.entries[i][j]
            if e.is_zero():
                continue
            for l in range(n):
                out[i * n + l][j * n + l] = e
    return out


def with_coefficients(C: FreeComplex, M: FpModule) -> ModuleComplex:
    """C (x) M, node by node (C free, so no derived correction is needed)."""
    nodes = [
        _block_module(C.ring, C.rank(i), C.twist(i), M) for i in C.degrees()
    ]
    maps = []
    for i in range(C.lo, C.hi):
        mat = _block_matrix(C.diff(i), M)
        src, tgt = nodes[i - C.lo], nodes[i + 1 - C.lo]
        maps.append(ModuleMap.build(src, tgt, mat))
    return ModuleComplex(C.lo, tuple(nodes), tuple(maps))


def map_with_coefficients(f: ComplexMap, M: FpModule):
    """Per-degree ModuleMaps of  f (x) id_M  between coefficient complexes."""
    src = with_coefficients(f.source, M)
    tgt = with_coefficients(f.target, M)
    out = {}
    for i in src.degrees():
        s, t = src.node(i), tgt.node(i)
        if s is None or t is None:
            continue
        out[i] = ModuleMap.build(s, t, _block_matrix(f.part(i), M))
    return src, tgt, out


# -- homology -------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _homology_data_mc(mc: ModuleComplex, i: int) -> HomologyData:
    f_in = mc.map_at(i - 1)
    f_out = mc.map_at(i)
    node = mc.node(i)
    if node is None:
        raise ValueError(f"degree {i} outside support")
    if f_in is None and f_out is None:
        return HomologyData(node, FreeModuleMatrix.identity(node.ring, node.cover_rank, node.cover_twists), node)
    return homology_presentation(f_in, f_out)


def homology_data(X, i: int) -> HomologyData | None:
    """HomologyData at degree i of a FreeComplex or ModuleComplex; None when i
    is outside the support (the zero module)."""
    mc = ModuleComplex.from_free(X) if isinstance(X, FreeComplex) else X
    if not (mc.lo <= i <= mc.hi):
        return None
    return _homology_data_mc(mc, i)


def homology(X, i: int) -> FpModule:
    """H^i as an FpModule (zero module outside the support)."""
    h = homology_data(X, i)
    if h is None:
        ring = X.ring if isinstance(X, FreeComplex) else X.nodes[0].ring
        return FpModule.zero(ring)
    return h.module


def induced_homology_map(f, i: int, source_complex=None, target_complex=None) -> ModuleMap:
    """H^i(f) for a ComplexMap f, or for a per-degree {i: ModuleMap} dict with
    the two ModuleComplexes passed explicitly."""
    if isinstance(f, ComplexMap):
        hs = homology_data(f.source, i)
        ht = homology_data(f.target, i)
        if hs is None or ht is None:
            src = hs.module if hs else FpModule.zero(f.source.ring)
            tgt = ht.module if ht else FpModule.zero(f.source.ring)
            z = FreeModuleMatrix.build(
                f.source.ring,
                [[f.source.ring.zero()] * src.cover_rank for _ in range(tgt.cover_rank)],
                tgt.cover_twists if tgt.graded and src.graded else None,
                src.cover_twists if tgt.graded and src.graded else None,
                ncols=src.cover_rank,
            )
            return ModuleMap(src, tgt, z)
        return induced_map(hs, ht, f.part(i))
    parts = f
    hs = homology_data(source_complex, i)
    ht = homology_data(target_complex, i)
    if hs is None or ht is None:
        raise ValueError("degree outside support")
    return induced_map(hs, ht, parts[i].matrix)
