"""Koszul complexes K(t^r), their direct-system structure, the dual inverse
systems Hom(K(t^r), P), and the localization comparison for the stable
colimit.

The stable Koszul object is never materialized: towers hand out stages and
transitions on demand (memoized behind a lock), and every downstream consumer
works pro/ind-wise.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from itertools import permutations

from .errors import BadBounds, NotGraded, ZeroElement
from .groebner import FreeModuleMatrix, Ideal
from .complexes import (
    ComplexMap,
    FreeComplex,
    ModuleComplex,
    hom_complex,
    hom_map,
    map_with_coefficients,
    tensor_complexes,
    tensor_map,
    with_coefficients,
)
from .linalg import rank as matrix_rank
from .modules import FpModule, ModuleMap
from .ring import Polynomial, RingDescriptor, monomials_of_degree, mono_divides


def _check_sequence(t):
    t = tuple(t)
    if not t:
        raise ZeroElement("empty sequence")
    for p in t:
        if p.is_zero():
            raise ZeroElement("zero entry in sequence")
    return t


def single_koszul(p: Polynomial, r: int = 1) -> FreeComplex:
    """K(p^r): R -> R in degrees 0, 1; graded twists keep the map degree 0."""
    q = p**r
    d = q.homogeneous_degree()
    if d is not None:
        m = FreeModuleMatrix.build(p.ring, [[q]], row_twists=[-d], col_twists=[0])
    else:
        m = FreeModuleMatrix.build(p.ring, [[q]])
    return FreeComplex.from_matrix(m, 0)


def koszul_complex(t, r: int, M: FpModule | None = None):
    """K(t^r) = K(t_1^r) (x) ... (x) K(t_mu^r), tensored with M when given."""
    t = _check_sequence(t)
    if r < 1:
        raise BadBounds("stage must be positive")
    out = single_koszul(t[0], r)
    for p in t[1:]:
        out = tensor_complexes(out, single_koszul(p, r))
    if M is None:
        return out
    return with_coefficients(out, M)


def koszul_transition(t, r: int, s: int) -> ComplexMap:
    """K(t^r) -> K(t^s): identity in degree 0, t_i^{s-r} in degree 1, per
    factor, tensor-extended."""
    t = _check_sequence(t)
    if not 1 <= r <= s:
        raise BadBounds(f"need 1 <= r <= s, got {r}, {s}")

    def single(p):
        src, tgt = single_koszul(p, r), single_koszul(p, s)
        one = p.ring.one()
        q = p ** (s - r)
        parts = {
            0: FreeModuleMatrix.build(p.ring, [[one]], tgt.twist(0), src.twist(0)),
            1: FreeModuleMatrix.build(p.ring, [[q]], tgt.twist(1), src.twist(1)),
        }
        return ComplexMap.build(src, tgt, parts)

    out = single(t[0])
    for p in t[1:]:
        out = tensor_map(out, single(p))
    return out


def koszul_permutation_iso(t, perm, r: int = 1) -> ComplexMap:
    """The signed-permutation chain isomorphism K(sigma t, r) -> K(t, r),
    where sigma t = (t_perm[0], t_perm[1], ...)."""
    t = _check_sequence(t)
    mu = len(t)
    perm = tuple(perm)
    if sorted(perm) != list(range(mu)):
        raise BadBounds("not a permutation")
    src = koszul_complex(tuple(t[j] for j in perm), r)
    tgt = koszul_complex(t, r)
    sub_src = _koszul_subsets(mu)
    ring = t[0].ring
    z, one = ring.zero(), ring.one()
    parts = {}
    for n in range(0, mu + 1):
        subsets = sub_src[n]
        index = {S: i for i, S in enumerate(subsets)}
        mat = [[z] * len(subsets) for _ in range(len(subsets))]
        for jcol, S in enumerate(subsets):
            image = [perm[j] for j in S]
            sign = _sort_sign(image)
            target = tuple(sorted(image))
            mat[index[target]][jcol] = one if sign > 0 else -one
        parts[n] = FreeModuleMatrix.build(
            ring, mat, tgt.twist(n), src.twist(n), ncols=len(subsets)
        )
    return ComplexMap.build(src, tgt, parts)


def _koszul_subsets(mu: int):
    """Degree -> list of factor subsets, in the exact basis order produced by
    the left fold of tensor_complexes (lexicographic)."""
    table = {0: [()], 1: [(0,)]}
    for m in range(2, mu + 1):
        new = {}
        for n in range(0, m + 1):
            ordered = []
            # first-factor degree descending: blocks (p = n) then (p = n - 1)
            if n <= m - 1:
                ordered.extend(table.get(n, []))
            if 0 <= n - 1 <= m - 1:
                ordered.extend(S + (m - 1,) for S in table.get(n - 1, []))
            new[n] = ordered
        table = new
    if mu == 1:
        table = {0: [()], 1: [(0,)]}
    return table


def _sort_sign(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


# -- towers -----------------------------------------------------------------------


@dataclass
class KoszulTower:
    """Lazily materialized direct system K(t^r) (x) M, or its dual inverse
    system Hom(K(t^r), P); stage construction is memoized behind a lock."""

    sequence: tuple
    direction: str = "direct"  # or "dual-inverse"
    coefficients: FpModule | None = None
    _stages: dict = dc_field(default_factory=dict)
    _transitions: dict = dc_field(default_factory=dict)
    _lock: threading.Lock = dc_field(default_factory=threading.Lock)

    def __post_init__(self):
        self.sequence = _check_sequence(self.sequence)
        if self.direction not in ("direct", "dual-inverse"):
            raise ValueError("direction must be 'direct' or 'dual-inverse'")

    @property
    def ring(self) -> RingDescriptor:
        return self.sequence[0].ring

    def _unit(self) -> FreeComplex:
        return FreeComplex.concentrated(self.ring, 0, 1, twists=[0])

    def stage(self, r: int):
        """The stage-r complex (FreeComplex, or ModuleComplex with coefficients)."""
        with self._lock:
            if r in self._stages:
                return self._stages[r]
        K = koszul_complex(self.sequence, r)
        if self.direction == "direct":
            out = K if self.coefficients is None else with_coefficients(K, self.coefficients)
        else:
            H = hom_complex(K, self._unit())
            out = H if self.coefficients is None else with_coefficients(H, self.coefficients)
        with self._lock:
            self._stages.setdefault(r, out)
            return self._stages[r]

    def transition(self, r: int, s: int):
        """Direct: stage r -> stage s.  Dual-inverse: stage s -> stage r.
        Returns a ComplexMap, or (src, tgt, {degree: ModuleMap}) with
        coefficients."""
        if not 1 <= r <= s:
            raise BadBounds(f"need 1 <= r <= s, got {r}, {s}")
        key = (r, s)
        with self._lock:
            if key in self._transitions:
                return self._transitions[key]
        base = koszul_transition(self.sequence, r, s)
        if self.direction == "dual-inverse":
            base = hom_map(base, ComplexMap.identity(self._unit()))
        out = base if self.coefficients is None else map_with_coefficients(base, self.coefficients)
        with self._lock:
            self._transitions.setdefault(key, out)
            return self._transitions[key]


def dual_koszul_tower(t, P: FpModule, r_max: int) -> KoszulTower:
    """The inverse system Hom(K(t^r), P), stages materialized up to r_max."""
    if r_max < 1:
        raise BadBounds("r_max must be positive")
    tower = KoszulTower(tuple(t), direction="dual-inverse", coefficients=P)
    for r in range(1, r_max + 1):
        tower.stage(r)
    return tower


# -- localization comparison ---------------------------------------------------------


@dataclass(frozen=True)
class LocalizationReport:
    element: str
    degrees: tuple
    stage_dims: dict  # degree -> [dim of colimit image seen at stage j]
    localization_dims: dict  # degree -> [filtered count at z-degree <= j]
    stable: dict  # degree -> bool
    agree: dict  # degree -> bool

    @property
    def all_agree(self) -> bool:
        return all(self.agree.values())


def localization_colimit_check(t_elem: Polynomial, window, r_max: int) -> LocalizationReport:
    """Compare the direct system R -t-> R -t-> ... degreewise against the
    presented localization R[z]/(z t - 1) filtered by z-degree."""
    if t_elem.is_zero():
        raise ZeroElement("localization by zero")
    ring = t_elem.ring
    d_t = t_elem.homogeneous_degree()
    if d_t is None:
        raise NotGraded("localization comparison needs a homogeneous element")
    field = ring.field
    lo, hi = window

    # extended ring R[z], z of weight 1 for order purposes; the filtration
    # degree of z^c x^alpha is wdeg(alpha) - c*d_t (z acts as 1/t)
    zname = "z"
    while zname in ring.variables:
        zname += "_"
    ext = RingDescriptor(field, ring.variables + (zname,), ring.order, ring.weights + (1,))

    def extend(p: Polynomial) -> Polynomial:
        return ext.from_terms({m + (0,): c for m, c in p.terms})

    rel = extend(t_elem) * ext.var(zname) - ext.one()
    gb = Ideal.of(ext, rel).gb()
    leads = [g.leading_monomial() for g in gb]

    stage_dims: dict = {}
    loc_dims: dict = {}
    stable: dict = {}
    agree: dict = {}
    for e in range(lo, hi + 1):
        # direct-system side: V_j = R_{e + j*d_t}, transitions multiply by t
        monobases = [monomials_of_degree(ring, e + j * d_t) for j in range(r_max + 1)]
        kers = []
        for j in range(r_max + 1):
            src = monobases[j]
            if not src:
                kers.append(0)
                continue
            # matrix of multiplication by t^{r_max - j} into V_{r_max}
            tgt = monobases[r_max]
            tgt_index = {m: i for i, m in enumerate(tgt)}
            colmat = []
            power = t_elem ** (r_max - j)
            for m in src:
                col = [field.zero] * len(tgt)
                prod = ring.monomial(m) * power
                for mono, c in prod.terms:
                    col[tgt_index[mono]] = c
                colmat.append(col)
            rows = [[colmat[j2][i2] for j2 in range(len(src))] for i2 in range(len(tgt))]
            kers.append(len(src) - matrix_rank(rows, field))
        dims = [len(monobases[j]) - kers[j] for j in range(r_max + 1)]
        stage_dims[e] = dims
        # localization side: standard monomials with z-exponent <= j
        counts = []
        for j in range(r_max + 1):
            c = 0
            for zc in range(0, j + 1):
                rdeg = e + zc * d_t
                for m in monomials_of_degree(ring, rdeg):
                    mono = m + (zc,)
                    if not any(mono_divides(l, mono) for l in leads):
                        c += 1
            counts.append(c)
        loc_dims[e] = counts
        stable[e] = r_max >= 1 and dims[-1] == dims[-2] if r_max >= 1 else False
        agree[e] = all(dims[j] == counts[j] for j in range(r_max + 1))
    return LocalizationReport(
        str(t_elem), tuple(range(lo, hi + 1)), stage_dims, loc_dims, stable, agree
    )
