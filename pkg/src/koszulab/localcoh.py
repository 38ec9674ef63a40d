"""Torsion functor, graded local cohomology by two independent colimit
methods, and the bounded-search certifiers: proregularity (colon-ideal
containments) and essential nullity (pro-zero towers).

Search verdicts are honest: existence claims carry re-verifiable witnesses,
and bound exhaustion yields ``undecided``, never a negative claim.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement

from .errors import BadBounds, NotGraded, ZeroElement
from .complexes import (
    ModuleComplex,
    homology,
    homology_data,
    induced_homology_map,
)
from .groebner import FreeModuleMatrix, Ideal, column_span_gb, ideal_quotient, normal_form
from .koszul import KoszulTower, koszul_complex, koszul_transition
from .linalg import rank as field_rank
from .modules import (
    FpModule,
    ModuleMap,
    graded_piece_matrix,
    hilbert_function,
    hom_differential,
    hom_free_into,
    free_resolution,
    kernel_pullback,
    resolution_modules,
    submodule_gb,
)
from .ring import Polynomial, RingDescriptor, product


# -- torsion ----------------------------------------------------------------------


def ideal_power_gens(gens, n: int):
    """Products of n generators with repetition (spanning I^n)."""
    return [product(c, gens[0].ring) for c in combinations_with_replacement(gens, n)]


@dataclass(frozen=True)
class TorsionResult:
    submodule: FpModule  # presented as a module in its own right
    inclusion: ModuleMap  # into the ambient module
    exponent: int  # first n with (0 : I^n) = (0 : I^{n+1})


def annihilator_submodule(M: FpModule, gens) -> FreeModuleMatrix:
    """Columns generating (0 :_M (gens)) inside the cover of M."""
    ring = M.ring
    z = ring.zero()
    rank = M.cover_rank
    k = len(gens)
    rows = []
    for gi in range(k):
        for i in range(rank):
            row = [z] * rank
            row[i] = gens[gi]
            rows.append(row)
    stacked = FreeModuleMatrix.build(ring, rows, None, None, ncols=rank)
    # target relations: block diagonal copies of M.relations
    relcols = []
    for gi in range(k):
        for c in M.relations.columns():
            col = [z] * (k * rank)
            for i in range(rank):
                col[gi * rank + i] = c[i]
            relcols.append(col)
    rel = FreeModuleMatrix.build(
        ring,
        [[relcols[j][i] for j in range(len(relcols))] for i in range(k * rank)],
        None,
        None,
        ncols=len(relcols),
    )
    pull = kernel_pullback(stacked, rel)
    if M.graded:
        # recover column degrees for the graded case
        ct = []
        ok = True
        for j in range(pull.cols):
            degs = {
                p.homogeneous_degree() + M.cover_twists[i]
                for i, p in enumerate(pull.column(j))
                if not p.is_zero()
            }
            if len(degs) == 1:
                ct.append(degs.pop())
            else:
                ok = False
                break
        if ok:
            return FreeModuleMatrix.build(
                M.ring, pull.entries, M.cover_twists, tuple(ct), ncols=pull.cols
            )
    return pull


def torsion_submodule(M: FpModule, I: Ideal) -> TorsionResult:
    """colim (0 :_M I^n), by ascending chain with noetherian stabilization."""
    ring = M.ring
    n = 1
    prev_span = None
    prev_cols = None
    while True:
        gens = ideal_power_gens(list(I.generators), n)
        cols_mat = annihilator_submodule(M, gens)
        cols = [cols_mat.column(j) for j in range(cols_mat.cols)]
        span = column_span_gb(ring, cols, M.cover_rank)
        if prev_span is not None and span == prev_span:
            exponent = n - 1
            cols_mat = prev_cols
            break
        prev_span, prev_cols = span, cols_mat
        n += 1
    rel = kernel_pullback(cols_mat, M.relations)
    sub = FpModule(
        ring,
        cols_mat.cols,
        cols_mat.col_twists if M.graded else None,
        rel,
        M.quotient,
    )
    incl = ModuleMap(sub, M, cols_mat)
    return TorsionResult(sub, incl, exponent)


# -- certificates -------------------------------------------------------------------


@dataclass(frozen=True)
class ProregularityCertificate:
    sequence: tuple
    modulus: tuple
    r_max: int
    s_max: int
    witnesses: dict  # (i, r) -> minimal s
    undecided: tuple  # (i, r) pairs whose search exhausted s_max
    verdict: str  # "proregular-up-to-bounds" | "undecided"

    @property
    def proregular(self) -> bool:
        return self.verdict == "proregular-up-to-bounds"


def _colon_lhs_rhs(t, modulus, i, r, s):
    """The two colon ideals of the defining containment, lifted over the base
    ring when a quotient modulus is present."""
    ring = t[0].ring
    prev_s = [p**s for p in t[: i - 1]]
    prev_r = [p**r for p in t[: i - 1]]
    lhs = ideal_quotient(Ideal(ring, tuple(modulus) + tuple(prev_s)), t[i - 1], s)
    rhs = ideal_quotient(Ideal(ring, tuple(modulus) + tuple(prev_r)), t[i - 1], s - r)
    return lhs, rhs


def verify_proregularity_witness(t, modulus, i, r, s) -> bool:
    """Re-check one containment: two colon ideals plus normal-form membership."""
    lhs, rhs = _colon_lhs_rhs(t, modulus, i, r, s)
    return all(normal_form(g, rhs).is_zero() for g in lhs.generators)


def proregularity_check(t, r_max: int, s_max: int, modulus=()) -> ProregularityCertificate:
    """Bounded witness search for the defining colon-ideal containments."""
    t = tuple(t)
    if not t or any(p.is_zero() for p in t):
        raise ZeroElement("sequence entries must be nonzero")
    if r_max < 1 or s_max < 1:
        raise BadBounds("bounds must be positive")
    witnesses = {}
    undecided = []
    for i in range(1, len(t) + 1):
        for r in range(1, r_max + 1):
            found = None
            for s in range(r + 1, s_max + 1):
                if verify_proregularity_witness(t, modulus, i, r, s):
                    found = s
                    break
            if found is None:
                undecided.append((i, r))
            else:
                witnesses[(i, r)] = found
    verdict = "undecided" if undecided else "proregular-up-to-bounds"
    return ProregularityCertificate(
        t, tuple(modulus), r_max, s_max, witnesses, tuple(undecided), verdict
    )


@dataclass(frozen=True)
class EssentialNullityCertificate:
    sequence: tuple
    module: FpModule
    index: int  # homological index i; the tower is H_i = H^{-i} of the duals
    r_max: int
    s_max: int
    witnesses: dict  # r -> minimal s with zero transition
    undecided: tuple
    verdict: str

    @property
    def essentially_null(self) -> bool:
        return self.verdict == "essentially-null-up-to-bounds"


def _dual_transition_zero(tower: KoszulTower, i: int, r: int, s: int) -> bool:
    """Is the induced map H_i(stage s) -> H_i(stage r) the zero map?"""
    degree = -i
    stage_s, stage_r = tower.stage(s), tower.stage(r)
    if isinstance(stage_s, ModuleComplex):
        if not (stage_s.lo <= degree <= stage_s.hi):
            return True
        src, tgt, parts = tower.transition(r, s)
        f = induced_homology_map(parts, degree, src, tgt)
    else:
        if not (stage_s.lo <= degree <= stage_s.hi):
            return True
        f = induced_homology_map(tower.transition(r, s), degree)
    return f.is_zero_map()


def essential_nullity_check(
    t, P: FpModule, i: int, r_max: int, s_max: int
) -> EssentialNullityCertificate:
    """For each r, search the minimal s > r making H_i(t^s, P) -> H_i(t^r, P)
    zero; H_i vanishes identically outside 0..mu, giving immediate witnesses."""
    t = tuple(t)
    if i == 0:
        raise BadBounds("index must be nonzero (H_0 is the completion stage)")
    if r_max < 1 or s_max < 1:
        raise BadBounds("bounds must be positive")
    tower = KoszulTower(t, direction="dual-inverse", coefficients=P)
    witnesses = {}
    undecided = []
    for r in range(1, r_max + 1):
        found = None
        for s in range(r + 1, s_max + 1):
            if _dual_transition_zero(tower, i, r, s):
                found = s
                break
        if found is None:
            undecided.append(r)
        else:
            witnesses[r] = found
    verdict = "undecided" if undecided else "essentially-null-up-to-bounds"
    return EssentialNullityCertificate(
        t, P, i, r_max, s_max, witnesses, tuple(undecided), verdict
    )


def verify_essential_nullity_witness(t, P: FpModule, i: int, r: int, s: int) -> bool:
    tower = KoszulTower(tuple(t), direction="dual-inverse", coefficients=P)
    return _dual_transition_zero(tower, i, r, s)


# -- local cohomology tables -----------------------------------------------------------


@dataclass(frozen=True)
class LocalCohomologyTable:
    method: str
    index: int
    window: tuple
    stage_max: int
    entries: dict  # (degree, stage) -> dim
    stable_from: dict  # degree -> first stage of two consecutive iso transitions, or None
    stabilized: dict  # degree -> stabilized dim, or None

    def stabilized_or_none(self, degree):
        return self.stabilized.get(degree)

    @property
    def fully_stabilized(self) -> bool:
        return all(v is not None for v in self.stabilized.values())


def _piece_matrix(f: ModuleMap, d: int):
    mat, ncols, nrows = graded_piece_matrix(f, d)
    return mat, ncols, nrows


def _stabilization(window, dims_by_stage, mats_by_stage, stage_max, field):
    """Stabilization detection on the image level: the colimit's degree piece
    is pinned by the ranks of composite transitions.  A degree is stable at
    value v when the composite ranks into the top probed stage agree at v for
    at least the last two starting stages, and the earliest such start's
    images had already settled at v across every probed span.  Sound only up
    to the probe horizon; re-checkable by raising the stage bound."""
    lo, hi = window
    stable_from, stabilized = {}, {}
    for d in range(lo, hi + 1):
        steps = {r: mats_by_stage[r][d] for r in range(1, stage_max)}
        # rho[(r, s)] = rank of the composite transition piece stage r -> s
        rho = {}
        for r in range(1, stage_max):
            comp = steps[r][0]
            shape = (steps[r][2], steps[r][1])  # (rows, cols)
            rho[(r, r + 1)] = field_rank(comp, field) if comp else 0
            cur = comp
            for s in range(r + 2, stage_max + 1):
                nxt = steps[s - 1][0]
                if not cur or not nxt:
                    cur = []
                else:
                    from .linalg import mat_mul

                    cur = mat_mul(nxt, cur, field)
                rho[(r, s)] = field_rank(cur, field) if cur else 0
        found = None
        value = None
        for r0 in range(1, stage_max - 1):
            v = rho[(r0, stage_max)]
            if all(rho[(r, stage_max)] == v for r in range(r0, stage_max)) and all(
                rho[(r0, s)] == v for s in range(r0 + 1, stage_max + 1)
            ):
                found, value = r0, v
                break
        stable_from[d] = found
        stabilized[d] = value
    return stable_from, stabilized


def local_cohomology_koszul(M: FpModule, t, i: int, window, stage_max: int) -> LocalCohomologyTable:
    """H^i via the direct system H^i(K(t^r) (x) M)."""
    if not M.graded:
        raise NotGraded("graded tables need a graded module")
    t = tuple(t)
    lo, hi = window
    dims_by_stage = {}
    mats_by_stage = {}
    for r in range(1, stage_max + 1):
        X = koszul_complex(t, r, M)
        h = homology(X, i)
        dims_by_stage[r] = hilbert_function(h, window)
    from .complexes import map_with_coefficients

    for r in range(1, stage_max):
        base = koszul_transition(t, r, r + 1)
        src, tgt, parts = map_with_coefficients(base, M)
        f = induced_homology_map(parts, i, src, tgt)
        mats_by_stage[r] = {d: _piece_matrix(f, d) for d in range(lo, hi + 1)}
    entries = {
        (d, r): dims_by_stage[r][d] for r in dims_by_stage for d in range(lo, hi + 1)
    }
    stable_from, stabilized = _stabilization(
        window, dims_by_stage, mats_by_stage, stage_max, M.ring.field
    )
    return LocalCohomologyTable("koszul-colim", i, tuple(window), stage_max, entries, stable_from, stabilized)


def _ext_stage_complex(ring, t, n: int, M: FpModule, length: int):
    """Hom(resolution of R/t^n, M) as a ModuleComplex, plus the resolution.

    Stages use the sequence powers t^n = (t_1^n, .., t_mu^n) -- the system
    presenting the torsion functor -- which is cofinal with the ideal powers
    and reaches its colimit classes at earlier stages."""
    quot = FpModule.cyclic(ring, [p**n for p in t])
    Mm, mats = free_resolution(quot, length)
    frees = resolution_modules(Mm, mats)
    nodes = [hom_free_into(ft, M) for ft in frees]
    maps = []
    for p, d in enumerate(mats):
        mat = hom_differential(d, frees[p][1], frees[p + 1][1], M)
        maps.append(ModuleMap(nodes[p], nodes[p + 1], mat))
    return ModuleComplex(0, tuple(nodes), tuple(maps)), frees, mats


def _lift_resolution_comparison(ring, mats_big, mats_small, frees_big, frees_small):
    """Chain map (resolution of R/I^{n+1}) -> (resolution of R/I^n) lifting the
    identity on the covers; step-wise module lifts through the image."""
    phis = [FreeModuleMatrix.identity(ring, 1, frees_small[0][1])]
    prev = phis[0]
    for p in range(min(len(mats_big), len(mats_small))):
        d_small = mats_small[p]
        d_big = mats_big[p]
        target = prev @ d_big
        gb = submodule_gb(ring, d_small.columns(), d_small.rows)
        cols = []
        for j in range(target.cols):
            lift = gb.lift(target.column(j))
            if lift is None:
                raise AssertionError("resolution comparison lift failed")
            cols.append(lift)
        rows = [[cols[j][i2] for j in range(len(cols))] for i2 in range(d_small.cols)]
        phi = FreeModuleMatrix.build(
            ring, rows, frees_small[p + 1][1], frees_big[p + 1][1], ncols=len(cols)
        )
        phis.append(phi)
        prev = phi
    return phis


def local_cohomology_ext(M: FpModule, t, i: int, window, stage_max: int) -> LocalCohomologyTable:
    """H^i via the direct system Ext^i(R/(t)^n, M) along the power surjections."""
    if not M.graded:
        raise NotGraded("graded tables need a graded module")
    ring = M.ring
    t = tuple(t)
    lo, hi = window
    length = i + 1
    stage_data = {}
    for n in range(1, stage_max + 1):
        stage_data[n] = _ext_stage_complex(ring, t, n, M, length)
    dims_by_stage = {}
    for n, (mc, _, _) in ((n, stage_data[n]) for n in stage_data):
        h = homology(mc, i) if mc.lo <= i <= mc.hi else None
        dims_by_stage[n] = (
            hilbert_function(h, window) if h is not None else {d: 0 for d in range(lo, hi + 1)}
        )
    mats_by_stage = {}
    for n in range(1, stage_max):
        mc_small, frees_small, mats_small = stage_data[n]
        mc_big, frees_big, mats_big = stage_data[n + 1]
        phis = _lift_resolution_comparison(ring, mats_big, mats_small, frees_big, frees_small)
        if i < len(phis) and i <= mc_small.hi and i <= mc_big.hi:
            mat = hom_differential(phis[i], frees_small[i][1], frees_big[i][1], M)
            part = ModuleMap(mc_small.node(i), mc_big.node(i), mat)
            f = induced_homology_map({i: part}, i, mc_small, mc_big)
            mats_by_stage[n] = {d: _piece_matrix(f, d) for d in range(lo, hi + 1)}
        else:
            da, db = dims_by_stage[n], dims_by_stage[n + 1]
            mats_by_stage[n] = {
                d: ([[M.ring.field.zero] * da[d] for _ in range(db[d])], da[d], db[d])
                for d in range(lo, hi + 1)
            }
    entries = {
        (d, n): dims_by_stage[n][d] for n in dims_by_stage for d in range(lo, hi + 1)
    }
    stable_from, stabilized = _stabilization(
        window, dims_by_stage, mats_by_stage, stage_max, M.ring.field
    )
    return LocalCohomologyTable("ext-colim", i, tuple(window), stage_max, entries, stable_from, stabilized)


def local_cohomology_graded(
    M: FpModule, t, i: int, window, stage_max: int, method: str = "koszul-colim"
) -> LocalCohomologyTable:
    if method == "koszul-colim":
        return local_cohomology_koszul(M, t, i, window, stage_max)
    if method == "ext-colim":
        return local_cohomology_ext(M, t, i, window, stage_max)
    raise ValueError(f"unknown method {method!r}")
