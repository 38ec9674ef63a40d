"""Adic completion towers, the local homology tower verifier, and the
finite-level hom-tensor adjunction checker.

Completions are never materialized; the inverse system of stages with its
verified surjections is the official representation, and every comparison is
tower-level.  The flat inputs of the tower verifier are restricted to free
modules (finitely presented flat at desk scale), which also makes the
Mittag-Leffler bookkeeping exact: component images are twisted principal
submodules whose graded pieces vanish predictably.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadBounds, NotGraded
from .complexes import (
    ComplexMap,
    FreeComplex,
    hom_complex,
    hom_map,
    homology,
    homology_data,
    induced_homology_map,
    is_chain_isomorphism,
    map_with_coefficients,
    tensor_complexes,
    tensor_map,
)
from .groebner import FreeModuleMatrix, Ideal
from .koszul import KoszulTower, koszul_transition, _koszul_subsets
from .localcoh import (
    EssentialNullityCertificate,
    essential_nullity_check,
    ideal_power_gens,
)
from .modules import (
    FpModule,
    ModuleMap,
    cokernel_presentation,
    hilbert_function,
    verify_isomorphism,
)
from .ring import RingDescriptor, monomials_of_degree


@dataclass(frozen=True)
class AdicTower:
    """Stages M/I^n M with their verified surjective transitions."""

    module: FpModule
    ideal: Ideal
    n_max: int
    stages: tuple  # stages[n-1] = M/I^n M
    transitions: tuple  # transitions[n-1]: stage n+1 -> stage n

    def stage(self, n: int) -> FpModule:
        return self.stages[n - 1]

    def transition(self, n: int) -> ModuleMap:
        """M/I^{n+1} M -> M/I^n M."""
        return self.transitions[n - 1]

    def hilbert(self, n: int, window) -> dict:
        return hilbert_function(self.stage(n), window)


def _quotient_by_ideal_power(M: FpModule, gens) -> FpModule:
    ring = M.ring
    z = ring.zero()
    cols = [c for c in M.relations.columns()]
    for g in gens:
        for i in range(M.cover_rank):
            col = [z] * M.cover_rank
            col[i] = g
            cols.append(col)
    return FpModule.make(
        ring, M.cover_twists, cols, cover_rank=M.cover_rank, quotient=M.quotient
    )


def adic_tower(M: FpModule, I: Ideal, n_max: int) -> AdicTower:
    if n_max < 1:
        raise BadBounds("n_max must be positive")
    stages = []
    for n in range(1, n_max + 1):
        stages.append(_quotient_by_ideal_power(M, ideal_power_gens(list(I.generators), n)))
    transitions = []
    for n in range(1, n_max):
        f = ModuleMap(
            stages[n],
            stages[n - 1],
            FreeModuleMatrix.identity(M.ring, M.cover_rank, M.cover_twists),
        )
        C, _ = cokernel_presentation(f)
        if not C.is_zero():
            raise AssertionError("adic transition failed surjectivity check")
        transitions.append(f)
    return AdicTower(M, I, n_max, tuple(stages), tuple(transitions))


def total_dimension(M: FpModule):
    """(total k-dimension, top degree) for a graded Artinian module, or None
    when some staircase is infinite."""
    if not M.graded:
        raise NotGraded("total dimension needs a graded module")
    leads = M.relations_gb().lead_terms()
    ring = M.ring
    n = ring.nvars
    tops = []
    for pos in range(M.cover_rank):
        bound = 0
        for j in range(n):
            pures = [
                m[j]
                for (p, m) in leads
                if p == pos and all(m[k] == 0 for k in range(n) if k != j)
            ]
            if not pures:
                return None
            bound += (min(pures) - 1) * ring.weights[j]
        tops.append(M.cover_twists[pos] + bound)
    if not tops:
        return 0, 0
    lo = min(M.cover_twists)
    hi = max(tops)
    total = sum(hilbert_function(M, (lo, hi)).values())
    return total, hi


# -- local homology tower (Prop 4.1 shadow) --------------------------------------------


@dataclass(frozen=True)
class MLComponentBound:
    subset: tuple  # factor indices sigma with degree-1 slots
    kind: str  # "identity" | "unit" | "vanishing"
    witness_offset: int  # image of stage s is stationary once s - r >= this


@dataclass(frozen=True)
class MLReport:
    """Degreewise Mittag-Leffler witnesses for the raw Hom towers: for each
    cohomological degree n and stage r, a bound s(r) past which the window's
    image chain is stationary (identity/unit components immediately, the rest
    once their twisted images leave the window)."""

    window: tuple
    bounds: dict  # n -> tuple of MLComponentBound
    witness: dict  # (n, r) -> s(r)
    verified: bool


@dataclass(frozen=True)
class LocalHomologyReport:
    sequence: tuple
    module: FpModule
    r_max: int
    h0_isos: dict  # r -> True (verified H^0 = P/t^r P)
    square_checks: dict  # r -> True (tower square with the adic surjections)
    nullity: dict  # i -> EssentialNullityCertificate
    ml: MLReport
    verdict: str  # "Prop-4.1-consistent up to bounds" | "inconsistent" | "undecided"


def sequence_power_quotient(P: FpModule, t, r: int) -> FpModule:
    return _quotient_by_ideal_power(P, [p**r for p in t])


def _ml_analysis(t, P: FpModule, r_max: int, window) -> MLReport:
    """Exact image bookkeeping for the free-coefficient Hom towers.

    Component sigma of Hom^{-|sigma|} is P twisted by r*deg(t_sigma); the
    transition from stage s multiplies by t_sigma^{s-r}.  Pieces of the image
    in a fixed degree vanish once (s-r)*deg(t_sigma) clears the window, and
    unit components are isomorphisms at every stage."""
    ring = P.ring
    if not P.graded:
        raise NotGraded("ML bookkeeping needs a graded module")
    degs = [p.homogeneous_degree() for p in t]
    if any(d is None for d in degs):
        raise NotGraded("ML bookkeeping needs homogeneous sequence entries")
    lo, hi = window
    mu = len(t)
    subsets = _koszul_subsets(mu)
    bounds = {}
    witness = {}
    verified = True
    for n in range(-mu, 1):
        comps = []
        worst = 1
        for sigma in subsets[-n]:
            d_sigma = sum(degs[j] for j in sigma)
            if not sigma:
                comps.append(MLComponentBound((), "identity", 0))
                continue
            if d_sigma == 0:
                comps.append(MLComponentBound(tuple(sigma), "unit", 0))
                continue
            # image piece in degree d at stage r: R_{d - a_k - s*d_sigma} per
            # cover generator a_k; stationary (zero) once s exceeds the bound
            off = 0
            for a in P.cover_twists:
                need = (hi - a) // d_sigma + 1
                off = max(off, need)
            comps.append(MLComponentBound(tuple(sigma), "vanishing", off))
            worst = max(worst, off)
        bounds[n] = tuple(comps)
        for r in range(1, r_max + 1):
            s_r = max(r + 1, worst)
            witness[(n, r)] = s_r
            # verify stationarity at s_r and s_r + 1 for vanishing components
            for comp in comps:
                if comp.kind != "vanishing":
                    continue
                d_sigma = sum(degs[j] for j in comp.subset)
                for s in (s_r, s_r + 1):
                    for a in P.cover_twists:
                        for d in range(lo, hi + 1):
                            if d - a - s * d_sigma >= 0:
                                verified = False
    return MLReport(tuple(window), bounds, witness, verified)


def local_homology_tower(t, P: FpModule, r_max: int, s_max: int | None = None, window=None) -> LocalHomologyReport:
    """The Prop-4.1 verifier for free P: (a) stage isomorphisms
    H^0 Hom(K(t^r), P) = P/t^r P compatible with the power-quotient tower,
    (b) pro-zero higher local homology, (c) ML for the raw Hom towers."""
    t = tuple(t)
    if r_max < 2:
        raise BadBounds("r_max must be at least 2")
    if P.relations.cols != 0:
        raise ValueError("flat inputs are restricted to free modules (zero relations)")
    if s_max is None:
        s_max = r_max + 4
    ring = P.ring
    tower = KoszulTower(t, direction="dual-inverse", coefficients=P)
    h0_isos = {}
    isos = {}
    for r in range(1, r_max + 1):
        quo = sequence_power_quotient(P, t, r)
        h = homology_data(tower.stage(r), 0)
        can = ModuleMap(
            quo,
            h.module,
            FreeModuleMatrix.identity(ring, P.cover_rank, P.cover_twists),
        )
        v = verify_isomorphism(can)
        h0_isos[r] = bool(v)
        isos[r] = can
    square_checks = {}
    for r in range(1, r_max):
        src, tgt, parts = tower.transition(r, r + 1)
        h_trans = induced_homology_map(parts, 0, src, tgt)
        surj = ModuleMap(
            sequence_power_quotient(P, t, r + 1),
            sequence_power_quotient(P, t, r),
            FreeModuleMatrix.identity(ring, P.cover_rank, P.cover_twists),
        )
        lhs = h_trans.after(isos[r + 1])
        rhs = isos[r].after(surj)
        square_checks[r] = lhs.equals(rhs)
    nullity = {}
    for i in range(1, len(t) + 1):
        nullity[i] = essential_nullity_check(t, P, i, r_max, s_max)
    if window is None and P.graded:
        top = max(P.cover_twists) + 2 * r_max
        window = (min(P.cover_twists), top)
    ml = _ml_analysis(t, P, r_max, window)
    ok_a = all(h0_isos.values()) and all(square_checks.values())
    ok_b = all(cert.essentially_null for cert in nullity.values())
    if ok_a and ok_b and ml.verified:
        verdict = "Prop-4.1-consistent up to bounds"
    elif any(cert.verdict == "undecided" for cert in nullity.values()):
        verdict = "undecided"
    else:
        verdict = "inconsistent"
    return LocalHomologyReport(t, P, r_max, h0_isos, square_checks, nullity, ml, verdict)


# -- finite-level adjunction ---------------------------------------------------------


@dataclass(frozen=True)
class AdjunctionStage:
    stage: int
    iso: bool
    ranks: tuple  # per-degree ranks of the two sides


@dataclass(frozen=True)
class DualityReport:
    stages: tuple  # AdjunctionStage per r
    naturality: dict  # (r, r+1) -> bool
    passed: bool


def adjunction_map(K: FreeComplex, E: FreeComplex, F: FreeComplex) -> ComplexMap:
    """The canonical chain isomorphism
    Hom(K (x) E, F) -> Hom(E, Hom(K, F)),  phi -> (e -> (k -> (-1)^{|e||k|} phi(k (x) e))).
    """
    from .complexes import _hom_blocks, _tensor_blocks

    T = tensor_complexes(K, E)
    A = hom_complex(T, F)
    HKF = hom_complex(K, F)
    B = hom_complex(E, HKF)
    ring = K.ring
    z = ring.zero()
    one = ring.one()
    parts = {}
    for n in range(min(A.lo, B.lo), max(A.hi, B.hi) + 1):
        if A.rank(n) == 0 and B.rank(n) == 0:
            continue
        mat = [[z] * A.rank(n) for _ in range(B.rank(n))]
        ablocks, _ = _hom_blocks(T, F, n)
        aoff = dict(ablocks)
        bblocks, _ = _hom_blocks(E, HKF, n)
        boff = dict(bblocks)
        for m, off_m in ablocks:
            tblocks, _ = _tensor_blocks(K, E, m)
            rF = F.rank(m + n)
            if rF == 0:
                continue
            for p, q, toff in tblocks:
                rK, rE = K.rank(p), E.rank(q)
                sgn = -one if (p * q) % 2 else one
                if q not in boff:
                    continue
                # B index: block q (E-degree), e-index j major, then the
                # position of (p; i, l) inside Hom(K, F)^{q+n}
                hkf_blocks, _ = _hom_blocks(K, F, q + n)
                hkf_off = dict(hkf_blocks)
                if p not in hkf_off:
                    continue
                rHKF = HKF.rank(q + n)
                for i in range(rK):
                    for j in range(rE):
                        for l in range(rF):
                            a_idx = off_m + (toff + i * rE + j) * rF + l
                            b_idx = boff[q] + j * rHKF + (hkf_off[p] + i * rF + l)
                            mat[b_idx][a_idx] = sgn
        parts[n] = FreeModuleMatrix.build(
            ring, mat, B.twist(n), A.twist(n), ncols=A.rank(n)
        )
    return ComplexMap.build(A, B, parts)


def gm_adjunction_check(E: FreeComplex, F: FreeComplex, t, r_range) -> DualityReport:
    """Exact chain isomorphism at each Koszul stage, with commuting naturality
    squares between consecutive stages."""
    from .koszul import koszul_complex

    t = tuple(t)
    r_lo, r_hi = r_range
    if r_lo < 1 or r_hi < r_lo:
        raise BadBounds("bad stage range")
    stages = []
    lams = {}
    sides = {}
    for r in range(r_lo, r_hi + 1):
        K = koszul_complex(t, r)
        lam = adjunction_map(K, E, F)
        ok = is_chain_isomorphism(lam)
        ranks = tuple(lam.source.rank(n) for n in lam.source.degrees())
        stages.append(AdjunctionStage(r, bool(ok), ranks))
        lams[r] = lam
        sides[r] = K
    naturality = {}
    for r in range(r_lo, r_hi):
        T = koszul_transition(t, r, r + 1)
        idE = ComplexMap.identity(E)
        idF = ComplexMap.identity(F)
        a_side = hom_map(tensor_map(T, idE), idF)  # A_{r+1} -> A_r
        b_side = hom_map(T, idF)  # Hom(K_{r+1},F) -> Hom(K_r,F)
        b_side = hom_map(idE, b_side)  # B_{r+1} -> B_r
        lhs = lams[r].after(a_side)
        rhs = b_side.after(lams[r + 1])
        naturality[(r, r + 1)] = lhs.equals(rhs)
    passed = all(s.iso for s in stages) and all(naturality.values())
    return DualityReport(tuple(stages), naturality, passed)
