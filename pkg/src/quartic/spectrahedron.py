"""The Gram spectrahedron of a nonnegative quartic and semidefinite optimization over it.

Gram matrices are parametrized by six free entries ``lambda``; every matrix
in the affine slice satisfies ``v^T G v = f`` identically.
"""

from __future__ import annotations

import math
import random
from contextlib import nullcontext
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import mpmath
import networkx as nx
import numpy as np

from .curve import TernaryQuartic
from .errors import ConvergenceError, DegenerateError, InfeasibleError
from .kernel.linalg import default_denominator_bound, nullspace, rank_with_tolerance, rationalize
from .kernel.roots import to_mp
from .kernel.tolerance import DEFAULT_PROFILE, ToleranceProfile

# positions (row, col, weight) of each lambda in the 6x6 matrix (upper triangle, mirrored)
_LAMBDA_SLOTS = (
    ((0, 1, 1), (3, 3, -2)),
    ((0, 2, 1), (4, 4, -2)),
    ((1, 2, 1), (5, 5, -2)),
    ((0, 5, 1), (3, 4, -1)),
    ((1, 4, 1), (3, 5, -1)),
    ((2, 3, 1), (4, 5, -1)),
)


def gram_param(f: TernaryQuartic, lam) -> list[list]:
    """The Gram matrix of ``f`` with free coordinates ``lam`` (exact for rational input)."""
    c = f.coefficient
    h = Fraction(1, 2)
    g = [[0] * 6 for _ in range(6)]

    def put(i, j, v):
        g[i][j] = v
        g[j][i] = v

    put(0, 0, c(4, 0, 0)); put(1, 1, c(0, 4, 0)); put(2, 2, c(0, 0, 4))
    put(3, 3, c(2, 2, 0)); put(4, 4, c(2, 0, 2)); put(5, 5, c(0, 2, 2))
    put(0, 3, h * c(3, 1, 0)); put(0, 4, h * c(3, 0, 1))
    put(1, 3, h * c(1, 3, 0)); put(1, 5, h * c(0, 3, 1))
    put(2, 4, h * c(1, 0, 3)); put(2, 5, h * c(0, 1, 3))
    put(3, 4, h * c(2, 1, 1)); put(3, 5, h * c(1, 2, 1)); put(4, 5, h * c(1, 1, 2))
    for value, slots in zip(lam, _LAMBDA_SLOTS):
        for i, j, w in slots:
            put(i, j, g[i][j] + w * value)
    return g


def lambda_of(gram) -> list:
    """Inverse of :func:`gram_param` on the free entries."""
    return [gram[0][1], gram[0][2], gram[1][2], gram[0][5], gram[1][4], gram[2][3]]


# -- numeric backends -------------------------------------------------------------------------

class _FloatBackend:
    name = "float64"

    def __init__(self):
        self.stop = 1e-11
        self.rank_ratio = 2.0 ** 13

    def num(self, v):
        return float(v)

    def inv(self, m):
        return np.linalg.inv(np.array(m, dtype=float)).tolist()

    def chol_ok(self, m) -> bool:
        try:
            np.linalg.cholesky(np.array(m, dtype=float))
            return True
        except np.linalg.LinAlgError:
            return False

    def eigvalsh(self, m):
        return sorted(np.linalg.eigvalsh(np.array(m, dtype=float)).tolist(), reverse=True)

    def solve(self, h, g):
        return np.linalg.solve(np.array(h, dtype=float), np.array(g, dtype=float)).tolist()

    def sqrt(self, v):
        return math.sqrt(v)


class _MpBackend:
    name = "mpmath"

    def __init__(self, profile: ToleranceProfile):
        self.stop = profile.eps_residual
        self.rank_ratio = mpmath.ldexp(1, profile.precision_bits // 4)

    def num(self, v):
        return to_mp(v)

    def inv(self, m):
        a = mpmath.matrix(m) ** -1
        return [[a[i, j] for j in range(len(m))] for i in range(len(m))]

    def chol_ok(self, m) -> bool:
        try:
            mpmath.cholesky(mpmath.matrix(m))
            return True
        except ValueError:
            return False

    def eigvalsh(self, m):
        return sorted(mpmath.eigsy(mpmath.matrix(m), eigvals_only=True), reverse=True)

    def solve(self, h, g):
        x = mpmath.lu_solve(mpmath.matrix(h), mpmath.matrix(g))
        return [x[i] for i in range(len(g))]

    def sqrt(self, v):
        return mpmath.sqrt(v)


def _backend(profile: ToleranceProfile):
    return _FloatBackend() if profile.precision_bits <= 53 else _MpBackend(profile)


# -- barrier method ----------------------------------------------------------------------------

def _slots_with_extra(n_extra_identity: bool):
    slots = [tuple((i, j, w) for i, j, w in s) for s in _LAMBDA_SLOTS]
    if n_extra_identity:
        slots.append(tuple((i, i, -1) for i in range(6)))
    return slots


def _assemble(base, x, slots):
    g = [row[:] for row in base]
    for value, sl in zip(x, slots):
        for i, j, w in sl:
            g[i][j] += w * value
            if i != j:
                g[j][i] += w * value
    return g


def _barrier_terms(s_inv, slots):
    """Gradient and Hessian of -log det at the current point."""
    def coeffs(sl):
        out = []
        for i, j, w in sl:
            out.append((i, j, w))
            if i != j:
                out.append((j, i, w))
        return out

    full = [coeffs(sl) for sl in slots]
    m = len(slots)
    grad = [-sum(w * s_inv[j][i] for i, j, w in full[k]) for k in range(m)]
    hess = [[0] * m for _ in range(m)]
    for k in range(m):
        for l in range(k, m):
            v = sum(wa * wb * s_inv[b][c] * s_inv[d][a] for a, b, wa in full[k] for c, d, wb in full[l])
            hess[k][l] = hess[l][k] = v
    return grad, hess


def _center(base, x, slots, weights, t, backend, max_steps=60):
    """Damped Newton for  min  -t * weights.x - log det F(x)."""
    for _ in range(max_steps):
        g = _assemble(base, x, slots)
        s_inv = backend.inv(g)
        grad, hess = _barrier_terms(s_inv, slots)
        grad = [gb - t * w for gb, w in zip(grad, weights)]
        step = backend.solve(hess, [-v for v in grad])
        dec2 = -sum(a * b for a, b in zip(step, grad))
        if dec2 < 0:
            dec2 = -dec2
        dec = backend.sqrt(dec2)
        alpha = 1 if dec < 0.25 else 1 / (1 + dec)
        while True:
            trial = [a + alpha * b for a, b in zip(x, step)]
            if backend.chol_ok(_assemble(base, trial, slots)):
                break
            alpha = alpha / 2
            if alpha < 1e-30:
                raise ConvergenceError("line search failed inside the barrier")
        x = trial
        if dec2 / 2 < backend.stop * 1e-3:
            break
    return x


@dataclass
class SdpResult:
    lambda_opt: list
    G_opt: list
    objective_value: object
    rank: int
    duality_gap: object
    eigenvalues: list
    lambda_exact: list | None = None
    backend: str = ""


def _rank_from_eigs(eigs, ratio) -> int:
    """Position of the largest ratio between consecutive eigenvalues, if it exceeds ``ratio``."""
    eigs = [abs(e) for e in eigs]
    best, best_ratio = len(eigs), ratio
    for k in range(len(eigs) - 1):
        if eigs[k + 1] == 0:
            return k + 1
        if eigs[k] / eigs[k + 1] > best_ratio:
            best, best_ratio = k + 1, eigs[k] / eigs[k + 1]
    return best


def _phase_one(base, backend):
    """A strictly feasible lambda, or InfeasibleError."""
    eigs = backend.eigvalsh(base)
    if eigs[-1] > 0:
        return [backend.num(0)] * 6
    slots = _slots_with_extra(True)
    t0 = eigs[-1] - 1
    x = [backend.num(0)] * 6 + [backend.num(t0)]
    weights = [0] * 6 + [1]
    t = backend.num(1)
    for _ in range(200):
        x = _center(base, x, slots, weights, t, backend)
        if x[6] > 0:
            return x[:6]
        if 7 / t < backend.stop:
            break
        t = t * 4
    raise InfeasibleError("f not a sum of squares (Gram spectrahedron is empty)")


def sdp_maximize(f: TernaryQuartic, objective, profile: ToleranceProfile = DEFAULT_PROFILE,
                 start=None) -> SdpResult:
    """Maximize ``objective . lambda`` over the Gram spectrahedron by a log-det barrier method.

    Profiles with at most 53 bits run in float64; others in mpmath.
    """
    backend = _backend(profile)
    ctx = profile.workprec() if backend.name == "mpmath" else nullcontext()
    with ctx:
        # work with f / norm so the barrier sees O(1) data; lambda scales the same way
        norm = backend.num(max(abs(v) for v in f.coefficients))
        base = [[backend.num(v) / norm for v in row] for row in gram_param(f, [0] * 6)]
        weights = [backend.num(c) for c in objective]
        x = ([backend.num(v) / norm for v in start] if start is not None
             else _phase_one(base, backend))
        slots = _slots_with_extra(False)
        scale = max(1, max(abs(w) for w in weights))
        t = backend.num(1) / scale
        while True:
            x = _center(base, x, slots, weights, t, backend)
            gap = 6 / t
            if gap < backend.stop:
                break
            t = t * 4
        eigs = backend.eigvalsh(_assemble(base, x, slots))
        rank = _rank_from_eigs(eigs, backend.rank_ratio)
        x = [v * norm for v in x]
        eigs = [v * norm for v in eigs]
        gap = gap * norm
        g = _assemble([[backend.num(v) for v in row] for row in gram_param(f, [0] * 6)], x, slots)
        value = sum(w * v for w, v in zip(weights, x))
        exact = None
        if backend.name == "mpmath":
            bound = default_denominator_bound(profile)
            cands = [rationalize(v, bound, profile) for v in x]
            if all(q is not None for q in cands):
                exact = cands
        return SdpResult(x, g, value, rank, gap, eigs, exact, backend.name)


# -- vertices, the Steiner graph and rank statistics -------------------------------------------

def steiner_grams(f: TernaryQuartic, rep=None, profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0):
    """The 63 rank-3 Gram matrices of ``f`` and the conjugation of the octad they were built from.

    Without ``rep`` a determinantal representation is built by Dixon's method.
    """
    from .bitangents import compute_bitangents
    from .dixon import dixon_detrep
    from .octad import bitangent_matrix, cayley_octad
    from .steiner import all_63_grams

    bitangents = compute_bitangents(f, profile, seed=seed)
    if rep is None:
        rep = dixon_detrep(f, profile, seed=seed, bitangents=bitangents)
    octad = cayley_octad(rep, profile, seed=seed)
    bm = bitangent_matrix(rep, octad, bitangents, profile)
    return all_63_grams(f, bm, profile), octad.conjugation


def rank3_vertices(f_or_grams, conjugation=None, rep=None,
                   profile: ToleranceProfile = DEFAULT_PROFILE, seed: int = 0) -> list:
    """The real PSD Gram matrices among the 63; there must be exactly 8.

    Accepts a quartic or its 63 Gram matrices.  When the octad conjugation is
    fixed-point free, the labels are checked to be the 4-sets fixed by it
    that split every conjugate pair.
    """
    if isinstance(f_or_grams, TernaryQuartic):
        grams, conjugation = steiner_grams(f_or_grams, rep, profile, seed)
    else:
        grams = f_or_grams
    psd = [g for g in grams if g.is_psd]
    if len(psd) != 8:
        raise DegenerateError(f"expected 8 real PSD rank-3 Gram matrices, found {len(psd)}")
    if conjugation is not None and all(conjugation[i] != i for i in range(8)):
        expected = set(psd_labels(conjugation))
        got = {g.complex_label.label for g in psd}
        if got != expected:
            raise DegenerateError("PSD vertices do not carry the expected Steiner labels")
    return psd


def psd_labels(conjugation) -> list[tuple]:
    """4-sets containing label 0 that contain exactly one point of each conjugate pair."""
    pairs = {tuple(sorted((i, conjugation[i]))) for i in range(8)}
    out = []
    for part in combinations(range(8), 4):
        if 0 in part and all(len(set(p) & set(part)) == 1 for p in pairs):
            out.append(part)
    return out


def k4_rows(conjugation) -> list[list[tuple]]:
    """Split the eight PSD labels into the two rows whose members pairwise share two points."""
    labels = psd_labels(conjugation)
    graph = nx.Graph()
    graph.add_nodes_from(labels)
    for a, b in combinations(labels, 2):
        if len(set(a) & set(b)) == 2:
            graph.add_edge(a, b)
    return [sorted(c) for c in sorted(nx.connected_components(graph), key=min)]


@dataclass
class SteinerGraph:
    graph: nx.Graph
    edge_ranks: dict = field(default_factory=dict)

    @property
    def components(self) -> list:
        return [sorted(c) for c in nx.connected_components(self.graph)]

    def is_two_k4(self) -> bool:
        comps = list(nx.connected_components(self.graph))
        return (len(comps) == 2 and all(len(c) == 4 for c in comps)
                and all(self.graph.subgraph(c).number_of_edges() == 6 for c in comps))


def _as_mp(g):
    return [[to_mp(v) for v in row] for row in g]


def steiner_graph(f_or_vertices, profile: ToleranceProfile = DEFAULT_PROFILE) -> SteinerGraph:
    """Edges between PSD vertices whose sum has rank at most 5, labelled by that rank.

    The rank of ``G + G'`` is the rank at the midpoint of the segment.
    """
    vertices = (rank3_vertices(f_or_vertices, profile=profile)
                if isinstance(f_or_vertices, TernaryQuartic) else f_or_vertices)
    with profile.workprec():
        graph = nx.Graph()
        names = [v.complex_label.name for v in vertices]
        graph.add_nodes_from(names)
        ranks = {}
        for (a, ga), (b, gb) in combinations(zip(names, vertices), 2):
            s = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(_as_mp(ga.G), _as_mp(gb.G))]
            r = rank_with_tolerance(s, profile)
            if r <= 5:
                graph.add_edge(a, b)
                ranks[(a, b)] = r
        return SteinerGraph(graph, ranks)


def sum_kernel(ga, gb, profile: ToleranceProfile = DEFAULT_PROFILE) -> list:
    """Basis of the kernel of ``G + G'``."""
    with profile.workprec():
        s = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(_as_mp(ga.G), _as_mp(gb.G))]
        return nullspace(s, profile)


def random_positive_quartic(rng: random.Random, scale: int = 100) -> TernaryQuartic:
    """Sum of six squares of quadrics with rounded Gaussian integer coefficients."""
    from .kernel.poly import MPoly
    from .steiner import GRAM_BASIS

    while True:
        total = MPoly({})
        for _ in range(6):
            q = MPoly({e: round(rng.gauss(0, 1) * scale) for e in GRAM_BASIS})
            total = total + q * q
        f = TernaryQuartic.from_poly(total)
        if f.is_smooth():
            return f


@dataclass
class RankSample:
    f: TernaryQuartic
    objective: list
    result: SdpResult
    steiner_distance: float | None = None  # rank-3 optima: relative distance to the nearest Steiner vertex


@dataclass
class RankStatistics:
    counts: dict
    samples: list

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def fraction(self, rank: int) -> float:
        return self.counts.get(rank, 0) / max(self.total, 1)


def _one_sample(seed: int, profile: ToleranceProfile) -> RankSample:
    rng = random.Random(seed)
    f = random_positive_quartic(rng)
    objective = [rng.gauss(0, 1) for _ in range(6)]
    return RankSample(f, objective, sdp_maximize(f, objective, profile))


def steiner_distance(sample: RankSample, profile: ToleranceProfile = DEFAULT_PROFILE) -> float:
    """Relative max-entry distance from a rank-3 optimum to the nearest real PSD Steiner Gram matrix."""
    grams, _ = steiner_grams(sample.f, profile=profile)
    opt = sample.result.G_opt
    size = max(abs(float(v)) for row in opt for v in row)
    return min(max(abs(float(mpmath.re(a)) - float(b)) for ra, rb in zip(g.G, opt) for a, b in zip(ra, rb))
               for g in grams if g.is_psd) / size


def rank_statistics(n_samples: int, seed: int = 0,
                    profile: ToleranceProfile = ToleranceProfile(precision_bits=53),
                    match_steiner: bool = False, workers: int = 1,
                    steiner_profile: ToleranceProfile = DEFAULT_PROFILE) -> RankStatistics:
    """Optimal ranks for random Gaussian objectives over random positive quartics.

    Sample ``k`` uses the seed ``seed + k``, so results do not depend on
    ``workers``.  With ``match_steiner`` every rank-3 optimum is compared with
    the Steiner Gram matrices of its quartic.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    seeds = range(seed, seed + n_samples)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        from functools import partial

        with ProcessPoolExecutor(workers) as pool:
            samples = list(pool.map(partial(_one_sample, profile=profile), seeds))
    else:
        samples = [_one_sample(s, profile) for s in seeds]
    counts = {3: 0, 4: 0, 5: 0}
    for sample in samples:
        counts[sample.result.rank] = counts.get(sample.result.rank, 0) + 1
        if match_steiner and sample.result.rank == 3:
            sample.steiner_distance = steiner_distance(sample, steiner_profile)
    return RankStatistics(counts, samples)
