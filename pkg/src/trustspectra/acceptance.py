"""Exit criteria for the library, runnable without pytest (``trustspectra selftest``).

Each check returns a :class:`CriterionResult`; tolerances are fixed here.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import fixtures as fx
from .concepts import concept_spectrum, decompose_edge, qualified_matrix, reconstruct
from .linalg import bidiagonalize, svd, top_singular_pair, warm_up
from .recommend import rank_trustees
from .similarity import Ray, morphism_violation_report, similarity_map_F


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


def _worked_decomposition():
    m = fx.worked_example_block()
    return m, svd(m, tol=fx.WORKED_EXAMPLE_TOL)


def _match_up_to_sign(computed, reference):
    """Largest entrywise gap after choosing the best sign per column."""
    worst = 0.0
    for k in range(reference.shape[1]):
        gap = min(np.abs(computed[:, k] - s * reference[:, k]).max() for s in (1.0, -1.0))
        worst = max(worst, gap)
    return worst


def worked_example_svd():
    m = fx.worked_example_block()
    start = time.perf_counter()
    warm_up()
    compile_time = time.perf_counter() - start
    start = time.perf_counter()
    d = svd(m, tol=fx.WORKED_EXAMPLE_TOL)
    elapsed = time.perf_counter() - start
    lam_gap = np.abs(d.lambdas - fx.REFERENCE_LAMBDAS).max() if d.rank == 2 else np.inf
    u_gap = _match_up_to_sign(d.u, fx.REFERENCE_U) if d.rank == 2 else np.inf
    v_gap = _match_up_to_sign(d.v, fx.REFERENCE_V) if d.rank == 2 else np.inf
    ok = d.rank == 2 and lam_gap <= 0.02 and u_gap <= 0.05 and v_gap <= 0.05 and elapsed < 1.0
    return CriterionResult(
        1, "worked example SVD", bool(ok),
        f"lambdas={np.round(d.lambdas, 4).tolist()} |dlam|={lam_gap:.4f} "
        f"|dU|={u_gap:.4f} |dV|={v_gap:.4f} time={elapsed:.3f}s "
        f"(kernel warm-up {compile_time:.2f}s)",
    )


def qualified_matrices():
    m, d = _worked_decomposition()
    cs = concept_spectrum(d, m)
    f1, f2 = (qualified_matrix(c).values for c in cs)
    g1 = np.abs(f1 - fx.REFERENCE_F1).max()
    g2 = np.abs(f2 - fx.REFERENCE_F2).max()
    gsum = np.abs((f1 + f2) - d.v @ d.u.T).max()
    ok = g1 <= 0.02 and g2 <= 0.02 and gsum <= 1e-12
    return CriterionResult(
        2, "qualified matrices", bool(ok),
        f"|dF1|={g1:.4f} |dF2|={g2:.4f} |F1+F2-VU^T|={gsum:.1e}",
    )


def edge_decomposition():
    _, d = _worked_decomposition()
    full = reconstruct(d)
    ci = decompose_edge(d, "c", "i")
    dk = decompose_edge(d, "d", "k")
    r_ci = np.array([r for _, r in ci.components])
    r_dk = np.array([r for _, r in dk.components])
    g_ci = np.abs(r_ci - [1.245, -0.12]).max()
    g_dk = np.abs(r_dk - [0.0, -0.56]).max()
    s_ci = abs(r_ci.sum() - full[d.row_ids.index("i"), d.col_ids.index("c")])
    s_dk = abs(r_dk.sum() - full[d.row_ids.index("k"), d.col_ids.index("d")])
    ok = g_ci <= 0.02 and g_dk <= 0.02 and s_ci <= 1e-12 and s_dk <= 1e-12
    return CriterionResult(
        3, "edge decomposition", bool(ok),
        f"(c,i)={np.round(r_ci, 4).tolist()} (d,k)={np.round(r_dk, 4).tolist()} "
        f"sum gaps={max(s_ci, s_dk):.1e}",
    )


def counterexample():
    m = fx.worked_example_block()
    phi, psi = fx.COUNTEREXAMPLE_PAIR
    (rec,) = morphism_violation_report(m, [(Ray(phi), Ray(psi))])
    margin = rec.s_before - rec.s_after
    ok = rec.violated and margin >= 0.3
    return CriterionResult(
        4, "counterexample reproduction", bool(ok),
        f"s_before={rec.s_before:.4f} s_after={rec.s_after:.4f} margin={margin:.4f}",
    )


def _random_shape(rng, max_rows, max_cols):
    return int(rng.integers(1, max_rows + 1)), int(rng.integers(1, max_cols + 1))


def engine_invariants(n_matrices=200, seed=2024):
    rng = np.random.default_rng(seed)
    worst_rec = worst_orth = worst_lam = 0.0
    worst_ray = 1.0
    start = time.perf_counter()
    for _ in range(n_matrices):
        a = rng.standard_normal(_random_shape(rng, 60, 40))
        gk = svd(a, method="golub-kahan")
        jc = svd(a, method="jacobi")
        norm = np.linalg.norm(a)
        for d in (gk, jc):
            worst_rec = max(worst_rec, np.linalg.norm(a - d.reconstruct()) / norm)
            eye = np.eye(d.rank)
            worst_orth = max(worst_orth, np.abs(d.u.T @ d.u - eye).max(),
                             np.abs(d.v.T @ d.v - eye).max())
        r = min(gk.rank, jc.rank)
        if gk.rank != jc.rank:
            worst_lam = np.inf
        lam = gk.lambdas[:r]
        worst_lam = max(worst_lam, (np.abs(lam - jc.lambdas[:r]) / lam).max(initial=0.0))
        for k in range(r):
            gaps = [abs(lam[k] - lam[j]) / max(lam[k], lam[j]) for j in (k - 1, k + 1)
                    if 0 <= j < r]
            if min(gaps, default=np.inf) < 1e-3:
                continue
            worst_ray = min(worst_ray, abs(gk.u[:, k] @ jc.u[:, k]), abs(gk.v[:, k] @ jc.v[:, k]))
    elapsed = time.perf_counter() - start
    ok = (worst_rec <= 1e-8 and worst_orth <= 1e-10 and worst_lam <= 1e-8
          and worst_ray >= 1 - 1e-8 and elapsed < 30)
    return CriterionResult(
        5, "engine invariants", bool(ok),
        f"{n_matrices} matrices: recon={worst_rec:.1e} orth={worst_orth:.1e} "
        f"dlam={worst_lam:.1e} min|<u,u'>|={worst_ray:.12f} time={elapsed:.2f}s",
    )


def span_preservation(n_rays=1000, seed=7):
    _, d = _worked_decomposition()
    rng = np.random.default_rng(seed)
    rays = [Ray(d.u @ rng.standard_normal(d.rank)) for _ in range(n_rays)]
    images = [similarity_map_F(d, p) for p in rays]
    before = np.abs(np.array([p.direction for p in rays]) @ np.array([p.direction for p in rays]).T)
    after = np.abs(np.array([q.direction for q in images]) @ np.array([q.direction for q in images]).T)
    worst = np.abs(np.clip(before, 0, 1) - np.clip(after, 0, 1)).max()
    f = d.v @ d.u.T
    report = morphism_violation_report(f, [(rays[i], rays[(i + 1) % n_rays]) for i in range(n_rays)])
    violations = sum(r.violated for r in report)
    ok = worst <= 1e-10 and violations == 0
    return CriterionResult(
        6, "similarity preservation on span(U)", bool(ok),
        f"{n_rays} rays: max |s - s'|={worst:.1e}, violations={violations}",
    )


def power_iteration(n_matrices=50, seed=11):
    rng = np.random.default_rng(seed)
    cases = [fx.worked_example_block().values]
    while len(cases) < n_matrices:
        a = rng.standard_normal(_random_shape(rng, 100, 40))
        s = np.linalg.svd(a, compute_uv=False)
        if s.size < 2 or s[0] / s[1] >= 1.001:
            cases.append(a)
    worst = 0.0
    fixture_lam = None
    for a in cases:
        lam, _, _ = top_singular_pair(a, max_iters=200000, seed=seed)
        ref = svd(a).lambdas[0]
        worst = max(worst, abs(lam - ref))
        if fixture_lam is None:
            fixture_lam = lam
    ok = worst <= 1e-6 and abs(fixture_lam - 3) <= 1e-3
    return CriterionResult(
        7, "power iteration", bool(ok),
        f"{len(cases)} matrices: max |lam_power - lam_svd|={worst:.1e}, fixture lam={fixture_lam:.6f}",
    )


def recommendations():
    m, d = _worked_decomposition()
    d10 = svd(m.scaled(10.0), tol=10 * fx.WORKED_EXAMPLE_TOL)
    food = rank_trustees(d, "b", 2)
    guns = rank_trustees(d, "b", 1)
    order = lambda rec: [o for o, _ in rec.ranking]
    invariant = all(
        order(rank_trustees(d, s, k)) == order(rank_trustees(d10, s, k))
        for s in d.col_ids for k in (1, 2)
    )
    ok = food.best == "k" and guns.best == "i" and invariant
    return CriterionResult(
        8, "recommendations", bool(ok),
        f"b/concept2 -> {order(food)}, b/concept1 -> {order(guns)}, scale-invariant={invariant}",
    )


def desk_scale(seed=5):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((1000, 500))
    start = time.perf_counter()
    d = svd(a)
    elapsed = time.perf_counter() - start
    rec = np.linalg.norm(a - d.reconstruct()) / np.linalg.norm(a)

    def bidiag_time(rows):
        b = rng.standard_normal((rows, 500))
        times = []
        for _ in range(3):
            t = time.perf_counter()
            bidiagonalize(b, full=False)
            times.append(time.perf_counter() - t)
        return min(times)

    t1, t2 = bidiag_time(1000), bidiag_time(2000)
    ratio = t2 / t1
    ok = elapsed < 60 and rec <= 1e-8 and d.rank == 500 and 1.5 <= ratio <= 3
    return CriterionResult(
        9, "desk-scale performance", bool(ok),
        f"1000x500 svd {elapsed:.2f}s recon={rec:.1e}; bidiag 1000->2000 rows "
        f"{t1:.2f}s->{t2:.2f}s ratio={ratio:.2f}",
    )


CRITERIA = (
    worked_example_svd,
    qualified_matrices,
    edge_decomposition,
    counterexample,
    engine_invariants,
    span_preservation,
    power_iteration,
    recommendations,
    desk_scale,
)


def run_all(skip=()):
    return [check() for check in CRITERIA if check.__name__ not in skip]
