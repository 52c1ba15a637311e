"""Randomised invariant suites.

Every check records a residual against a threshold in a :class:`Tally`;
the suites are deterministic for a fixed seed. Checks are grouped by
subject and each group draws its own sample counts from ``trials``.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kato as K
from .linalg import (
    Inclusion,
    QArray,
    SubspaceBasis,
    adjoint,
    block_diag,
    gauges,
    inner_product,
    inverse_matrix,
    kernel_basis,
    matrix_power,
    random_qmatrix,
    random_qvector,
    random_unitary,
    range_basis,
    subspace_combine,
    subspace_compare,
    subspace_distance,
)
from .models import (
    MODEL_KINDS,
    POLLUTION_DISCLAIMER,
    bilateral_shift,
    diagonal,
    model_membership,
    truncate,
    truncation_report,
    unilateral_shift,
    weighted_shift,
)
from .quaternion import EigenSphere, ImaginaryUnit, I_UNIT, J_UNIT, Quaternion, beta, sphere_of
from .slice_regular import (
    RightPowerSeries,
    dbar_residual,
    local_resolvent_eval,
    local_spectral_subspace,
    local_spectrum,
    root_subspaces,
    series_eval,
    slice_derivative,
    slice_difference_quotient,
    svep_report,
)
from .spectrum import (
    MEMBERSHIP_KINDS,
    Verdict,
    classify,
    hausdorff_distance,
    lower_index,
    numerical_resolvent,
    power_estimates,
    power_factorization_residual,
    pseudo_resolvent,
    resolvent_apply,
    right_eigenpairs,
    s_spectrum,
    spectral_radius,
    spectral_spheres,
)

__all__ = ["Tally", "Context", "SUITES", "GROUPS", "run_suite", "run_group", "random_matrix", "crafted_operators"]


@dataclass
class Row:
    name: str
    tol: float
    total: int = 0
    passed: int = 0
    worst: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total


@dataclass
class Tally:
    rows: dict = field(default_factory=dict)

    def check(self, name: str, residual: float, tol: float) -> bool:
        row = self.rows.setdefault(name, Row(name, tol))
        ok = bool(residual <= tol)  # NaN fails
        row.total += 1
        row.passed += ok
        if not (residual <= row.worst):
            row.worst = float(residual)
        return ok

    def expect(self, name: str, ok: bool) -> bool:
        """Boolean check, residual 0 (pass) or 1 (fail)."""
        return self.check(name, 0.0 if ok else 1.0, 0.0)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows.values())

    def failures(self) -> list[str]:
        return [r.name for r in self.rows.values() if not r.ok]

    def table(self) -> str:
        w = max([len(n) for n in self.rows] + [9])
        lines = [f"{'invariant':<{w}}  {'passed':>11}  {'worst':>10}  {'tol':>8}  status"]
        for r in self.rows.values():
            lines.append(f"{r.name:<{w}}  {r.passed:>5}/{r.total:<5}  {r.worst:>10.3e}  {r.tol:>8.1e}  "
                         f"{'ok' if r.ok else 'FAIL'}")
        return "\n".join(lines)


@dataclass
class Context:
    rng: np.random.Generator
    trials: int
    tally: Tally
    fault: str | None = None

    def gauges(self, A: QArray):
        g = gauges(A)
        if self.fault == "gauge":
            # test hook: a miscalibrated operator norm
            return (g[0] * (1 + 1e-3), g[1], g[2])
        return g


# instance generators ----------------------------------------------------
def random_matrix(rng: np.random.Generator, lo: int = 2, hi: int = 8) -> QArray:
    return random_qmatrix(rng, int(rng.integers(lo, hi + 1)))


def random_quaternion(rng: np.random.Generator, radius: float = 1.0) -> Quaternion:
    v = rng.standard_normal(4)
    v *= radius * rng.random() ** 0.25 / np.linalg.norm(v)
    return Quaternion(*v)


def sphere_point(rng: np.random.Generator, s: EigenSphere) -> Quaternion:
    return s.point(ImaginaryUnit.random(rng))


def off_probe(rng: np.random.Generator, A: QArray, radius: float, tries: int = 100) -> Quaternion:
    """Random q whose S-spectrum verdict is decisively off."""
    for _ in range(tries):
        q = random_quaternion(rng, radius)
        if classify(A, q, "s_spectrum") is Verdict.OFF:
            return q
    raise RuntimeError("could not draw an off-spectrum probe")


def probes(rng: np.random.Generator, A: QArray, count: int, spheres=None) -> list[tuple[Quaternion, bool]]:
    """Half on-sphere points, half decisive off points, tagged with the truth."""
    spheres = spectral_spheres(A) if spheres is None else spheres
    radius = 1.5 * max(1.0, A.norm())
    out = []
    for t in range(count):
        if t % 2 == 0:
            s, _ = spheres[int(rng.integers(len(spheres)))]
            out.append((sphere_point(rng, s), True))
        else:
            out.append((off_probe(rng, A, radius), False))
    return out


def jordan_block(k: int, lam: Quaternion | float = 0.0) -> QArray:
    lam = lam if isinstance(lam, Quaternion) else Quaternion(float(lam))
    J = QArray.diag([lam] * k)
    a = J.a.copy()
    a[np.arange(k - 1), np.arange(1, k)] = 1.0
    return QArray(a, J.b)


def _conjugate(U: QArray, B: QArray) -> QArray:
    return U @ B @ U.H


def crafted_operators(rng: np.random.Generator) -> list[QArray]:
    """Singular test operators with known chain structure.

    Nilpotent Jordan blocks of sizes 1 to 4, pseudo-resolvents of non-real
    Jordan blocks at their eigenvalue, orthogonal projections, block sums of
    these with invertible parts, all also conjugated by a random unitary.
    """
    ops = []
    lam = Quaternion(0.3, 0.5, -0.2, 0.4)
    for k in range(1, 5):
        ops.append(jordan_block(k))
        ops.append(pseudo_resolvent(jordan_block(k, lam), lam))
    for n, r in [(2, 1), (3, 1), (4, 2), (5, 3)]:
        V = range_basis(random_qmatrix(rng, n, r)).vectors
        ops.append(V @ V.H)
    inv = QArray.eye(2) + random_qmatrix(rng, 2) * 0.3
    ops.append(block_diag(jordan_block(2), inv))
    ops.append(block_diag(jordan_block(3), ops[8]))
    ops.append(block_diag(jordan_block(2), jordan_block(1), inv))
    ops.append(block_diag(pseudo_resolvent(jordan_block(3, lam), lam), jordan_block(2)))
    ops.append(QArray.zeros((3, 3)))
    conj = []
    for B in ops:
        conj.append(_conjugate(random_unitary(rng, B.shape[0]), B))
    return ops + conj


def singular_random(rng: np.random.Generator) -> QArray:
    """R_q(A) at a spectral sphere of a random A."""
    A = random_matrix(rng)
    s, _ = spectral_spheres(A)[int(0)]
    return pseudo_resolvent(A, s.point())


# spectra ----------------------------------------------------------------
def check_embedding(ctx: Context) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        n = int(ctx.rng.integers(2, 9))
        A, B = random_qmatrix(ctx.rng, n), random_qmatrix(ctx.rng, n)
        scale = A.norm() * B.norm()
        t.check("chi_homomorphism", np.linalg.norm((A @ B).chi() - A.chi() @ B.chi(), 2) / scale, 1e-12)
        t.check("chi_adjoint", float(np.abs(adjoint(A).chi() - A.chi().conj().T).max()), 1e-13)


def check_adjoint_axioms(ctx: Context) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        if ctx.rng.random() < 0.3:
            A = A @ QArray.diag([0.0] + [1.0] * (A.shape[0] - 1))  # singular
        n = A.shape[0]
        phi, psi = random_qvector(ctx.rng, n), random_qvector(ctx.rng, n)
        Ad = adjoint(A)
        nA, _, gA = ctx.gauges(A)
        nAd, _, gAd = gauges(Ad)
        lhs = inner_product(psi, A @ phi)
        rhs = inner_product(Ad @ psi, phi)
        t.check("adjoint_inner_product", abs(lhs - rhs) / (nA * phi.fro_norm() * psi.fro_norm()), 1e-10)
        t.check("adjoint_norm", abs(nA - nAd) / nA, 1e-10)
        t.check("adjoint_square_norm", abs(gauges(Ad @ A)[0] - nA**2) / nA**2, 1e-10)
        t.check("gamma_adjoint", abs(gA - gAd) / gA, 1e-10)
        k, r = kernel_basis(A), range_basis(A)
        t.expect("rank_nullity", k.dim + r.dim == n)
        t.check("range_perp_is_adjoint_kernel",
                subspace_distance(subspace_combine(r, mode="complement"), kernel_basis(Ad)), 1e-10)
        t.check("kernel_is_adjoint_range_perp",
                subspace_distance(k, subspace_combine(range_basis(Ad), mode="complement")), 1e-10)
        nrm, kap, _ = gauges(A)
        if kap > 1e-10 * nrm:
            t.check("kappa_inverse_norm", abs(kap * inverse_matrix(A).norm() - 1.0), 1e-10)
        for m in range(1, 5):
            for p in range(1, 5):
                km = gauges(matrix_power(A, m))[1]
                kp = gauges(matrix_power(A, p))[1]
                kmp = gauges(matrix_power(A, m + p))[1]
                t.check("kappa_supermultiplicative", km * kp - kmp - 1e-12, 0.0)


def check_spheres(ctx: Context) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        rep = s_spectrum(A, flags=False)
        t.expect("spectrum_nonempty", len(rep.spheres) > 0)
        t.expect("multiplicities_sum_to_n", sum(e.multiplicity for e in rep.spheres) == A.shape[0])
        t.check("adjoint_sphere_set", hausdorff_distance(rep.sphere_set, [s for s, _ in spectral_spheres(A.H)]),
                1e-8)
        i, r = rep.lower_index, rep.r_s
        t.check("annulus", max(max(i - s.radius, s.radius - r) for s in rep.sphere_set), 1e-8)
        upper, lower = power_estimates(A, 32)
        t.check("power_lower_bound", lower - i, 1e-6)
        t.check("power_upper_bound", r - upper, 1e-6)


def check_axial_symmetry(ctx: Context, trials: int | None = None) -> None:
    t = ctx.tally
    rng = ctx.rng
    for trial in range(max(1, ctx.trials // 4) if trials is None else trials):
        A = random_matrix(rng)
        spheres = spectral_spheres(A)
        if trial % 2 == 0:
            s, _ = spheres[int(rng.integers(len(spheres)))]
        else:
            q = random_quaternion(rng, 1.5 * max(1.0, A.norm()))
            s = sphere_of(q)
        p1, p2 = sphere_point(rng, s), sphere_point(rng, s)
        same = all(classify(A, p1, k) == classify(A, p2, k) for k in MEMBERSHIP_KINDS)
        same = same and K.in_kato_spectrum(A, p1) == K.in_kato_spectrum(A, p2)
        t.expect("axial_symmetry", same)


def check_duality(ctx: Context, per_trial: int = 50) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        Ad = A.H
        for q, on in probes(ctx.rng, A, per_trial):
            su, ap = classify(A, q, "surjectivity"), classify(A, q, "aps")
            t.expect("surjectivity_aps_duality", su == classify(Ad, q, "aps") and ap == classify(Ad, q, "surjectivity"))
            verdicts = {ap, su, classify(A, q, "compression"), classify(A, q, "s_spectrum")}
            t.expect("finite_dimensional_collapse", verdicts == {Verdict.ON if on else Verdict.OFF})
            t.expect("compression_is_conjugate_point",
                     (su == Verdict.ON) == (kernel_basis(pseudo_resolvent(A, q.conj()), rtol=1e-7).dim > 0))


def check_power_factorization(ctx: Context) -> None:
    t = ctx.tally
    for trial in range(ctx.trials):
        A = random_qmatrix(ctx.rng, 4 if trial % 2 == 0 else 6)
        q = random_quaternion(ctx.rng, 2.0)
        n = 1 + trial % 5
        t.check("power_factorization", power_factorization_residual(A, q, n, relative=True), 1e-10)


def check_resolvent(ctx: Context) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        q = off_probe(ctx.rng, A, 1.5 * max(1.0, A.norm()))
        phi = random_qvector(ctx.rng, A.shape[0])
        psi = resolvent_apply(A, q, phi)
        t.check("resolvent_apply", (pseudo_resolvent(A, q) @ psi - phi).fro_norm() / phi.fro_norm(), 1e-10)


def check_block_sums(ctx: Context, per_trial: int = 10) -> None:
    t = ctx.tally
    rng = ctx.rng
    for _ in range(ctx.trials):
        A, B = random_matrix(rng, 1, 4), random_matrix(rng, 1, 4)
        if rng.random() < 0.3:
            B = jordan_block(int(rng.integers(1, 4)), random_quaternion(rng))
        C = block_diag(A, B)
        sA, sB, sC = (spectral_spheres(X) for X in (A, B, C))
        union = [s for s, _ in sA] + [s for s, _ in sB]
        t.check("block_sum_spheres", hausdorff_distance([s for s, _ in sC], union), 1e-8)
        on = [sphere_point(rng, s) for s, _ in sA + sB]
        off = [off_probe(rng, C, 1.5 * max(1.0, C.norm())) for _ in range(per_trial)]
        for q in on + off:
            ok = True
            for kind in ("aps", "surjectivity"):
                vals = [classify(X, q, kind) for X in (A, B, C)]
                ok = ok and vals[2] is not Verdict.INDETERMINATE
                ok = ok and (vals[2] is Verdict.ON) == (Verdict.ON in vals[:2])
            kc = K.in_kato_spectrum(C, q)
            ok = ok and kc == (K.in_kato_spectrum(A, q) or K.in_kato_spectrum(B, q))
            t.expect("block_sum_memberships", ok)


# kato -------------------------------------------------------------------
def _power_lists(B: QArray, L: int):
    n = B.shape[0]
    Ks, Rs = [SubspaceBasis.zero(n)], [SubspaceBasis.full(n)]
    for m in range(1, max(2 * L, 6) + 1):
        Ks.append(K.kernel_of_power(B, m))
    for m in range(1, max(L, 3) + 1):
        Rs.append(K.range_of_power(B, m))
    return Ks, Rs


def _incl_residual(U: SubspaceBasis, W: SubspaceBasis) -> float:
    return W.residual(U.vectors) if U.dim else 0.0


def check_chain_identities(ctx: Context, B: QArray) -> None:
    """Semi-regularity equivalences, range/kernel identities and cores."""
    t = ctx.tally
    n = B.shape[0]
    L = n + 1
    Ks, Rs = _power_lists(B, L)
    tol = K.SUBSPACE_TOL
    P = lambda U, W: subspace_compare(U, W, tol) in (Inclusion.SUBSET, Inclusion.EQUAL)
    rng1 = range(1, L + 1)
    a = all(P(Ks[1], Rs[m]) for m in rng1)
    b = all(P(Ks[m], Rs[1]) for m in rng1)
    c = all(P(Ks[m], Rs[k]) for m in rng1 for k in rng1)
    d_res = 0.0
    d = True
    for m in rng1:
        for k in rng1:
            img = K.power_image(B, k, Ks[k + m])
            d = d and subspace_compare(Ks[m], img, tol) is Inclusion.EQUAL
    t.expect("semi_regular_equivalence", a == b == c == d == K.is_semi_regular(B))
    for m in range(1, 4):
        for p in range(1, 4):
            lhs = K.power_image(B, m, Ks[m + p])
            rhs = subspace_combine(Rs[m], Ks[p], "intersect", tol=tol)
            t.check("image_of_kernel_identity", subspace_distance(lhs, rhs), 1e-10)
    ch = K.chains(B)
    t.expect("chain_stabilises", ch.ascent == ch.descent <= n)
    cr = K.cores(B)
    t.check("core_invariance", cr.core_invariance, 1e-10)
    if K.is_semi_regular(B):
        t.expect("semi_regular_cores_full", cr.hyper_range.dim == n and cr.hyper_kernel.dim == 0)


def check_kato_chains(ctx: Context) -> None:
    crafted = crafted_operators(ctx.rng)
    for B in crafted:
        check_chain_identities(ctx, B)
    for _ in range(ctx.trials):
        check_chain_identities(ctx, singular_random(ctx.rng))


def _with_nilpotent_part(rng: np.random.Generator) -> QArray:
    k = int(rng.integers(1, 4))
    m = int(rng.integers(1, 4))
    C = QArray.eye(m) + random_qmatrix(rng, m) * 0.5
    A = block_diag(jordan_block(k), C)
    return _conjugate(random_unitary(rng, k + m), A)


def check_hyperkernel_laws(ctx: Context) -> None:
    t = ctx.tally
    rng = ctx.rng
    for _ in range(ctx.trials):
        A = _with_nilpotent_part(rng)
        NA = K.chains(A).hyper_kernel
        A2_range = K.chains(A @ A).hyper_range
        spheres = spectral_spheres(A)
        qs = [sphere_point(rng, s) for s, _ in spheres if s.radius > 1e-6]
        qs.append(random_quaternion(rng, 2.0))
        for q in qs:
            B = pseudo_resolvent(A, q)
            img = K.power_image(B, 1, NA)
            t.check("resolvent_preserves_hyper_kernel", subspace_distance(img, NA), 1e-10)
            t.check("resolvent_hyper_kernel_in_square_range", _incl_residual(K.chains(B).hyper_kernel, A2_range),
                    1e-10)


def check_kato_spectrum(ctx: Context, per_trial: int = 100) -> None:
    """Kato membership from chains against eigensolver spheres."""
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        spheres = spectral_spheres(A)
        for q, _ in probes(ctx.rng, A, per_trial, spheres):
            by_eig = any(s.distance(sphere_of(q)) <= 1e-8 * max(1.0, s.radius) for s, _ in spheres)
            t.expect("kato_equals_s_spectrum", K.in_kato_spectrum(A, q) == by_eig)


def check_kato_adjoint(ctx: Context, per_trial: int = 10) -> None:
    t = ctx.tally
    for _ in range(ctx.trials):
        A = random_matrix(ctx.rng)
        for q, _ in probes(ctx.rng, A, per_trial):
            t.expect("kato_adjoint", K.in_kato_spectrum(A, q) == K.in_kato_spectrum(A.H, q))


def check_gkd(ctx: Context) -> None:
    t = ctx.tally
    rng = ctx.rng
    for trial in range(ctx.trials):
        A = random_matrix(rng) if trial % 3 else _with_nilpotent_part(rng)
        for s, mult in spectral_spheres(A):
            q = s.point()
            res = K.gkd(A, q)
            r = res.residuals
            t.check("gkd_direct_sum", r["direct_sum"], 1e-10)
            t.check("gkd_invariance", max(r["invariance_M"], r["invariance_N"]), 1e-10)
            t.check("gkd_nilpotency", r["nilpotency"], 1e-10)
            t.check("gkd_injectivity", r["injectivity"], 1e-10)
            B = numerical_resolvent(A, q)
            d = res.order_d
            prev = 1.0 if d <= 1 else _restricted_norm(B, res.N, d - 1)
            t.expect("gkd_order_minimal", d >= 1 and prev > K.KATO_RTOL and d <= K.chains(B).ascent)
            t.expect("kato_kind_is_kato_type", K.kato_kind(A, q).kind != "not_kato_type")
        t.expect("generalized_kato_spectrum_empty", K.generalized_kato_spectrum(A) == [])


def _restricted_norm(B: QArray, N: SubspaceBasis, d: int) -> float:
    V = N.vectors
    for _ in range(d):
        V = B @ V
    return V.norm() / B.norm() ** d


def check_persistence(ctx: Context, per_trial: int | None = None) -> None:
    """Perturbation persistence: gamma(A) > beta(q) keeps R_q(A) invertible."""
    t = ctx.tally
    rng = ctx.rng
    count = 100 if per_trial is None else per_trial
    done = 0
    while done < max(1, ctx.trials // 2):
        A = random_matrix(rng)
        _, kappa, gamma = ctx.gauges(A)
        if kappa <= 1e-6:
            continue
        done += 1
        for _ in range(count // max(1, ctx.trials // 2) + 1):
            d = random_quaternion(rng, 1.0)
            q = d * (gamma * rng.random() / beta(d))
            B = pseudo_resolvent(A, q)
            ok = gamma > beta(q) and K.is_semi_regular(B) and kernel_basis(B, rtol=1e-7).dim == 0
            t.expect("semi_regular_persistence", ok)
        for s, _ in spectral_spheres(A):
            q = sphere_point(rng, s)
            t.expect("persistence_no_false_positive", not (gamma > beta(q)) and K.in_kato_spectrum(A, q))


# local ------------------------------------------------------------------
def check_local_resolvent(ctx: Context, eigenpairs: int | None = None, per_pair: int = 100) -> None:
    t = ctx.tally
    rng = ctx.rng
    pairs = max(1, ctx.trials // 10) if eigenpairs is None else eigenpairs
    for _ in range(pairs):
        A = random_matrix(rng)
        ep = right_eigenpairs(A)
        lam, phi = ep[int(rng.integers(len(ep)))]
        s = sphere_of(lam)
        radius = 2.0 * max(1.0, abs(lam))
        drawn = 0
        while drawn < per_pair:
            p = random_quaternion(rng, radius)
            if s.distance(sphere_of(p)) < 0.1:
                continue
            drawn += 1
            f = local_resolvent_eval(A, lam, phi, p)
            t.check("local_resolvent_identity", (pseudo_resolvent(A, p) @ f - phi).fro_norm() / phi.fro_norm(),
                    1e-8)


def check_local_spectra(ctx: Context) -> None:
    t = ctx.tally
    rng = ctx.rng
    for trial in range(ctx.trials):
        A = random_matrix(rng) if trial % 3 else _with_nilpotent_part(rng)
        n = A.shape[0]
        roots = root_subspaces(A)
        spheres = [s for s, _ in roots]
        union = []
        for k in range(n):
            ls = local_spectrum(A, QArray.basis_vector(n, k), roots=roots)
            t.expect("local_spectrum_subset", all(any(s is r for r in spheres) for s in ls.spheres))
            union.extend(ls.spheres)
        t.check("local_spectra_cover_spectrum", hausdorff_distance(union, spheres), 0.0)
        t.expect("local_spectrum_of_zero_empty", local_spectrum(A, QArray.zeros(n), roots=roots).spheres == [])
        phi, psi = random_qvector(rng, n), random_qvector(rng, n)
        Lp, Lq = local_spectrum(A, phi, roots=roots).spheres, local_spectrum(A, psi, roots=roots).spheres
        Lsum = local_spectrum(A, phi + psi, roots=roots).spheres
        t.expect("local_spectrum_subadditive", all(s in Lp or s in Lq for s in Lsum))
        Ls = local_spectrum(A, phi.right_mul(random_quaternion(rng) + Quaternion(2.0)), roots=roots).spheres
        t.expect("local_spectrum_right_scaling", Ls == Lp)
        # spectral subspaces of a random subset
        F = [s for s in spheres if rng.random() < 0.5]
        X = local_spectral_subspace(A, F, roots=roots)
        normA = A.norm()
        t.check("spectral_subspace_invariance", X.residual(A @ X.vectors) / normA if X.dim else 0.0, 1e-10)
        coeffs = rng.standard_normal(3)
        P = QArray.eye(n) * coeffs[0] + A * coeffs[1] + (A @ A) * coeffs[2]
        t.check("spectral_subspace_hyperinvariance",
                X.residual(P @ X.vectors) / max(1.0, P.norm()) if X.dim else 0.0, 1e-10)
        q = off_probe(rng, A, 1.5 * max(1.0, normA))
        R = pseudo_resolvent(A, q)
        t.check("spectral_subspace_resolvent_invariance",
                X.residual(R @ X.vectors) / R.norm() if X.dim else 0.0, 1e-10)
        extra = F + [EigenSphere(float(normA) + 1.0 + rng.random(), rng.random())]
        t.check("spectral_subspace_restriction",
                subspace_distance(local_spectral_subspace(A, extra, roots=roots), X), 1e-10)
        t.expect("spectral_subspace_dimension", X.dim == sum(N.dim for s, N in roots if s in F))
        rep = svep_report(A)
        t.expect("svep", rep["has_svep"] and rep["analytic_residuum_empty"])


def random_series(rng: np.random.Generator, degree: int, n: int) -> RightPowerSeries:
    return RightPowerSeries(random_qmatrix(rng, degree + 1, n, scale=1.0))


def check_slice_calculus(ctx: Context, count: int | None = None) -> None:
    t = ctx.tally
    rng = ctx.rng
    units = [I_UNIT, J_UNIT, ImaginaryUnit(1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3))]
    for _ in range(max(1, ctx.trials // 4) if count is None else count):
        f = random_series(rng, int(rng.integers(0, 7)), int(rng.integers(1, 5)))
        df = slice_derivative(f)
        for u in units:
            x, y = rng.uniform(-1, 1, 2)
            q = Quaternion(x, y * u.x, y * u.y, y * u.z)
            exact = series_eval(df, q)
            scale = max(exact.fro_norm(), f.coefficients.fro_norm())
            dx, dy = slice_difference_quotient(f, q, u)
            t.check("slice_derivative_difference", max((dx - exact).fro_norm(), (dy - exact).fro_norm()) / scale,
                    1e-6)
            t.check("slice_regularity", dbar_residual(f, x, y, u) / scale, 1e-6)
        g = random_series(rng, int(rng.integers(0, 7)), f.n)
        s = random_quaternion(rng)
        lin = (slice_derivative(f + g).coefficients - (df + slice_derivative(g)).coefficients).fro_norm()
        sc = (slice_derivative(f.right_scale(s)).coefficients - df.right_scale(s).coefficients).fro_norm()
        t.check("slice_derivative_linearity", max(lin, sc), 1e-12)
        t.expect("series_at_zero", series_eval(f, Quaternion(0.0)).allclose(f.coefficient(0), atol=0.0))


# models -----------------------------------------------------------------
def model_probe_set(rng: np.random.Generator, count: int = 10_000) -> list[Quaternion]:
    """Random points of the ball of radius 2 plus points on the unit sphere,
    at the origin and on the spheres of the diagonal test entries."""
    fixed = [Quaternion(0.0), Quaternion(1.0), Quaternion(-1.0), Quaternion(0, 1), Quaternion(0, 0, 1),
             Quaternion(0.5, 0.5), Quaternion(2.0)]
    m = (count - len(fixed)) // 4
    pts = [random_quaternion(rng, 2.0) for _ in range(count - len(fixed) - m)]
    for _ in range(m):
        u = ImaginaryUnit.random(rng)
        th = rng.uniform(0, math.pi)
        pts.append(Quaternion(math.cos(th), *(math.sin(th) * np.array([u.x, u.y, u.z]))))
    return fixed + pts


def check_models(ctx: Context, count: int = 10_000) -> None:
    t = ctx.tally
    rng = ctx.rng
    pts = model_probe_set(rng, count)
    variants = [unilateral_shift(), bilateral_shift(), weighted_shift("harmonic"),
                diagonal([Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(2.0), Quaternion(0.5, 0.5)])]
    for m in variants:
        ok = True
        sym = True
        for q in pts:
            v = {k: model_membership(m, q, k) for k in MODEL_KINDS}
            ok = ok and (not v["boundary"] or (v["aps"] and v["surjectivity"]))
            ok = ok and (not v["kato"] or v["s_spectrum"])
            ok = ok and (not v["aps"] or m.lower_index - 1e-12 <= abs(q) <= m.r_s + 1e-12)
            p = sphere_point(rng, sphere_of(q))
            sym = sym and all(model_membership(m, p, k) == v[k] for k in MODEL_KINDS)
        t.expect(f"model_set_logic[{m.name}]", ok)
        t.expect(f"model_axial_symmetry[{m.name}]", sym)
    S = unilateral_shift()
    rep = truncation_report(S, 64, [Quaternion(0.5), Quaternion(0, 0.5), Quaternion(1.0)])
    g = rep["section_gauges"]
    t.expect("shift_section_gauges", g["norm"] == 1.0 and g["kappa"] == 0.0 and rep["section_r_s"] == 0.0)
    t.expect("pollution_disclaimer", rep["disclaimer"] == POLLUTION_DISCLAIMER)
    t.expect("ball_witness", model_membership(S, Quaternion(0, 0.5)) and not model_membership(S, Quaternion(0, 0.5), "kato")
             and model_membership(S, Quaternion(0.0)) and not model_membership(S, Quaternion(1.01)))
    roots = [Quaternion(math.cos(2 * math.pi * k / 64), math.sin(2 * math.pi * k / 64)) for k in range(33)]
    brep = truncation_report(bilateral_shift(), 64, roots)
    t.expect("bilateral_section_roots", all(p["kappa_section"] < 1e-10 for p in brep["probes"]))
    D = diagonal([Quaternion(0, 1), Quaternion(0, 0, 1)])
    drep = truncation_report(D, 2, [sphere_point(rng, EigenSphere(0.0, 1.0)) for _ in range(10)]
                             + [Quaternion(0.5), Quaternion(0, 2)])
    t.expect("diagonal_section_agrees", all(p["agree"] for p in drep["probes"]))
    t.expect("weighted_section_nilpotent", spectral_radius(truncate(weighted_shift("harmonic"), 16)) == 0.0)


GROUPS: dict[str, Callable] = {
    "embedding": check_embedding,
    "adjoint_axioms": check_adjoint_axioms,
    "spheres": check_spheres,
    "axial_symmetry": check_axial_symmetry,
    "duality": check_duality,
    "power_factorization": check_power_factorization,
    "resolvent": check_resolvent,
    "block_sums": check_block_sums,
    "kato_chains": check_kato_chains,
    "hyperkernel_laws": check_hyperkernel_laws,
    "kato_spectrum": check_kato_spectrum,
    "kato_adjoint": check_kato_adjoint,
    "gkd": check_gkd,
    "persistence": check_persistence,
    "local_resolvent": check_local_resolvent,
    "local_spectra": check_local_spectra,
    "slice_calculus": check_slice_calculus,
    "models": check_models,
}

SUITES = {
    "spectra": ["embedding", "adjoint_axioms", "spheres", "axial_symmetry", "duality", "power_factorization",
                "resolvent", "block_sums"],
    "kato": ["kato_chains", "hyperkernel_laws", "kato_spectrum", "kato_adjoint", "gkd", "persistence"],
    "local": ["local_resolvent", "local_spectra", "slice_calculus"],
    "models": ["models"],
}
SUITES["all"] = [g for name in ("spectra", "kato", "local", "models") for g in SUITES[name]]


def run_suite(suite: str, seed: int = 0, trials: int = 20, fault: str | None = None) -> Tally:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    tally = Tally()
    for name in SUITES[suite]:
        run_group(name, seed, trials, fault, tally)
    return tally


def run_group(name: str, seed: int = 0, trials: int = 20, fault: str | None = None,
              tally: Tally | None = None) -> Tally:
    """Run one check group on its own random stream, so results do not depend on the suite."""
    if name not in GROUPS:
        raise ValueError(f"unknown group {name!r}")
    tally = Tally() if tally is None else tally
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    GROUPS[name](Context(rng, trials, tally, fault))
    return tally
