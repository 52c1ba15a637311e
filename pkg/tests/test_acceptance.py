"""Acceptance suite: one test per criterion, 200 trials at a fixed seed.

Each criterion maps to rows of the invariant groups in ``qkato.verify``;
the groups are run once per session and shared between criteria. Run as a
script to get just the pass/fail lines.
"""

import functools
import sys
import time

import pytest

from qkato.verify import run_group

SEED = 0
TRIALS = 200

# criterion -> (title, [(group, rows or None for all rows)])
CRITERIA = {
    1: ("embedding soundness", [("embedding", None)]),
    2: ("adjoint axioms", [("adjoint_axioms", ["adjoint_inner_product", "adjoint_norm",
                                               "adjoint_square_norm", "gamma_adjoint"])]),
    3: ("axial symmetry", [("axial_symmetry", None)]),
    4: ("sphere set of the adjoint", [("spheres", ["adjoint_sphere_set"])]),
    5: ("surjectivity / approximate point duality", [("duality", ["surjectivity_aps_duality"])]),
    6: ("annulus and power bounds", [("spheres", ["annulus", "power_lower_bound", "power_upper_bound"])]),
    7: ("power factorization", [("power_factorization", None)]),
    8: ("kernel / range chain identities", [("kato_chains", None), ("hyperkernel_laws", None)]),
    9: ("Kato spectrum equals S-spectrum", [("kato_spectrum", None)]),
    10: ("generalized Kato certificates", [("gkd", ["gkd_direct_sum", "gkd_invariance", "gkd_nilpotency",
                                                   "gkd_injectivity", "kato_kind_is_kato_type"])]),
    11: ("persistence of semi-regularity", [("persistence", None)]),
    12: ("block-sum laws", [("block_sums", None)]),
    13: ("local resolvent", [("local_resolvent", None)]),
    14: ("local spectral subspaces", [("local_spectra", ["spectral_subspace_invariance",
                                                        "spectral_subspace_restriction",
                                                        "local_spectra_cover_spectrum"])]),
    15: ("slice calculus", [("slice_calculus", ["slice_derivative_difference"])]),
    16: ("operator models", [("models", None)]),
}


@functools.cache
def group_tally(name: str):
    t0 = time.perf_counter()
    tally = run_group(name, seed=SEED, trials=TRIALS)
    return tally, time.perf_counter() - t0


def evaluate(number: int) -> tuple[bool, str]:
    title, parts = CRITERIA[number]
    ok, details = True, []
    for group, names in parts:
        tally, _ = group_tally(group)
        rows = tally.rows if names is None else {n: tally.rows[n] for n in names}
        assert rows, f"group {group} recorded no checks"
        for r in rows.values():
            assert r.total > 0, f"{r.name} ran no checks"
            ok &= r.ok
            details.append(f"{r.name} {r.passed}/{r.total} worst {r.worst:.2e} tol {r.tol:.0e}")
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: " + "; ".join(details)
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    from conftest import ACCEPTANCE_LINES

    ok, line = evaluate(number)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criteria_runtime():
    # every group has been run by the criteria above (or is run now)
    groups = {g for _, parts in CRITERIA.values() for g, _ in parts}
    total = sum(group_tally(g)[1] for g in groups)
    print(f"acceptance groups took {total:.1f} s")
    assert total < 60.0


if __name__ == "__main__":
    results = [evaluate(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
