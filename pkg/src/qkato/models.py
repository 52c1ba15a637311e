"""Closed-form spectral sets of canonical operators on l^2(N, H).

Finite sections are provided for gauge checks only: the N x N section of
the unilateral shift is nilpotent, so its spectrum ({0}) says nothing about
the closed unit ball of the infinite operator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import QArray, gauges
from .quaternion import Quaternion, parse_quaternion, sphere_of
from .spectrum import pseudo_resolvent, spectral_spheres

__all__ = [
    "MODEL_KINDS",
    "OperatorModel",
    "unilateral_shift",
    "bilateral_shift",
    "weighted_shift",
    "diagonal",
    "model_from_name",
    "model_membership",
    "truncate",
    "truncation_report",
    "POLLUTION_DISCLAIMER",
]

MODEL_KINDS = ("s_spectrum", "aps", "surjectivity", "kato", "boundary")

POLLUTION_DISCLAIMER = (
    "finite sections do not reproduce the spectrum of the infinite operator: "
    "the N x N section of the unilateral shift is nilpotent with S-spectrum {0}, "
    "whereas the shift itself has the closed unit ball; disagreements of this "
    "kind are expected and are not errors"
)

# tolerance for |q| = 1 style predicates
SURFACE_TOL = 1e-12


def _harmonic(k: int) -> float:
    return 1.0 / (k + 1)


WEIGHT_RULES = {
    "harmonic": _harmonic,
}


@dataclass(frozen=True)
class OperatorModel:
    """One of the closed-form operator families.

    ``r_s``, ``lower_index`` and ``invertible`` are the descriptors of the
    infinite operator, not of its sections.
    """

    variant: str
    r_s: float
    lower_index: float
    invertible: bool
    entries: tuple[Quaternion, ...] = ()
    weight_rule: str | None = None
    notes: dict = field(default_factory=dict, compare=False)

    def weight(self, k: int) -> float:
        return WEIGHT_RULES[self.weight_rule](k)

    @property
    def name(self) -> str:
        if self.variant == "weighted_shift":
            return f"weighted-shift:{self.weight_rule}"
        return self.variant.replace("_", "-")


def unilateral_shift() -> OperatorModel:
    return OperatorModel("unilateral_shift", 1.0, 1.0, False,
                         notes={"isometry": True, "svep": True})


def bilateral_shift() -> OperatorModel:
    return OperatorModel("bilateral_shift", 1.0, 1.0, True,
                         notes={"isometry": True, "unitary": True})


def weighted_shift(rule: str = "harmonic") -> OperatorModel:
    """Quasi-nilpotent weighted shift ``e_k -> w_k e_{k+1}``.

    Only rules with ``w_k -> 0`` and bounded weights are accepted; then
    ``r_S <= sup_{k >= m} w_k`` for every m, i.e. r_S = 0.
    """
    if rule not in WEIGHT_RULES:
        raise ValueError(f"unknown weight rule {rule!r}; known: {sorted(WEIGHT_RULES)}")
    fn = WEIGHT_RULES[rule]
    ks = np.arange(10_000)
    w = np.array([fn(int(k)) for k in ks])
    tail_sup = float(w[9_000:].max())
    if not np.all(np.isfinite(w)) or w.max() > 1e12 or tail_sup > 1e-3:
        raise ValueError(f"weight rule {rule!r} is not certified to tend to 0")
    return OperatorModel("weighted_shift", 0.0, 0.0, False, weight_rule=rule,
                         notes={"quasi_nilpotent": True, "sup_weight": float(w.max()),
                                "r_s_bound_tail_sup_k_ge_9000": tail_sup})


def diagonal(entries) -> OperatorModel:
    """Diagonal operator repeating ``entries`` cyclically along the basis."""
    qs = tuple(e if isinstance(e, Quaternion) else Quaternion(float(e)) for e in entries)
    if not qs:
        raise ValueError("diagonal model needs at least one entry")
    mods = [abs(q) for q in qs]
    invertible = min(mods) > 0
    return OperatorModel("diagonal", max(mods), min(mods) if invertible else 0.0,
                         invertible, entries=qs)


def _load_diagonal(path: str) -> OperatorModel:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    items = obj["entries"] if isinstance(obj, dict) else obj
    qs = []
    for item in items:
        if isinstance(item, str):
            qs.append(parse_quaternion(item))
        elif isinstance(item, list) and len(item) == 4 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in item
        ):
            qs.append(Quaternion(*map(float, item)))
        else:
            raise ValueError(f"bad diagonal entry {item!r}")
    return diagonal(qs)


def model_from_name(name: str) -> OperatorModel:
    """Resolve ``unilateral-shift``, ``bilateral-shift``, ``weighted-shift:<rule>``, ``diagonal:<file>``."""
    if name == "unilateral-shift":
        return unilateral_shift()
    if name == "bilateral-shift":
        return bilateral_shift()
    if name.startswith("weighted-shift:"):
        return weighted_shift(name.split(":", 1)[1])
    if name.startswith("diagonal:"):
        return _load_diagonal(name.split(":", 1)[1])
    raise ValueError(f"unknown model {name!r}")


def _on_unit_sphere(q: Quaternion) -> bool:
    return abs(abs(q) - 1.0) <= SURFACE_TOL


def _in_diagonal_spectrum(m: OperatorModel, q: Quaternion) -> bool:
    s = sphere_of(q)
    return any(sphere_of(e).distance(s) <= SURFACE_TOL * max(1.0, abs(e)) for e in m.entries)


def model_membership(m: OperatorModel, q: Quaternion, kind: str = "s_spectrum") -> bool:
    """Closed-form membership of q in a spectral set of the model.

    Kinds: s_spectrum, aps, surjectivity, kato and boundary (of the
    S-spectrum). Every rule depends on q through (Re q, |Im q|) only.
    """
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    r = abs(q)
    v = m.variant
    if v == "unilateral_shift":
        # non-invertible isometry with SVEP: sigma_S = closed ball = sigma_su,
        # approximate-point and Kato spectra = unit sphere
        if kind in ("s_spectrum", "surjectivity"):
            return r <= 1.0 + SURFACE_TOL
        return _on_unit_sphere(q)
    if v == "bilateral_shift":
        # invertible isometry: every set is the unit sphere; sigma_S has empty
        # interior, so its boundary (hence the Kato spectrum) is all of it
        return _on_unit_sphere(q)
    if v == "weighted_shift":
        # quasi-nilpotent: sigma_S = {0}, which is its own boundary
        return r <= SURFACE_TOL
    if v == "diagonal":
        # finitely many spheres: no interior, SVEP for A and its adjoint
        return _in_diagonal_spectrum(m, q)
    raise ValueError(f"unknown variant {v!r}")


def truncate(m: OperatorModel, N: int) -> QArray:
    """N x N section in the canonical basis."""
    if N < 1:
        raise ValueError("N must be >= 1")
    a = np.zeros((N, N), dtype=complex)
    if m.variant == "unilateral_shift":
        a[np.arange(1, N), np.arange(N - 1)] = 1.0
        return QArray(a)
    if m.variant == "bilateral_shift":
        a[(np.arange(N) + 1) % N, np.arange(N)] = 1.0
        return QArray(a)
    if m.variant == "weighted_shift":
        a[np.arange(1, N), np.arange(N - 1)] = [m.weight(k) for k in range(N - 1)]
        return QArray(a)
    if m.variant == "diagonal":
        return QArray.diag([m.entries[k % len(m.entries)] for k in range(N)])
    raise ValueError(f"unknown variant {m.variant!r}")


def truncation_report(m: OperatorModel, N: int, probes, on_tol: float = 1e-10) -> dict:
    """Compare the closed-form model with its N x N section at the given probes.

    A probe is "on" for the section when ``kappa(R_q(A_N)) < on_tol``.
    Disagreements are labelled expected for the shift families, whose
    sections suffer spectral pollution.
    """
    A = truncate(m, N)
    norm, kappa, gamma = gauges(A)
    spheres = spectral_spheres(A)
    r_s = max(s.radius for s, _ in spheres)
    rows = []
    for q in probes:
        _, kq, _ = gauges(pseudo_resolvent(A, q))
        finite_on = kq < on_tol
        model_on = model_membership(m, q, "s_spectrum")
        agree = finite_on == model_on
        rows.append({
            "q": q.to_array().tolist(),
            "kappa_section": kq,
            "section_on_spectrum": finite_on,
            "model_on_spectrum": model_on,
            "agree": agree,
            "expected_disagreement": (not agree) and m.variant != "diagonal",
        })
    return {
        "N": N,
        "section_gauges": {"norm": norm, "kappa": kappa, "gamma": "inf" if math.isinf(gamma) else gamma},
        "section_r_s": r_s,
        "section_spheres": [{"re": s.re, "im": s.im, "multiplicity": k} for s, k in spheres],
        "model": {"name": m.name, "r_s": m.r_s, "lower_index": m.lower_index, "invertible": m.invertible},
        "probes": rows,
        "disclaimer": POLLUTION_DISCLAIMER,
    }
