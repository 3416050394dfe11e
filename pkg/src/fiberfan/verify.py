"""The invariant suite behind ``fiberfan verify``.

Each check yields a :class:`Check` with the exact witness values; a failing
check always names the offending count, weight, cone or point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact import format_rational
from .fan import f_vector, fan_to_json, is_complete
from .fiber import check_constancy
from .models import (
    ehrhart_count,
    gt_polytope,
    hypersimplex,
    invariant_count,
    nbar_fan,
    phi,
    weyl_dim,
    witness_points,
)
from .polytope import affine_image, normalized_volume

# nbar pipelines above this size only run under an explicit time budget
NBAR_DEFAULT_MAX = 5


@dataclass
class Check:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


def _fmt(v):
    return [format_rational(x) for x in v]


def structural_checks(n: int) -> list[Check]:
    G, D = gt_polytope(n), hypersimplex(n)
    out = [
        Check(f"dim gt({n}) = {2 * n - 4}", G.dim == 2 * n - 4, {"dim": G.dim}),
        Check(f"dim hypersimplex({n}) = {n - 1}", D.dim == n - 1, {"dim": D.dim}),
    ]
    img = affine_image(G, phi(n).matrix)
    same = img.vertices == D.vertices
    witness = {"image_vertices": len(img.vertices), "hypersimplex_vertices": len(D.vertices)}
    if not same:
        witness["symmetric_difference"] = [_fmt(v) for v in sorted(set(img.vertices) ^ set(D.vertices))]
    out.append(Check(f"image(gt({n}), phi) = hypersimplex({n})", same, witness))
    return out


def counting_checks(n: int, k: int, parity: bool = True) -> list[Check]:
    out = []
    hd = ehrhart_count(n, k, parity=parity)
    witness = {"count": hd.total_count, "oracle": hd.oracle_dim}
    if not hd.matches and not parity:
        witness["non_parity_points"] = [list(p) for p in witness_points(n, k)]
    out.append(Check(f"ehrhart({n},{k}) = weyl_dim(({k},{k}),{n})", hd.matches, witness))
    bad = hd.weight_mismatches
    out.append(Check(f"per-weight counts = kostka for {n}, {k}", not bad,
                     {"weights": len(hd.per_weight),
                      "mismatches": [{"weight": list(r), "count": c, "kostka": o} for r, (c, o) in sorted(bad.items())]}))
    if (2 * k) % n == 0:
        count, oracle = invariant_count(n, k, parity=parity)
        out.append(Check(f"invariant_count({n},{k}) = kostka", count == oracle,
                         {"count": count, "kostka": oracle}))
    return out


def pipeline_checks(n: int, seed: int = 0, deadline=None) -> list[Check]:
    res = nbar_fan(n, deadline)
    F = res.fan_from_sigma
    fv = f_vector(F)
    cc = res.chamber_complex
    out = [
        Check(f"nbar({n}) fan agreement", res.agreement,
              {} if res.agreement else {"fan_from_sigma": fan_to_json(F),
                                        "fan_from_refinement": fan_to_json(res.fan_from_refinement)}),
        Check(f"nbar({n}) dim sigma = {n - 3}", res.dimension_formula_holds and res.dim == n - 3,
              {"dim": res.dim, "source_dim": res.source_polytope_dim, "image_dim": res.image_dim}),
        Check(f"nbar({n}) fan complete", is_complete(F), {"f_vector": list(fv)}),
    ]
    vol = normalized_volume(cc.base)
    out.append(Check(f"nbar({n}) chamber volumes sum to vol(hypersimplex)", cc.total_volume == vol,
                     {"sum": format_rational(cc.total_volume), "volume": format_rational(vol),
                      "chambers": len(cc.chambers)}))
    if res.dim == 2:
        out.append(Check(f"nbar({n}) rays = maximal cones", fv[1] == fv[2],
                         {"rays": fv[1], "maximal_cones": fv[2]}))
    bad = check_constancy(gt_polytope(n), phi(n), cc, seed)
    out.append(Check(f"nbar({n}) fiber type constant on chambers", not bad, {"violations": bad}))
    return out


def run_checks(n_max: int, k_max: int, parity: bool = True, seed: int = 0, deadline=None,
               include_pipeline: bool = True) -> list[Check]:
    if n_max < 3 or k_max < 1:
        raise ValueError("need n_max >= 3 and k_max >= 1")
    checks = []
    for n in range(3, n_max + 1):
        checks.extend(structural_checks(n))
        for k in range(1, k_max + 1):
            checks.extend(counting_checks(n, k, parity))
            if deadline is not None:
                deadline.check("counting checks")
        if include_pipeline and (n <= NBAR_DEFAULT_MAX or (deadline is not None and deadline.seconds)):
            checks.extend(pipeline_checks(n, seed, deadline))
    return checks


def weyl_table(n_max: int, k_max: int) -> dict:
    return {f"{n},{k}": weyl_dim((k, k), n) for n in range(3, n_max + 1) for k in range(1, k_max + 1)}
