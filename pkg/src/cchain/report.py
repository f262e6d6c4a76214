"""The analysis pipeline: one group in, one self-checking report out."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bounds import (bound_report, cheeger_lower_holds, coupling_decay_holds, cutoff_check,
                     minorization_decay_holds, sgap_sandwich_holds)
from .chain import (DEFAULT_EPS, Distribution, check_detailed_balance, default_t_cap,
                    lumped_chain, lumped_stationary, mixing_profile, stationary,
                    transition_matrix, transition_matrix_float, two_step_check)
from .config import Config
from .groups import GroupTable
from .rational import frac_str
from .spectral import (cacp_charpoly, cacp_factors, direct_charpoly_check,
                       expected_multiplicities, numeric_spectrum, spectrum_matches)
from .structure import GroupStructure, analyze_structure, expected_census, expected_class_count, verify_census

SCHEMA_VERSION = 1


@dataclass
class AnalysisReport:
    group: dict
    census: dict
    is_ca: bool
    stationary: dict
    mixing: dict | None
    spectral: dict | None
    cacp: dict | None
    bounds: dict | None
    cutoff: dict | None
    conjectures: list = field(default_factory=list)
    family_checks: dict = field(default_factory=dict)
    consistency: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.consistency.values())

    @property
    def failed_checks(self) -> list[str]:
        return [k for k, v in self.consistency.items() if v is False]

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "group": self.group,
            "census": self.census,
            "is_ca": self.is_ca,
            "stationary": self.stationary,
            "mixing": self.mixing,
            "spectral": self.spectral,
            "cacp": self.cacp,
            "bounds": self.bounds,
            "cutoff": self.cutoff,
            "conjectures": self.conjectures,
            "family_checks": self.family_checks,
            "consistency": self.consistency,
            "ok": self.ok,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> "AnalysisReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        keys = ("group", "census", "is_ca", "stationary", "mixing", "spectral", "cacp",
                "bounds", "cutoff", "conjectures", "family_checks", "consistency")
        return cls(**{k: data[k] for k in keys})


def _fr(x) -> str | None:
    return None if x is None else frac_str(Fraction(x))


def conjecture_entries(family: str, param: int, spec) -> list[dict]:
    """Distance of the computed lambda_star from the conjectured 1 - 1/(m+1)."""
    if family == "gl2":
        m, formula = param, "1 - 1/(q+1)"
    elif family == "psl2_2k":
        m, formula = 2**param, "1 - 1/(2^k+1)"
    else:
        return []
    target = 1 - Fraction(1, m + 1)
    entry = {"name": f"{family}_lambda_star", "formula": formula, "target": frac_str(target),
             "lambda_star": spec.lambda_star,
             "discrepancy": abs(spec.lambda_star - float(target)),
             "discrepancy_exact": None}
    ex = spec.lambda_star_exact
    if ex is not None and ex.is_rational:
        entry["discrepancy_exact"] = frac_str(abs(ex.a - target))
    return [entry]


def _dihedral_checks(n: int, s: GroupStructure, spec, g: GroupTable, P, cfg: Config) -> dict:
    from .dihedral import dihedral_closed_form, group_lumped_matrix, lumped_distance_profile

    out: dict = {}
    closed = dihedral_closed_form(n) if n >= 3 else None
    if closed is not None and spec is not None:
        out["lambda_2_closed_form"] = closed.lambda_2
        out["lambda_min_closed_form"] = closed.lambda_m
        out["lambda_2_matches"] = abs(closed.lambda_2 - spec.lambda_2) <= 1e-9
        nontrivial = [e for e in spec.eigenvalues if abs(e.value) > 1e-9]
        want = {round(v, 9) for v, _ in closed.eigenvalues if abs(v) > 1e-12}
        # lumped spectrum is a subset of the full spectrum
        out["lumped_spectrum_in_full"] = all(
            any(abs(e.value - v) <= 1e-9 for e in nontrivial) for v in want)
    if n % 2 == 0:
        out["even_census_checked"] = True
        out["even_census_matches"] = verify_census(s, [(n, 1), (4, n // 2)])
        if spec is not None:
            out["multiplicity_of_1/2"] = spec.multiplicity_of(0.5)
            out["multiplicity_of_1/4"] = spec.multiplicity_of(0.25)
    if n >= 3:
        d = lumped_distance_profile(group_lumped_matrix(n), 60)
        hit = np.flatnonzero(d <= 0.25)
        out["lumped_t_mix"] = int(hit[0]) if len(hit) else None
    return out


def analyze(g: GroupTable, *, family: str | None = None, param: int | None = None,
            cfg: Config | None = None, skip_mixing: bool = False, exact_only: bool = False,
            t_cap: int | None = None, eps_list=DEFAULT_EPS) -> AnalysisReport:
    cfg = cfg or Config()
    family = family or g.family_tag.get("family", "cayley-file")
    s = analyze_structure(g)
    n = g.n
    checks: dict = {}

    # -- group and census --------------------------------------------------
    group = {"family": family, "parameters": {k: v for k, v in g.family_tag.items() if k != "family"},
             "name": g.name, "order": n, "center_size": s.z, "class_count": s.class_count,
             "is_abelian": s.is_abelian}
    checks["orbit_stabilizer"] = bool(all(
        len(s.centralizers[x]) * len(s.classes[s.class_of[x]]) == n for x in range(n)))
    center_from_centralizers = set(range(n))
    for c in s.centralizers:
        center_from_centralizers &= {int(v) for v in c}
    checks["center_is_intersection"] = center_from_centralizers == set(s.center)
    census = {"distinct_centralizers": [list(p) for p in s.census()], "c_star": s.c_star,
              "expected": None, "matches_expected": None,
              "ca_vacuous": s.is_abelian}
    exp = expected_census(family, param) if param is not None else None
    if exp is not None:
        census["expected"] = [list(p) for p in exp]
        census["matches_expected"] = verify_census(s, exp)
        checks["census"] = census["matches_expected"]
    exp_k = expected_class_count(family, param) if param is not None else None
    if exp_k is not None:
        checks["class_count"] = exp_k == s.class_count

    # -- chain -------------------------------------------------------------
    exact_P = n <= cfg.exact_threshold or exact_only
    P = transition_matrix(g, s) if exact_P else None
    pi = stationary(g, s, P)
    w = pi.weights
    stat = {"pi_min": frac_str(min(w)), "pi_max": frac_str(max(w)),
            "total": frac_str(pi.total), "pi_of_class_representatives": [frac_str(w[r]) for r in s.representatives()]}
    checks["stationary_total"] = pi.total == 1
    if P is not None:
        db = check_detailed_balance(P, pi)
    else:
        # pi(x) P(x, y) = pi(x) / |C_x| on the symmetric commuting relation
        vals = {w[x] / len(s.centralizers[x]) for x in range(n)}
        db = bool((s.commute == s.commute.T).all()) and len(vals) == 1
    stat["detailed_balance"] = db
    checks["detailed_balance"] = db

    # -- spectrum ----------------------------------------------------------
    Pnum = P if P is not None else transition_matrix_float(s)
    factors = None
    cacp = None
    if s.signature is not None:
        factors = cacp_factors(s.signature, n)
        poly = cacp_charpoly(s.signature, n)
        checks["cacp_factorization"] = factors.expand() == poly
        cacp = {"degree": poly.degree, "factored": factors.pretty(), "factors": factors.to_json()}
        if P is not None and n <= cfg.charpoly_full_max:
            cacp.update(mode="exact-identity", points=n + 1,
                        verified=direct_charpoly_check(P, poly, full=True))
        elif P is not None and n <= cfg.charpoly_partial_max:
            k = cfg.charpoly_partial_points
            cacp.update(mode="exact-partial", points=k,
                        verified=direct_charpoly_check(P, poly, trials=k))
        else:
            cacp.update(mode="numeric-spectrum", points=0, verified=None)
    spec = numeric_spectrum(Pnum, pi, factors, exact_tol=cfg.exact_match_tol)
    spectral = spec.to_json()
    checks["multiplicities_sum_to_order"] = spec.dimension == n
    if factors is not None:
        matches = spectrum_matches(spec, expected_multiplicities(factors), cfg.exact_match_tol)
        checks["spectrum_matches_cacp"] = matches
        if cacp["verified"] is None:
            cacp["verified"] = matches
        checks["cacp_verified"] = cacp["verified"]
        spectral["charpoly"] = factors.pretty()

    # -- mixing ------------------------------------------------------------
    profile = None
    mixing = None
    if not skip_mixing:
        T = t_cap or cfg.t_cap or default_t_cap(s)
        exact_mix = exact_only or n <= cfg.exact_threshold
        profile = mixing_profile(P if exact_mix else Pnum, pi, eps_list, T,
                                 starts=s.representatives(), exact=exact_mix,
                                 tol=cfg.float_tol)
        mixing = profile.to_json()
        mixing["t_cap"] = T
        if s.is_abelian:
            checks["abelian_one_step"] = profile.d_values[1] == 0 if len(profile.d_values) > 1 else False

    # -- bounds ------------------------------------------------------------
    br = bound_report(g.name, s, P, w, spec, profile, eps_list, cfg.phi_brute_max)
    bounds = br.to_json()
    cut = None
    if profile is not None:
        cc = cutoff_check(profile, spec, s, w)
        cut = {"ratio": cc.ratio, "ceiling": cc.ceiling, "within_ceiling": cc.within_ceiling,
               "hypothesis_ok": cc.hypothesis_ok, "one_minus_lambda_star": cc.one_minus_lambda_star,
               "one_minus_lambda_star_exact": _fr(cc.one_minus_lambda_star_exact),
               "applicable": cc.applicable, "disproved": cc.disproved, "note": cc.note}
        t_mix = profile.t_mix_quarter
        bounds["t_mix"] = t_mix
        if t_mix is not None and not s.is_abelian:
            if br.lb_cheeger is not None and br.lb_cheeger_hypothesis_ok:
                checks["lb_cheeger<=t_mix"] = br.lb_cheeger <= t_mix
            checks["t_mix<=ub_minorization"] = t_mix <= br.ub_minorization
            if br.ub_coupling is not None:
                checks["t_mix<=ub_coupling"] = t_mix <= br.ub_coupling
            checks["lb_eigen<=t_mix"] = br.lb_eigen <= t_mix + 1e-12
            checks["t_mix<=ub_eigen"] = t_mix <= br.ub_eigen
            checks["minorization_decay"] = minorization_decay_holds(profile, br.delta)
            if br.alpha is not None:
                checks["coupling_decay"] = coupling_decay_holds(profile, br.alpha)
            if cc.applicable:
                checks["cutoff_ratio_within_ceiling"] = cc.within_ceiling
        if br.phi_star_exact is not None and t_mix is not None:
            checks["cheeger_lower"] = cheeger_lower_holds(br.phi_star_exact, t_mix)
    if br.phi_star_exact is not None:
        checks["sgap_sandwich"] = sgap_sandwich_holds(br.phi_star_exact, spec.lambda_2)
    if br.phi_of_set is not None and br.lb_cheeger_centralizer is not None:
        checks["phi_of_set=z/c"] = br.phi_of_set == Fraction(s.z, br.lb_cheeger_centralizer)
    if not s.is_abelian and n <= cfg.two_step_max:
        holds, minimum, bound = two_step_check(s)
        bounds["two_step"] = {"holds": holds, "min": frac_str(minimum), "bound": frac_str(bound)}
        checks["two_step_bound"] = holds

    # -- family extras -----------------------------------------------------
    fam_checks: dict = {}
    if family == "dihedral" and param is not None:
        fam_checks = _dihedral_checks(param, s, spec, g, P, cfg)
        if "lambda_2_matches" in fam_checks:
            checks["dihedral_lambda_2"] = fam_checks["lambda_2_matches"]
            checks["dihedral_lumped_spectrum"] = fam_checks["lumped_spectrum_in_full"]
        if "even_census_matches" in fam_checks:
            checks["dihedral_even_census"] = fam_checks["even_census_matches"]
    if family == "heisenberg" and param is not None:
        gap = spec.gap_exact()
        fam_checks["gap_exact"] = _fr(gap)
        checks["heisenberg_gap_is_1/p"] = gap == Fraction(1, param)

    return AnalysisReport(
        group=group, census=census, is_ca=s.is_ca, stationary=stat, mixing=mixing,
        spectral=spectral, cacp=cacp, bounds=bounds, cutoff=cut,
        conjectures=conjecture_entries(family, param, spec) if param is not None else [],
        family_checks=fam_checks, consistency={k: bool(v) for k, v in checks.items()},
    )


# -- sweeps ---------------------------------------------------------------------

def trend_row(param: int, r: AnalysisReport) -> dict:
    row = {"param": param, "order": r.group["order"],
           "one_minus_lambda_star": r.spectral["gap"] if r.spectral else None,
           "one_minus_lambda_star_exact": (r.cutoff or {}).get("one_minus_lambda_star_exact"),
           "t_mix": r.mixing["t_mix_quarter"] if r.mixing else None,
           "cutoff_ratio": (r.cutoff or {}).get("ratio"),
           "ub_minorization": r.bounds["ub_minorization"] if r.bounds else None,
           "conjecture_discrepancy": r.conjectures[0]["discrepancy"] if r.conjectures else None,
           "lumped_t_mix": r.family_checks.get("lumped_t_mix"),
           "ok": r.ok}
    return row


def sweep_summary(rows: list[dict]) -> dict:
    lumped = [r["lumped_t_mix"] for r in rows if r["lumped_t_mix"] is not None]
    tm = [r["t_mix"] for r in rows if r["t_mix"] is not None]
    return {"max_lumped_t_mix": max(lumped) if lumped else None,
            "max_t_mix": max(tm) if tm else None,
            "all_ok": all(r["ok"] for r in rows)}


# -- rendering ------------------------------------------------------------------

def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [["-" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    line = lambda r: "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    out = [line(cells[0]), line(["-" * w for w in widths])]
    out += [line(r) for r in cells[1:]]
    return "\n".join(out)


def render_human(r: AnalysisReport) -> str:
    g = r.group
    out = [f"{g['name']}: |G| = {g['order']}, |Z| = {g['center_size']}, "
           f"{g['class_count']} classes, CA = {r.is_ca}"
           + (" (abelian; CA condition vacuous)" if g["is_abelian"] else "")]
    if r.census["distinct_centralizers"]:
        out += ["", "distinct non-central centralizers",
                _table(["size", "count"], r.census["distinct_centralizers"])]
    if r.spectral:
        out += ["", "eigenvalues",
                _table(["eigenvalue", "multiplicity"],
                       [[e["exact"] or f"{e['value']:.12g}", e["multiplicity"]]
                        for e in r.spectral["eigenvalues"]])]
        out.append(f"lambda_star = {r.spectral['lambda_star_exact'] or r.spectral['lambda_star']:}"
                   f", t_rel = {r.spectral['t_rel']:.6g}")
    if r.cacp:
        out += ["", f"characteristic polynomial: {r.cacp['factored']}",
                f"verified: {r.cacp['verified']} ({r.cacp['mode']}, {r.cacp['points']} points)"]
    if r.mixing:
        m = r.mixing
        out += ["", f"t_mix(1/4) = {m['t_mix_quarter']}   "
                + "   ".join(f"t_mix({e}) = {t}" for e, t in m["t_mix_of"].items() if e != "1/4")
                + f"   [{m['mode']}]"]
    if r.bounds:
        b = r.bounds
        rows = [["Cheeger lower", b["lb_cheeger"], b["lb_cheeger_hypothesis_ok"]],
                ["eigen lower", None if b["lb_eigen"] is None else f"{b['lb_eigen']:.6g}", None],
                ["minorization upper", b["ub_minorization"], None],
                ["coupling upper", b["ub_coupling"], None],
                ["eigen upper", b["ub_eigen"], None],
                ["Phi(C \\ Z)", b["phi_of_set"], None],
                ["Phi_star", b["phi_star_exact"], None]]
        out += ["", _table(["bound", "value", "hypothesis"], rows)]
    if r.cutoff and r.cutoff["applicable"]:
        c = r.cutoff
        out.append(f"t_mix/(t_rel-1) = {c['ratio']:.6g} <= {c['ceiling']:.6g}: {c['within_ceiling']}")
    for c in r.conjectures:
        out.append(f"conjecture {c['formula']}: |lambda_star - {c['target']}| = {c['discrepancy']:.3g}")
    if r.family_checks:
        out += ["", "family checks"] + [f"  {k}: {v}" for k, v in r.family_checks.items()]
    failed = r.failed_checks
    out += ["", f"consistency: {'ok' if not failed else 'FAILED ' + ', '.join(failed)}"]
    return "\n".join(out) + "\n"


def render_csv(r: AnalysisReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["section", "key", "value", "multiplicity"])
    if r.spectral:
        for e in r.spectral["eigenvalues"]:
            w.writerow(["eigenvalue", e["exact"] or "", repr(e["value"]), e["multiplicity"]])
    if r.mixing:
        for t, d in enumerate(r.mixing["d_values_float"]):
            w.writerow(["d", t, repr(d), ""])
    return buf.getvalue()


def render_trend(rows: list[dict], fmt: str) -> str:
    keys = ["param", "order", "one_minus_lambda_star", "one_minus_lambda_star_exact", "t_mix",
            "cutoff_ratio", "ub_minorization", "conjecture_discrepancy", "lumped_t_mix", "ok"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow(["" if r[k] is None else r[k] for k in keys])
        return buf.getvalue()
    def show(v):
        return f"{v:.6g}" if isinstance(v, float) else v
    return _table(keys, [[show(r[k]) for k in keys] for r in rows]) + "\n"
