"""Command-line interface: centralisers, bounds, orbits, baby Verma modules and scenario checks.

Exit codes: 0 success, 1 expectation mismatch, 2 invalid input, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import ffield
from .appendix import expected, load_scenarios, match_signs
from .chevalley import CONVENTIONS, chevalley_algebra
from .divisibility import (BoundError, best_bound, bound_nonspecial, bound_p_closed, lie_closure,
                           verify_induction_subalgebra)
from .linform import (centralizer, d_chi, element_centralizer, regular_nilpotent, standard_levi_form,
                      zero_form)
from .meataxe import MeatAxeInconclusive
from .verma import HighestWeightError, WeightError, build_baby_verma, linkage_components, verma_certificate
from .weights import all_weights, orbit_count

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class InputError(ValueError):
    """Bad flag values."""


# ---------------------------------------------------------------------------
# shared helpers


def _algebra(args):
    try:
        return chevalley_algebra(args.type, args.p, args.convention)
    except (KeyError, ValueError) as err:
        raise InputError(str(err)) from err


def _form(args, alg):
    if args.zero:
        return zero_form(alg)
    if args.levi is not None:
        try:
            subset = [int(t) for t in args.levi.split(",") if t.strip()]
        except ValueError as err:
            raise InputError(f"--levi expects comma-separated simple indices, got {args.levi!r}") from err
        try:
            return standard_levi_form(alg, subset)
        except ValueError as err:
            raise InputError(str(err)) from err
    return standard_levi_form(alg, range(1, alg.rank + 1))


def _form_json(chi) -> dict:
    return {"levi_subset": None if chi.levi_subset is None else list(chi.levi_subset),
            "support": chi.support_labels()}


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _check(key, exp, actual, provenance=None) -> dict:
    return {"key": key, "expected": exp, "actual": actual, "ok": exp == actual, "provenance": provenance}


def _checks_text(title: str, checks: list[dict]) -> str:
    lines = [title]
    for c in checks:
        mark = "PASS" if c["ok"] else "FAIL"
        lines.append(f"  [{mark}] {c['key']}: expected {c['expected']}, got {c['actual']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def cmd_centralizer(args) -> int:
    alg = _algebra(args)
    if args.of == "element":
        rep = element_centralizer(alg, regular_nilpotent(alg))
        chi_info = None
    else:
        chi = _form(args, alg)
        rep = centralizer(chi)
        chi_info = _form_json(chi)
    payload = rep.to_json()
    payload["chi"] = chi_info
    payload["convention"] = args.convention
    payload["codim"] = rep.codim
    text = [f"{alg.name} p={alg.p} centraliser of the {'regular nilpotent element' if args.of == 'element' else 'p-character'}",
            f"  dim {rep.dim}, codim {rep.codim}" + (f", d(chi) = {rep.d_chi}" if rep.d_chi is not None else "")]
    if args.basis:
        for row in rep.basis:
            text.append("  " + " + ".join(f"{int(row[j])}*{alg.label(j)}" for j in np.flatnonzero(row)))
    _emit(args, payload, "\n".join(text))
    return EXIT_OK


def table1_rows(convention: str = "positive") -> list[dict]:
    """Centraliser dimensions of the regular nilpotent e and the regular form, per scenario."""
    rows = []
    for s in load_scenarios()["scenarios"]:
        alg = chevalley_algebra(s["type"], s["p"], convention)
        ce = element_centralizer(alg, regular_nilpotent(alg)).dim
        cc = centralizer(standard_levi_form(alg, s["chi"]["levi_subset"])).dim
        exp_e, exp_c = expected(s, "dim_c_e"), expected(s, "dim_c_chi")
        rows.append({"type": s["type"], "p": s["p"], "dim_c_e": ce, "dim_c_chi": cc,
                     "expected": [exp_e, exp_c], "ok": [ce == exp_e, cc == exp_c]})
    return rows


def cmd_table1(args) -> int:
    rows = table1_rows(args.convention)
    ok = all(all(r["ok"]) for r in rows)
    lines = [f"{'type':<5}{'p':>3}  {'dim c(e)':>9}  {'dim c(chi)':>11}"]
    for r in rows:
        cells = [f"{v}{'' if good else ' (expected ' + str(e) + ')'}"
                 for v, e, good in zip((r["dim_c_e"], r["dim_c_chi"]), r["expected"], r["ok"])]
        mark = "PASS" if all(r["ok"]) else "FAIL"
        lines.append(f"{r['type']:<5}{r['p']:>3}  {cells[0]:>9}  {cells[1]:>11}  {mark}")
    _emit(args, {"rows": rows, "ok": ok, "convention": args.convention}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_bound(args) -> int:
    alg = _algebra(args)
    chi = _form(args, alg)
    try:
        if args.method == "nonspecial":
            rep = bound_nonspecial(chi)
        elif args.method == "p-closed":
            psi = alg.system.positive_roots if args.psi is None else json.loads(args.psi)
            rep = bound_p_closed(chi, psi)
        else:
            rep = best_bound(chi)
    except BoundError as err:
        payload = {"type": alg.name, "p": alg.p, "chi": _form_json(chi), "error": err.condition,
                   "witness": json.loads(json.dumps(err.witness, default=str))}
        _emit(args, payload, f"{alg.name} p={alg.p}: {err}")
        return EXIT_MISMATCH
    except json.JSONDecodeError as err:
        raise InputError(f"--psi must be a JSON list of roots: {err}") from err
    payload = {"type": alg.name, "p": alg.p, "chi": _form_json(chi)} | rep.to_json()
    text = f"{alg.name} p={alg.p}: module dimensions divisible by {alg.p}^{rep.exponent} ({rep.method})"
    if args.expect is not None and rep.exponent != args.expect:
        _emit(args, payload | {"expected": args.expect}, text + f"  expected {args.expect}")
        return EXIT_MISMATCH
    _emit(args, payload, text)
    return EXIT_OK


def cmd_orbits(args) -> int:
    try:
        rep = orbit_count(args.type, args.p)
    except (KeyError, ValueError) as err:
        raise InputError(str(err)) from err
    text = f"{rep.type_name} p={rep.p}: {rep.orbit_count} dot orbits on {rep.p}^{len(rep.representatives[0])} weights"
    if args.sizes:
        text += "\n" + "\n".join(f"  {list(r)}: {n}" for r, n in zip(rep.representatives, rep.orbit_sizes))
    _emit(args, rep.to_json(), text)
    if args.expect is not None and rep.orbit_count != args.expect:
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_weight(s: str, rank: int) -> tuple[int, ...]:
    try:
        w = tuple(int(t) for t in s.split(","))
    except ValueError as err:
        raise InputError(f"--lambda expects comma-separated integers, got {s!r}") from err
    if len(w) != rank:
        raise InputError(f"--lambda needs {rank} coordinates")
    return w


def cmd_verma(args) -> int:
    alg = _algebra(args)
    chi = _form(args, alg)
    if args.all_lambda:
        weights = [tuple(int(c) for c in w) for w in all_weights(alg.rank, alg.p)]
    elif args.weight is not None:
        weights = [_parse_weight(args.weight, alg.rank)]
    else:
        raise InputError("give --lambda or --all-lambda")
    modules = []
    inconclusive = False
    lines = []
    for lam in weights:
        try:
            Z = build_baby_verma(alg, chi, lam)
        except (WeightError, ValueError) as err:
            raise InputError(str(err)) from err
        cert = verma_certificate(Z, args.seed, args.budget, args.check_irreducible, args.factors)
        inconclusive |= args.check_irreducible and cert["irreducible"] is None
        inconclusive |= args.factors and cert["factor_dims"] is None
        modules.append(cert)
        desc = {True: "irreducible", False: "reducible", None: "inconclusive" if args.check_irreducible else "built"}
        line = f"  lambda={list(Z.weight)} dim {Z.dim}: {desc[cert['irreducible']]}"
        if cert["factor_dims"] is not None:
            line += f", factors {cert['factor_dims']}"
        lines.append(line)
    payload = {"modules": modules}
    head = f"{alg.name} p={alg.p} baby Verma modules"
    if args.check_irreducible:
        n_irr = sum(1 for m in modules if m["irreducible"])
        payload["irreducible_count"] = n_irr
        head += f": {n_irr}/{len(modules)} irreducible"
    if args.linkage:
        res = linkage_components(alg, chi, args.seed, args.budget)
        payload["linkage"] = res.to_json()
        inconclusive |= not res.complete
        lines.append(f"  linkage: {len(res.components)} components"
                     + ("" if res.complete else " (partial: budget exhausted)"))
    _emit(args, payload, "\n".join([head] + lines))
    return EXIT_INCONCLUSIVE if inconclusive else EXIT_OK


def run_scenario(s: dict, convention: str = "positive") -> dict:
    """Recompute every expectation attached to one scenario."""
    alg = chevalley_algebra(s["type"], s["p"], convention)
    chi = standard_levi_form(alg, s["chi"]["levi_subset"])
    exp = s["expected"]
    checks: list[dict] = []
    facts: dict = {}

    def add(key, actual):
        checks.append(_check(key, exp[key]["value"], actual, exp[key]["provenance"]))

    add("dim_c_e", element_centralizer(alg, regular_nilpotent(alg)).dim)
    rep = centralizer(chi)
    add("dim_c_chi", rep.dim)
    if "d_chi" in exp:
        add("d_chi", d_chi(chi, rep))
    bound = best_bound(chi)
    add("exponent", bound.exponent)
    add("method", bound.method)
    if "psi" in s:
        try:
            pc = bound_p_closed(chi, s["psi"])
            checks.append(_check("psi certified", True, True))
            if "psi_size" in exp:
                add("psi_size", pc.exponent)
        except BoundError as err:
            checks.append(_check("psi certified", True, f"failed: {err.condition}"))
    if "subalgebra" in s:
        gens = [alg.element(t) for t in s["subalgebra"]]
        cand = lie_closure(alg, gens)
        add("subalgebra_dim", cand.dim)
        try:
            ind = verify_induction_subalgebra(cand, chi)
            add("induced_exponent", ind.exponent)
            facts["induction"] = ind.to_json()
            if rep.codim % 2 == 0:
                facts["induced_exponent_exceeds_d_chi"] = ind.exponent > rep.codim // 2
        except BoundError as err:
            checks.append(_check("induced_exponent", exp["induced_exponent"]["value"], err.condition,
                                 exp["induced_exponent"]["provenance"]))
    if "orbit_count" in exp:
        add("orbit_count", orbit_count(alg.system, alg.p).orbit_count)
    if "centralizer_basis" in s:
        m = match_signs(alg, s["centralizer_basis"])
        if m is None:
            checks.append(_check("centralizer basis sign match", True, False))
        else:
            ok = all(not (v @ alg.pairing_matrix(m.chi.values) % alg.p).any() for v in m.vectors)
            checks.append(_check("centralizer basis sign match", True, ok))
            checks.append(_check("centralizer basis rank", exp["dim_c_chi"]["value"],
                                 ffield.rank(m.vectors, alg.p), exp["dim_c_chi"]["provenance"]))
            facts["sign_changes"] = sorted(list(a) for a, e in m.signs.items() if e == -1)
    return {"id": s["id"], "type": s["type"], "p": s["p"], "checks": checks,
            "ok": all(c["ok"] for c in checks), "facts": facts}


def _run_one(job):
    s, convention = job
    return run_scenario(s, convention)


def cmd_verify_appendix(args) -> int:
    doc = load_scenarios()
    scenarios = doc["scenarios"]
    if args.only:
        wanted = set(args.only.split(","))
        unknown = wanted - {s["id"] for s in scenarios}
        if unknown:
            raise InputError(f"unknown scenario ids: {sorted(unknown)}")
        scenarios = [s for s in scenarios if s["id"] in wanted]
    jobs = [(s, args.convention) for s in scenarios]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))  # map keeps scenario order
    else:
        results = [_run_one(j) for j in jobs]
    ok = all(r["ok"] for r in results)
    text = "\n".join(_checks_text(f"{r['id']}: {'PASS' if r['ok'] else 'FAIL'}", r["checks"]) for r in results)
    _emit(args, {"version": doc["version"], "scenarios": results, "ok": ok}, text)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument parsing


def _common(sp, typed: bool = True, form: bool = False):
    if typed:
        sp.add_argument("--type", required=True, help="root system, e.g. G2, F4, E8, A2")
        sp.add_argument("--p", type=int, required=True, help="prime characteristic")
    if form:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--regular", action="store_true", help="regular nilpotent form (default)")
        g.add_argument("--zero", action="store_true", help="chi = 0")
        g.add_argument("--levi", metavar="I", help="standard Levi form on simple indices, e.g. 1,3")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--convention", choices=CONVENTIONS, default="positive",
                    help="sign of the extraspecial structure constants")
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--output", "-o", help="write to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="badlie", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("centralizer", help="centraliser of a p-character or of the regular nilpotent")
    _common(sp, form=True)
    sp.add_argument("--of", choices=("form", "element"), default="form")
    sp.add_argument("--basis", action="store_true", help="list the basis in text output")
    sp.set_defaults(func=cmd_centralizer)

    sp = sub.add_parser("table1", help="centraliser dimensions for the eleven exceptional cases")
    _common(sp, typed=False)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("bound", help="divisibility exponent for U_chi(g)-modules")
    _common(sp, form=True)
    sp.add_argument("--method", choices=("best", "nonspecial", "p-closed"), default="best")
    sp.add_argument("--psi", help="JSON list of positive roots for the p-closed route")
    sp.add_argument("--expect", type=int, help="exit 1 unless the exponent equals this")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("orbits", help="dot-action orbits of the Weyl group on weights mod p")
    _common(sp)
    sp.add_argument("--sizes", action="store_true", help="list orbit representatives and sizes")
    sp.add_argument("--expect", type=int, help="exit 1 unless the orbit count equals this")
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("verma", help="baby Verma modules (rank <= 2)")
    _common(sp, form=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="weight", help="weight in fundamental coordinates, e.g. 0,1")
    g.add_argument("--all-lambda", action="store_true")
    sp.add_argument("--check-irreducible", action="store_true")
    sp.add_argument("--factors", action="store_true", help="composition factor dimensions")
    sp.add_argument("--linkage", action="store_true", help="components of the shared-factor graph")
    sp.add_argument("--budget", type=int, default=40, help="MeatAxe attempts per module")
    sp.set_defaults(func=cmd_verma)

    sp = sub.add_parser("verify-appendix", help="recompute every shipped scenario expectation")
    _common(sp, typed=False)
    sp.add_argument("--only", help="comma-separated scenario ids, e.g. F4p2,E6p3")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.set_defaults(func=cmd_verify_appendix)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # argparse exits with status 2 on malformed flags
    try:
        return args.func(args)
    except (InputError, WeightError, HighestWeightError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except MeatAxeInconclusive as err:
        print(f"inconclusive: {err}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
