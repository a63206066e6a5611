"""Scenario data for the eleven exceptional (type, p) cases and sign matching.

Reference bases for centralisers are recorded in a Chevalley basis whose
signs may differ from the one built by :mod:`badlie.chevalley`.  Two
Chevalley bases with the same toral part differ by signs
``e'_a = eps_a e_a`` with ``eps_a = eps_{-a}``; the search below looks for
such signs making every recorded vector lie in the computed centraliser.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from .chevalley import LieAlgebra
from .linform import LinearForm, regular_form
from .rootsystem import neg


def load_json(name: str) -> dict:
    return json.loads(resources.files("badlie.data").joinpath(name).read_text())


def load_scenarios(validate: bool = True) -> dict:
    doc = load_json("appendix.json")
    if validate:
        jsonschema.validate(doc, load_json("scenario.schema.json"))
    return doc


def scenario(doc: dict, type_name: str, p: int) -> dict:
    for s in doc["scenarios"]:
        if s["type"] == type_name and s["p"] == p:
            return s
    raise KeyError(f"no scenario for {type_name} p={p}")


def expected(s: dict, key: str):
    """Expected value of ``key`` (values carry a provenance label)."""
    entry = s["expected"].get(key)
    return None if entry is None else entry["value"]


@dataclass
class SignMatch:
    signs: dict[tuple[int, ...], int]
    chi: LinearForm
    vectors: np.ndarray


def _term_vectors(alg: LieAlgebra, terms_list) -> list[np.ndarray]:
    return [alg.element(terms) for terms in terms_list]


def _positive(root) -> tuple[int, ...]:
    root = tuple(root)
    return root if sum(root) > 0 else neg(root)


def match_signs(alg: LieAlgebra, terms_list) -> SignMatch | None:
    """Find signs under which each recorded vector centralises the regular form.

    Returns None when no sign assignment works.
    """
    p = alg.p
    r = alg.rank
    simple = [alg.system.simple_root(i) for i in range(r)]
    partial = []
    for i in range(r):
        v = alg.zero()
        v[alg.neg_index(i)] = 1
        partial.append(alg.pairing_matrix(v))
    vec_roots = []
    for terms in terms_list:
        roots = sorted({_positive(t["root"]) for t in terms if "root" in t})
        vec_roots.append(roots)

    def signed(terms, eps) -> np.ndarray:
        v = alg.zero()
        for t in terms:
            c = int(t.get("coeff", 1))
            if "root" in t:
                v[alg.root_vector_index(t["root"])] += c * eps[_positive(t["root"])]
            else:
                v[alg.h_index(int(t["h"]) - 1)] += c
        return v % p

    sign_sets = [(1,)] if p == 2 else [(1,) + s for s in itertools.product((1, -1), repeat=r - 1)]
    for simple_signs in sign_sets:
        if p == 2:
            simple_signs = (1,) * r
        fixed = dict(zip(simple, simple_signs))
        M = sum(s * Mi for s, Mi in zip(simple_signs, partial)) % p
        options = []
        for terms, roots in zip(terms_list, vec_roots):
            free = [a for a in roots if a not in fixed]
            good = []
            for choice in itertools.product((1, -1), repeat=len(free)):
                if free and choice[0] == -1 and not any(a in fixed for a in roots):
                    continue  # overall sign of a vector is irrelevant
                eps = dict(fixed)
                eps.update(zip(free, choice))
                if not (signed(terms, eps) @ M % p).any():
                    good.append(dict(zip(free, choice)))
                if p == 2:
                    break
            if not good:
                break
            options.append((good, not any(a in fixed for a in roots)))
        else:
            sol = _combine(options)
            if sol is not None:
                sol.update(fixed)
                chi_vals = alg.zero()
                for i, s in enumerate(simple_signs):
                    chi_vals[alg.neg_index(i)] = s % p
                chi = LinearForm(alg, chi_vals, tuple(range(1, r + 1)))
                vecs = np.array([signed(t, {a: sol.get(a, 1) for a in rs} | sol)
                                 for t, rs in zip(terms_list, vec_roots)])
                return SignMatch(sol, chi, vecs)
    return None


def _combine(options) -> dict | None:
    """Pick one assignment per vector, consistent on shared roots (each may be negated)."""

    def rec(k, acc):
        if k == len(options):
            return acc
        good, flippable = options[k]
        for opt in good:
            for flip in ((1, -1) if flippable else (1,)):
                cand = {a: s * flip for a, s in opt.items()}
                if all(acc.get(a, s) == s for a, s in cand.items()):
                    res = rec(k + 1, acc | cand)
                    if res is not None:
                        return res
        return None

    return rec(0, {})


def regular_form_for(alg: LieAlgebra) -> LinearForm:
    return regular_form(alg)
