"""The bundled corpus: small lattices, quantaloids, categories, modules and locale maps.

``build_corpus()`` produces the workspace dictionary from scratch;
``data/corpus.json`` is its frozen serialization and ``load_corpus()`` reads
that file.  The ``expect`` annotations were computed once and then frozen.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources
from pathlib import Path

from .quantaloid import free_quantale, rel
from .workspace import Workspace, load_workspace, load_workspace_data

LATTICES = {
    "L1": {"elements": ["0"], "leq": []},
    "L2": {"elements": ["0", "1"], "leq": [["0", "1"]]},
    "L3": {"elements": ["0", "e", "1"], "leq": [["0", "e"], ["e", "1"]]},
    "C4": {"elements": ["0", "a", "b", "1"], "leq": [["0", "a"], ["a", "b"], ["b", "1"]]},
    "M2": {"elements": ["0", "a", "b", "1"], "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]]},
    "M3": {
        "elements": ["0", "a", "b", "c", "1"],
        "leq": [["0", "a"], ["0", "b"], ["0", "c"], ["a", "1"], ["b", "1"], ["c", "1"]],
    },
    "N5": {
        "elements": ["0", "a", "b", "c", "1"],
        "leq": [["0", "a"], ["a", "c"], ["c", "1"], ["0", "b"], ["b", "1"]],
    },
}

Z2 = {"elements": ["1", "z"], "unit": "1", "table": [["1", "1", "1"], ["1", "z", "z"], ["z", "1", "z"], ["z", "z", "1"]]}
NIL3 = {
    "elements": ["1", "a", "0"],
    "unit": "1",
    "table": [[x, y, {"1": y}.get(x, x if y == "1" else "0")] for x in ["1", "a", "0"] for y in ["1", "a", "0"]],
}


def _chaotic_pair() -> dict:
    """Two objects, every hom the two-element chain, composition by meet."""
    objs = ["A", "B"]
    compose = []
    for A, B, C in itertools.product(objs, repeat=3):
        for g in "01":
            for f in "01":
                compose.append([A, B, C, g, f, min(g, f)])
    return {
        "objects": objs,
        "homs": {f"{A}->{B}": "L2" for A in objs for B in objs},
        "compose": compose,
        "identities": {"A": "1", "B": "1"},
    }


def _subsets(S):
    out = []
    for r in range(len(S) + 1):
        out.extend(itertools.combinations(S, r))
    return out


def _powerset_entry(S) -> tuple[dict, dict]:
    names = {frozenset(s): "{" + ",".join(s) + "}" for s in _subsets(S)}
    leq = [[names[a], names[b]] for a in names for b in names if a < b and len(b - a) == 1]
    return {"elements": list(names.values()), "leq": leq}, names


def _row_vector_module() -> dict:
    """``2^S`` over ``rel(S)`` with ``x ∘ R = {u | (s, u) ∈ R for some s ∈ x}``."""
    S = ["0", "1"]
    q = rel(S)
    lat, names = _powerset_entry(S)
    action = {}
    for f in q.arrows():
        R = q.relation_of[f.elt]
        action[f.elt] = [[names[x], names[frozenset(u for (s, u) in R if s in x)]] for x in names]
    return {"base": "rel2", "fibers": {"*": lat}, "action": action}


def _swap_module() -> dict:
    """``M2`` over the free quantale on ``Z/2`` with ``z`` swapping the atoms."""
    q = free_quantale(Z2["elements"], {(a, b): c for a, b, c in Z2["table"]}, Z2["unit"])
    swap = {"0": "0", "a": "b", "b": "a", "1": "1"}
    from .suplat import M2

    L = M2()
    action = {}
    for f in q.arrows():
        members = f.elt.strip("{}").split(",") if f.elt != "{}" else []
        rows = []
        for y in L:
            parts = [y if m == "1" else swap[y] for m in members]
            rows.append([y, L.join(parts)])
        action[f.elt] = rows
    return {"base": "Z2", "fibers": {"*": "M2"}, "action": action}


def _doubled_category(entry_module: str, ws_data: dict) -> dict:
    """The module category of ``entry_module`` with one object duplicated."""
    from .qmod import module_to_category

    ws = load_workspace_data(ws_data)
    C = module_to_category(ws.modules[entry_module])
    label = {a: f"{a[0]}:{a[1]}" for a in C.objects}
    dup = C.objects[1]
    objs = [label[a] for a in C.objects] + [label[dup] + "'"]
    back = {label[a]: a for a in C.objects}
    back[label[dup] + "'"] = dup
    homs = [[x, y, C.hom(back[x], back[y]).elt] for x in objs for y in objs]
    return {
        "base": ws_data["modules"][entry_module]["base"],
        "objects": objs,
        "types": {o: back[o][0] for o in objs},
        "homs": homs,
    }


def build_corpus() -> dict:
    data: dict = {
        "description": "Small finite examples for the qwb deciders.",
        "lattices": {k: dict(v) for k, v in LATTICES.items()},
        "quantaloids": {
            "two": {"kind": "two_chain"},
            "Sigma_L2": {"kind": "locale_suspension", "lattice": "L2"},
            "Sigma_L3": {"kind": "locale_suspension", "lattice": "L3"},
            "Sigma_M2": {"kind": "locale_suspension", "lattice": "M2"},
            "rel2": {"kind": "rel", "S": ["0", "1"]},
            "Z2": {"kind": "free_quantale", "monoid": Z2},
            "Nil3": {"kind": "free_quantale", "monoid": NIL3},
            "chaotic_pair": _chaotic_pair(),
            "Sigma_L3_si": {"kind": "split_idempotents", "of": "Sigma_L3"},
        },
        "modules": {},
        "categories": {},
        "locale_morphisms": {
            "f_L3_to_L2": {"dom": "L3", "cod": "L2", "inv": {"0": "0", "1": "1"}},
            "g_M2_to_L2": {"dom": "M2", "cod": "L2", "inv": {"0": "0", "1": "1"}},
            "h_C4_to_L2": {"dom": "C4", "cod": "L2", "inv": {"0": "0", "1": "1"}},
            "p_L2_to_L3": {"dom": "L2", "cod": "L3", "inv": {"0": "0", "e": "0", "1": "1"}},
            "id_L2": {"kind": "identity", "locale": "L2"},
            "id_L3": {"kind": "identity", "locale": "L3"},
            "id_M2": {"kind": "identity", "locale": "M2"},
            "i_L3_e": {"kind": "open_sublocale", "locale": "L3", "u": "e"},
            "i_M2_a": {"kind": "open_sublocale", "locale": "M2", "u": "a"},
            "i_M2_0": {"kind": "open_sublocale", "locale": "M2", "u": "0"},
        },
    }
    mods = data["modules"]
    for L in LATTICES:
        mods[f"{L}_over_2"] = {"kind": "lattice_2_module", "base": "two", "lattice": L}
    mods["F_e_over_L3"] = {"kind": "fixpoint", "base": "Sigma_L3", "idempotent": "e"}
    mods["Sigma_L3_rep"] = {"kind": "representable", "base": "Sigma_L3"}
    mods["Sigma_M2_rep"] = {"kind": "representable", "base": "Sigma_M2"}
    mods["rel2_rep"] = {"kind": "representable", "base": "rel2"}
    mods["rel2_rows"] = _row_vector_module()
    mods["rel2_trivial"] = {
        "base": "rel2",
        "fibers": {"*": "L1"},
        "action": {f.elt: [["0", "0"]] for f in rel(["0", "1"]).arrows()},
    }
    mods["rel2_fix_copy"] = {"kind": "fixpoint", "base": "rel2", "idempotent": "{(0,0),(1,0)}"}
    mods["Z2_rep"] = {"kind": "representable", "base": "Z2"}
    mods["Z2_swap"] = _swap_module()
    mods["Nil3_rep"] = {"kind": "representable", "base": "Nil3"}
    mods["chaotic_rep_A"] = {"kind": "representable", "base": "chaotic_pair", "object": "A"}
    for f in ["f_L3_to_L2", "g_M2_to_L2", "h_C4_to_L2", "p_L2_to_L3", "i_M2_a"]:
        mods[f"induced_{f}"] = {"kind": "induced", "locale_morphism": f}

    cats = data["categories"]
    cats["star_two"] = {"kind": "star", "base": "two"}
    cats["star_Sigma_L3"] = {"kind": "star", "base": "Sigma_L3"}
    cats["star_rel2"] = {"kind": "star", "base": "rel2"}
    cats["discrete_two_pair"] = {"kind": "discrete", "base": "two", "types": {"a": "*", "b": "*"}}
    for L in ["L1", "L2", "L3", "M2", "M3", "N5"]:
        cats[f"cat_{L}"] = {"kind": "module_category", "module": f"{L}_over_2"}
    cats["cat_F_e_over_L3"] = {"kind": "module_category", "module": "F_e_over_L3"}
    cats["cat_Z2_rep"] = {"kind": "module_category", "module": "Z2_rep"}
    cats["cat_rel2_rows"] = {"kind": "module_category", "module": "rel2_rows"}
    cats["cat_rel2_fix_copy"] = {"kind": "module_category", "module": "rel2_fix_copy"}
    cats["cat_rel2_trivial"] = {"kind": "module_category", "module": "rel2_trivial"}
    cats["cat_rel2_rows_doubled"] = _doubled_category("rel2_rows", data)
    cats["cc_discrete_two_pair"] = {"kind": "cauchy_completion", "of": "discrete_two_pair"}
    return data


def freeze_expectations(data: dict) -> dict:
    """Annotate every entry with the verdicts of the headline checks."""
    from .cli import run_analysis

    ws = load_workspace_data(data)
    headline = {
        "module": {"pg": "pg", "lpg": "lpg"},
        "category": {"compactness": "cocomplete", "cauchy": "cauchy_complete"},
        "locale_morphism": {"slh": ("slh", "lh")},
    }
    for section, entries in data.items():
        if not isinstance(entries, dict) or section == "lattices":
            continue
        for name, entry in entries.items():
            kind, _ = ws.subject(name)
            exp = {}
            for suite, checks in headline.get(kind, {}).items():
                rep = run_analysis(ws, name, suite)
                names = checks if isinstance(checks, tuple) else (checks,)
                for c in rep.checks:
                    if c.name in names:
                        exp[c.name] = c.verdict
            if exp:
                entry["expect"] = exp
    return data


DATA_FILE = "corpus.json"


def corpus_path() -> Path:
    return Path(str(resources.files("qwb") / "data" / DATA_FILE))


def write_corpus(path: str | Path | None = None) -> Path:
    p = Path(path) if path is not None else corpus_path()
    p.write_text(json.dumps(freeze_expectations(build_corpus()), indent=1, sort_keys=True) + "\n")
    return p


def load_corpus() -> Workspace:
    return load_workspace(corpus_path())
