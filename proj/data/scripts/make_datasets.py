#!/usr/bin/env python3
"""Regenerate the bundled atomic datasets (cs.dat, cs_n9.dat, cs.json, rb87.dat).

Requires ARC (pip install ARC-Alkali-Rydberg-Calculator). ARC is used as a
reader for its bundled literature tables (reduced E1 matrix elements, NIST
level energies) and, where no published matrix element exists, for a
model-potential radial integral.

Model-potential values are calibrated by the ratio |published| / |model| of
the nearest published member of the same series (same lower level, same
upper l and j). Rows carry a source tag saying which route produced them.

The output is committed; this script only documents and reproduces it.
"""
import json
import sys
from pathlib import Path

from arc import Caesium, Rubidium87

OUT = Path(__file__).resolve().parent.parent
LETTER = "spdfg"


def label(n, l, j):
    return f"{n}{LETTER[l]}{int(2 * j)}/2"


def citation(info):
    # info = [theory flag, accuracy, comment, source, doi]
    src = info[3].strip()
    doi = info[4].strip()
    return f"{src} [{info[2].strip()}] {doi}".replace(",", ";")


def series(atom, lower, l2, j2, n_values):
    n1, l1, j1 = lower
    rows = []
    for n2 in n_values:
        found, _, info = atom.getLiteratureDME(n1, l1, j1, n2, l2, j2)
        rad_model = atom.getRadialMatrixElement(n1, l1, j1, n2, l2, j2, useLiterature=False)
        d = abs(atom.getReducedMatrixElementJ(n1, l1, j1, n2, l2, j2))
        rows.append(dict(n2=n2, found=found, info=info, d=d, rad_model=rad_model,
                         rad_lit=atom.getRadialMatrixElement(n1, l1, j1, n2, l2, j2)))
    published = [r for r in rows if r["found"]]
    for r in rows:
        if r["found"]:
            r["source"] = citation(r["info"])
            continue
        if published:
            ref = min(published, key=lambda p: abs(p["n2"] - r["n2"]))
            k = abs(ref["rad_lit"] / ref["rad_model"])
            r["d"] *= k
            r["source"] = (f"model-potential radial integral (ARC {label(ref['n2'], l2, j2)} "
                           f"series calibration x{k:.4f})")
        else:
            r["source"] = "model-potential radial integral (ARC; uncalibrated)"
    return rows


def transitions_for(atom, lower, upper_series, nmax):
    out = []
    n1, l1, j1 = lower
    for (l2, j2, nmin) in upper_series:
        for r in series(atom, lower, l2, j2, range(nmin, nmax + 1)):
            lam = atom.getTransitionWavelength(n1, l1, j1, r["n2"], l2, j2) * 1e9
            lo, up = label(n1, l1, j1), label(r["n2"], l2, j2)
            if lam < 0:
                lo, up, lam = up, lo, -lam
            out.append(dict(lower=lo, upper=up, wavelength_nm=round(lam, 4),
                            reduced_dipole_au=round(r["d"], 5), source=r["source"]))
    return out


CS_CONSTANTS = [
    ("species", "Cs", "Cs-133"),
    ("nuclear_spin", "7/2", "Cs-133 ground-state nuclear spin"),
    ("core_polarizability_a0", "15.84", "Safronova et al. PRA 94 012505 (2016)"),
]
CS_HYPERFINE = [
    ("6s1/2", 2298.1579425, 0.0, "Steck; Cesium D Line Data"),
    ("6p3/2", 50.275, -0.53, "Steck; Cesium D Line Data"),
    ("5d5/2", -21.24, 0.2, "Arimondo et al. Rev. Mod. Phys. 49 31 (1977)"),
]
CS_LIFETIMES = [
    ("6p3/2", 30.405e-9, "Steck; Cesium D Line Data"),
    ("5d5/2", 1.28e-6, "DiBerardino; Tanner & Sieradzan PRA 57 4204 (1998); 1281(9) ns"),
]
RB_CONSTANTS = [
    ("species", "Rb87", "Rb-87"),
    ("nuclear_spin", "3/2", "Rb-87 ground-state nuclear spin"),
    ("core_polarizability_a0", "9.1", "Safronova et al. PRA 69 022509 (2004)"),
]
RB_HYPERFINE = [
    ("5s1/2", 3417.341305452, 0.0, "Steck; Rubidium 87 D Line Data"),
    ("4d5/2", -16.9, 0.0, "Arimondo et al. Rev. Mod. Phys. 49 31 (1977)"),
]
RB_LIFETIMES = [
    ("5p3/2", 26.2348e-9, "Steck; Rubidium 87 D Line Data"),
    ("4d5/2", 89e-9, "4d5/2 radiative lifetime; 89 ns"),
]


def write_text(path, title, constants, hyperfine, lifetimes, transitions):
    lines = [f"# {title}", "# Generated by data/scripts/make_datasets.py; format in docs/dataset-format.md", ""]
    lines += ["[constants]", "# key, value, source"]
    lines += [f"{k}, {v}, {s}" for (k, v, s) in constants]
    lines += ["", "[hyperfine]", "# level, A_MHz, B_MHz, source"]
    lines += [f"{lv}, {a}, {b}, {s}" for (lv, a, b, s) in hyperfine]
    lines += ["", "[lifetimes]", "# level, tau_s, source"]
    lines += [f"{lv}, {t:.6g}, {s}" for (lv, t, s) in lifetimes]
    lines += ["", "[transitions]", "# lower, upper, vacuum_wavelength_nm, reduced_dipole_au, source"]
    lines += [f"{t['lower']}, {t['upper']}, {t['wavelength_nm']}, {t['reduced_dipole_au']}, {t['source']}"
              for t in transitions]
    path.write_text("\n".join(lines) + "\n")


def write_json(path, constants, hyperfine, lifetimes, transitions):
    doc = {
        "constants": [{"key": k, "value": v, "source": s} for (k, v, s) in constants],
        "hyperfine": [{"level": lv, "A_MHz": a, "B_MHz": b, "source": s} for (lv, a, b, s) in hyperfine],
        "lifetimes": [{"level": lv, "tau_s": t, "source": s} for (lv, t, s) in lifetimes],
        "transitions": transitions,
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")


def cs_transitions(nmax):
    cs = Caesium()
    t = transitions_for(cs, (6, 0, 0.5), [(1, 0.5, 6), (1, 1.5, 6)], nmax)
    t += transitions_for(cs, (5, 2, 2.5), [(1, 1.5, 6), (3, 2.5, 4), (3, 3.5, 4)], nmax)
    return t


def main():
    cs12 = cs_transitions(12)
    write_text(OUT / "cs.dat", "Cs-133 line list, principal quantum number n <= 12",
               CS_CONSTANTS, CS_HYPERFINE, CS_LIFETIMES, cs12)
    write_json(OUT / "cs.json", CS_CONSTANTS, CS_HYPERFINE, CS_LIFETIMES, cs12)
    write_text(OUT / "cs_n9.dat", "Cs-133 line list, principal quantum number n <= 9",
               CS_CONSTANTS, CS_HYPERFINE, CS_LIFETIMES, cs_transitions(9))
    rb = Rubidium87()
    rbt = transitions_for(rb, (5, 0, 0.5), [(1, 0.5, 5), (1, 1.5, 5)], 8)
    rbt += transitions_for(rb, (4, 2, 2.5), [(1, 1.5, 5), (3, 2.5, 4), (3, 3.5, 4)], 8)
    write_text(OUT / "rb87.dat", "Rb-87 line list, principal quantum number n <= 8",
               RB_CONSTANTS, RB_HYPERFINE, RB_LIFETIMES, rbt)
    return 0


if __name__ == "__main__":
    sys.exit(main())
