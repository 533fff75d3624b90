"""Figures written next to tabular results."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["axes.grid"] = True
plt.rcParams["figure.autolayout"] = True
plt.rcParams["font.size"] = 11.0
plt.rcParams["legend.fontsize"] = "small"


def plot_parity_scan(rows, path):
    f = np.array([r["f"] for r in rows])
    order = np.argsort(f)
    f = f[order]

    def col(key):
        return np.array([r[key] for r in rows])[order]

    fig, (ax_e, ax_s) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax_e.plot(f, col("energy_current_plus"), "o-", label=r"$\langle F\rangle(f)$")
    ax_e.plot(f, col("energy_current_minus"), "x--", label=r"$\langle F\rangle(-f)$")
    ax_e.set_xlabel("$f$")
    ax_e.set_ylabel("energy current")
    ax_e.legend()
    ax_s.plot(f, col("spin_current_plus"), "o-", label=r"$\langle J\rangle(f)$")
    ax_s.plot(f, -col("spin_current_minus"), "x--", label=r"$-\langle J\rangle(-f)$")
    ax_s.set_xlabel("$f$")
    ax_s.set_ylabel("spin current")
    ax_s.legend()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_symmetry_suite(rows, path, threshold=1e-12):
    rows = [r for r in rows if not r.get("error")]
    keys = ("hamiltonian_deviation", "dissipator_deviation", "current_deviation")
    pairs = sorted({r["pair"] for r in rows})
    fig, ax = plt.subplots(figsize=(7, 3.8))
    floor = 1e-18
    for k, key in enumerate(keys):
        for p, pair in enumerate(pairs):
            vals = [max(r[key], floor) for r in rows if r["pair"] == pair]
            x = p + (k - 1) * 0.25 + np.zeros(len(vals))
            ax.scatter(x, vals, s=10, color=f"C{k}", label=key.replace("_", " ") if p == 0 else None)
    ax.axhline(threshold, color="k", lw=0.8, ls=":")
    ax.set_yscale("log")
    ax.set_xticks(range(len(pairs)))
    ax.set_xticklabels(pairs)
    ax.set_ylabel("relative deviation")
    ax.legend(loc="upper right")
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_one_way(rows, path):
    labels = [f"{r['family']}\nN={r['model']['n_sites']}" for r in rows]
    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(max(4, 0.5 * len(rows) + 2), 3.6))
    ax.bar(x - 0.2, [r["forward_energy_current"] for r in rows], 0.4, label="forward")
    ax.bar(x + 0.2, [r["inverted_energy_current"] for r in rows], 0.4, label="baths inverted")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("energy current")
    ax.legend()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_current_profile(record, path):
    fig, (ax_s, ax_e) = plt.subplots(1, 2, figsize=(8, 3.2))
    spin = record["spin_currents"]
    energy = record["energy_currents"]
    ax_s.plot(range(1, len(spin) + 1), spin, "o-")
    ax_s.set_xlabel("bond $j$")
    ax_s.set_ylabel(r"$\langle J_j\rangle$")
    ax_e.plot(range(2, len(energy) + 2), energy, "s-", color="C1")
    ax_e.set_xlabel("site $j$")
    ax_e.set_ylabel(r"$\langle F_j\rangle$")
    fig.savefig(path, dpi=120)
    plt.close(fig)
