"""Figures rendered next to the delimited reports.

One PNG per verify suite (and one for the derivative table), built from
the same records that go into the CSV/JSON body.  Figures are a side
output; they never feed back into any numeric check.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_suite_figure", "render_table_figure"]

_DPI = 150


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_suite_figure(suite: str, records: list[dict], summary: dict, path: Path) -> None:
    if suite == "spectral":
        _spectral(records, path)
    elif suite == "gevrey":
        _gevrey(records, path)
    elif suite == "fourier":
        _fourier(records, path)
    elif suite == "laguerre":
        _laguerre(records, path)
    elif suite == "arbitration":
        _arbitration(records, path)
    elif suite == "gr-identity":
        _gr_identity(records, path)


def _spectral(records, path):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    labels = sorted({f"{r['family']}({r['param']:g})" for r in records})
    for lab in labels:
        rows = [r for r in records if f"{r['family']}({r['param']:g})" == lab]
        ks = [r["k"] for r in rows]
        ax1.semilogy(ks, [max(r["rel_err"], 1e-18) for r in rows], "o-", label=lab, ms=3)
        ax2.semilogy(ks, [max(r["residual"], 1e-18) for r in rows], "o-", ms=3)
    ax1.set_xlabel("k")
    ax1.set_ylabel("relative eigenvalue error")
    ax1.legend(fontsize=6)
    ax2.set_xlabel("k")
    ax2.set_ylabel("residual norm")
    for ax in (ax1, ax2):
        ax.grid(True, alpha=0.3)
    _save(fig, path)


def _gevrey(records, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    combos = sorted({(r["s"], r["r"]) for r in records})
    for s, r in combos:
        rows = [rec for rec in records if rec["s"] == s and rec["r"] == r]
        by_order: dict[int, float] = {}
        for rec in rows:
            by_order[rec["abs_alpha"]] = max(by_order.get(rec["abs_alpha"], 0.0), rec["c_emp"])
        orders = sorted(by_order)
        ax.plot(orders, [by_order[o] for o in orders], "o-", ms=3, label=f"s={s}, r={r}")
    ax.axhline(8.0, color="k", ls="--", lw=0.8, label="cap")
    ax.set_xlabel("|alpha|")
    ax.set_ylabel("max empirical constant")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _fourier(records, path):
    fig, ax = plt.subplots(figsize=(5, 3.6))
    for s in sorted({r["s"] for r in records}):
        rows = [r for r in records if r["s"] == s]
        ax.semilogy([r["radius"] for r in rows], [max(r["rel_dev"], 1e-18) for r in rows],
                    "o-", label=f"s={s}")
    ax.axhline(1e-3, color="k", ls="--", lw=0.8, label="tolerance")
    ax.set_xlabel("radius")
    ax.set_ylabel("relative shape deviation")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _laguerre(records, path):
    fig, ax = plt.subplots(figsize=(6, 3.6))
    trunc = [r for r in records if r["check"] == "truncated-series"]
    coeff = [r for r in records if r["check"] == "coefficient-ratios"]
    x = range(len(trunc))
    ax.semilogy(list(x), [max(r["rel_dev"], 1e-18) for r in trunc], "o",
                label="truncated series (divergent)")
    xc = range(len(trunc), len(trunc) + len(coeff))
    ax.semilogy(list(xc), [max(r["rel_dev"], 1e-18) for r in coeff], "s",
                label="coefficient ratios")
    ax.axhline(1e-6, color="k", ls="--", lw=0.8, label="tolerance")
    ax.set_xlabel("check index")
    ax.set_ylabel("relative deviation")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _arbitration(records, path):
    fig, ax = plt.subplots(figsize=(6, 3.6))
    markers = {"binomial-from-proof": "o", "paper-printed": "x"}
    for family, mk in markers.items():
        rows = [r for r in records if r["family"] == family]
        ax.semilogy(range(len(rows)), [max(r["rel_dev"], 1e-18) for r in rows], mk, label=family)
    ax.set_xlabel("case index (m, rho)")
    ax.set_ylabel("relative deviation from quadrature")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    _save(fig, path)


def _gr_identity(records, path):
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.semilogy([r["sample"] for r in records],
                [max(r["residual"], 1e-18) for r in records], "o")
    ax.axhline(1e-9, color="k", ls="--", lw=0.8)
    ax.set_xlabel("sample")
    ax.set_ylabel("|lhs - rhs|")
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def render_table_figure(records: list[dict], path: Path) -> None:
    """Companion figure for the derivative-estimate table."""
    _gevrey(records, path)
