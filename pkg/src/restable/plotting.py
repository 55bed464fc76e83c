"""Figure rendering for the CLI: one PNG next to each delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_region(rows: list[dict], curve_rows: list[dict] | None, path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    adm = [r for r in rows if r["admissible"]]
    if adm:
        a = np.array([r["alpha"] for r in adm])
        rho = np.array([r["rho"] for r in adm])
        sign = np.array([r["sign"] for r in adm])
        for s, color, label in ((1, "#6baed6", "mean > 0"), (-1, "#fdd0a2", "mean < 0"), (0, "#d62728", "mean = 0")):
            m = sign == s
            if m.any():
                ax.scatter(a[m], rho[m], s=8, c=color, label=label, linewidths=0)
    if curve_rows:
        ca = [r["alpha"] for r in curve_rows if r["rho_critical"] is not None]
        cr = [r["rho_critical"] for r in curve_rows if r["rho_critical"] is not None]
        if ca:
            ax.plot(ca, cr, "r-", lw=1.5, label="critical curve")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel(r"$\rho$")
    ax.set_title(title or "sign of the Lamperti-image mean")
    ax.legend(loc="best", fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_curve(rows: list[dict], path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4))
    a = [r["alpha"] for r in rows if r["rho_critical"] is not None]
    rc = [r["rho_critical"] for r in rows if r["rho_critical"] is not None]
    ax.plot(a, rc, "r-", lw=1.5)
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel(r"critical $\rho$")
    ax.set_title(title or "critical curve")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_kernel(rows: list[dict], path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    xs = sorted({r["x"] for r in rows})
    for x in xs:
        ys = np.array([r["y"] for r in rows if r["x"] == x])
        qs = np.array([r["q"] for r in rows if r["x"] == x])
        ax.loglog(ys, qs, lw=1.2, label=f"x = {x:g}")
    ax.set_xlabel("y")
    ax.set_ylabel("q(x, y)")
    ax.set_title(title or "resurrection kernel")
    if len(xs) <= 8:
        ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_paths(rows: list[dict], path: str, title: str = "") -> None:
    fig, axes = plt.subplots(2, 1, figsize=(7, 5.5), sharex=True)
    ids = sorted({r["path_id"] for r in rows})[:8]
    for pid in ids:
        t = np.array([r["t"] for r in rows if r["path_id"] == pid])
        xi = np.array([r["xi_bar"] for r in rows if r["path_id"] == pid])
        x = np.array([r["X"] for r in rows if r["path_id"] == pid and r["X"] is not None])
        tx = np.array([r["t"] for r in rows if r["path_id"] == pid and r["X"] is not None])
        axes[0].step(t, xi, where="post", lw=0.9)
        if x.size:
            axes[1].step(tx, x, where="post", lw=0.9)
    axes[0].set_ylabel(r"$\bar\xi_t$")
    axes[1].set_ylabel(r"$\bar X_t$")
    axes[1].set_xlabel("t")
    axes[0].set_title(title or "simulated paths")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_ratio_sweep(rows, path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6.5, 4))
    s = np.array([r[0] for r in rows])
    ratio = np.array([r[3] for r in rows])
    ax.loglog(s, ratio, "b.-", lw=0.8, ms=3)
    ax.set_xlabel("target/base ratio s")
    ax.set_ylabel("q(1, s) / envelope")
    ax.set_title(title or "kernel-envelope comparability")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
