"""Figure rendering for the CLI report path.

Each helper saves one PNG next to the corresponding table.  The Agg
backend is forced so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .simulate import ForceSample, RatioSample, SweepPoint, TraceSample


def save_trace_figure(samples: list[TraceSample], path) -> None:
    t = [s.t for s in samples]
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 8))
    axes[0].plot(t, [s.theta_eff for s in samples], label="twist")
    axes[0].plot(t, [s.phi_eff for s in samples], label="winch")
    axes[0].set_ylabel("effective angle (rad)")
    axes[0].legend(loc="best")
    axes[1].plot(t, [s.total_contraction * 1e3 for s in samples], color="tab:red")
    axes[1].set_ylabel("displacement (mm)")
    axes[2].plot(t, [s.x_dot * 1e3 for s in samples], color="tab:green")
    axes[2].set_ylabel("string speed (mm/s)")
    axes[2].set_xlabel("time (s)")
    for ax in axes:
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_sweep_figure(points: list[SweepPoint], kind: str, path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot([p.rate for p in points], [p.x_dot * 1e3 for p in points],
            marker="o")
    ax.set_xlabel(f"commanded {kind} rate (rad/s)")
    ax.set_ylabel("predicted string velocity (mm/s)")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_force_figure(rows: list[ForceSample], path) -> None:
    # The grid is a cross product; each channel depends on only one axis.
    twist_curve = {}
    winch_curve = {}
    for r in rows:
        twist_curve[r.theta] = r.breakdown.f_twist
        winch_curve[r.tau_w] = r.breakdown.f_winch

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    thetas = sorted(twist_curve)
    ax1.plot(thetas, [twist_curve[k] for k in thetas], color="tab:blue")
    ax1.set_xlabel("twist angle (rad)")
    ax1.set_ylabel("twist force (N)")
    taus = sorted(winch_curve)
    ax2.plot(taus, [winch_curve[k] for k in taus], color="tab:orange")
    ax2.set_xlabel("winch torque (N.m)")
    ax2.set_ylabel("winch force (N)")
    for ax in (ax1, ax2):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_ratio_figure(rows: list[RatioSample], path) -> None:
    by_phi: dict[float, list[RatioSample]] = {}
    for r in rows:
        by_phi.setdefault(r.phi_eff, []).append(r)

    fig, ax = plt.subplots(figsize=(7, 5))
    for phi, group in sorted(by_phi.items()):
        group = sorted(group, key=lambda r: r.theta_eff)
        ax.plot([r.theta_eff for r in group],
                [r.ratio_twist * 1e3 for r in group],
                label=f"twist channel, phi={phi:g} rad")
    winch_mm = rows[0].ratio_winch * 1e3
    ax.axhline(winch_mm, linestyle="--", color="gray",
               label=f"winch channel ({winch_mm:.3g} mm/rad)")
    ax.set_xlabel("twist angle (rad)")
    ax.set_ylabel("transmission ratio (mm/rad)")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
