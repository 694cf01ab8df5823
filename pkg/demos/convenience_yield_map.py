"""
Convenience yield across correlation, risk aversion and production gaps
=======================================================================

The convenience yield y solves F = P0 (1+R)/(1-eps) - y P0, the implicit
benefit of holding inventory.  It rises with either agent's risk
aversion (all else equal, with even productions), while its response to
correlation mixes two opposite effects: more hedgeable demand risk
lowers the premium investors charge, but the induced storage raises the
spot price.
"""
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import forwardeq as fe

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

RHOS = np.linspace(-0.85, 0.85, 35)


def market(gamma_p=0.04, gamma_s=0.04, piT=100.0):
    return fe.MarketParams(mu=200.0, m=1.0, pi0=100.0, piT=piT, eps=0.05,
                           R=0.01, gamma_p=gamma_p, gamma_s=gamma_s)


def yields(params):
    out = []
    for rho in RHOS:
        model = fe.brownian_model(0.2, 10.0, float(rho), 0.3, 0.25)
        out.append(fe.solve(params, model, "brownian").convenience_yield)
    return out


fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for g in (0.02, 0.04, 0.08):
    axes[0].plot(RHOS, yields(market(gamma_p=g)), label=f"gamma_p={g}")
    axes[1].plot(RHOS, yields(market(gamma_s=g)), label=f"gamma_s={g}")
for ax, ttl in zip(axes, ("varying producers", "varying investors")):
    ax.set_xlabel("correlation")
    ax.set_ylabel("convenience yield")
    ax.set_title(ttl + " (even productions)")
    ax.grid(alpha=0.4)
    ax.legend()
fig.tight_layout()
fig.savefig(OUT / "yield_by_risk_aversion.png")
plt.close(fig)
print(f"wrote {OUT / 'yield_by_risk_aversion.png'}")

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for gp, ax in zip((0.08, 0.02), axes):
    for piT in (60.0, 100.0, 130.0):
        ax.plot(RHOS, yields(market(gamma_p=gp, piT=piT)), label=f"piT={piT:.0f}")
    ax.set_xlabel("correlation")
    ax.set_ylabel("convenience yield")
    ax.set_title(f"gamma_p={gp}")
    ax.grid(alpha=0.4)
    ax.legend()
fig.tight_layout()
fig.savefig(OUT / "yield_by_production_gap.png")
plt.close(fig)
print(f"wrote {OUT / 'yield_by_production_gap.png'}")
