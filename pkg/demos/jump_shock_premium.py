"""
Demand shocks that jump: the premium for unhedgeable risk
=========================================================

A common Poisson shock hits the demand curve (and optionally the stock).
With the jump loading only on demand (eta_stock = 0) the shock cannot be
hedged in the stock market at all, so investors require a larger forward
premium than under a pure diffusion with the same Gaussian part,
regardless of the jump's sign.  The demand drift is compensated so the
expected demand shock stays zero.
"""
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import forwardeq as fe

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

P = fe.MarketParams(mu=200.0, m=1.0, pi0=100.0, piT=60.0, eps=0.05, R=0.01,
                    gamma_p=0.04, gamma_s=0.04)
B1 = 0.2 * 0.3 - 0.5 * 0.2**2  # stock drift at market price of risk 0.3
RHOS = np.linspace(-0.85, 0.85, 25)


def jump_model(rho, eta2):
    return fe.jump_diffusion_model(0.2, 10.0, float(rho), 1.0, 0.0, eta2, B1, 0.25)


fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for eta2 in (0.0, 2.0, 3.0, -3.0):
    spots, prems = [], []
    for rho in RHOS:
        eq = fe.solve(P, jump_model(rho, eta2), "jump_diffusion")
        spots.append(eq.P0)
        prems.append(eq.forward_premium)
    label = f"eta2={eta2:+.0f}" if eta2 else "no jumps"
    axes[0].plot(RHOS, spots, label=label)
    axes[1].plot(RHOS, prems, label=label)
axes[0].set_ylabel("spot price")
axes[1].set_ylabel("forward premium")
for ax in axes:
    ax.set_xlabel("correlation")
    ax.grid(alpha=0.4)
    ax.legend()
fig.tight_layout()
fig.savefig(OUT / "jump_premium.png")
plt.close(fig)
print(f"wrote {OUT / 'jump_premium.png'}")

# terminal price variance grows by intensity * eta2^2 * T / m^2; the premium
# responds more than one-for-one because the jump risk is unhedgeable
print(f"{'eta2':>6} {'Var[P_T]':>10} {'premium':>9}")
for eta2 in (0.0, 1.0, 2.0, 3.0):
    model = jump_model(0.2, eta2)
    eq = fe.solve(P, model, "jump_diffusion")
    var = fe.terminal_moments(P, model, eq.alpha).variance
    print(f"{eta2:6.1f} {var:10.3f} {eq.forward_premium:9.5f}")
