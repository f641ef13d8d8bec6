"""Pre-log factor of the bystander SE vs. surface count, and the sizing rule.

The bystander's SE grows like tau * log2(N).  tau depends on how the N
elements are split: with few large surfaces most beams miss the bystander
(tau < 1), while many surfaces with at most L = N**delta elements each give
every surface a guaranteed hit (tau = 1, the maximum).  The sizing rule
returns that threshold: M* = largest divisor of N at most L, S* = N / M*.

Run:  python demos/prelog_and_design.py        (~2 min, writes PNG)
"""

import time

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from dirsim import ScenarioConfig, design_rule, prelog_factor, run_sum_se

N_TOTAL = 128
SLOTS = 4000          # paper-scale runs use 10000 or more
BUDGET_DB = 50.0      # high link budget keeps tau near its asymptote
SEED = 2027


def main():
    t0 = time.time()
    print("sizing rule for a few (N, L):")
    for n, l in [(128, 2), (128, 8), (1024, 32), (64, 1)]:
        rule = design_rule(n, l)
        print(f"  N={n:5d} L={l:3d}: delta*={rule.delta_star:.3f} "
              f"M*={rule.m_star:4d} S*={rule.s_star:4d}")

    surface_counts = [1, 2, 4, 8, 16, 32, 64, 128]
    fig, ax = plt.subplots(figsize=(7, 5))
    for color, delta in zip(("C0", "C2"), (1 / 7, 3 / 7)):
        l = max(1, round(N_TOTAL**delta))
        rule = design_rule(N_TOTAL, l)
        taus = []
        for s in surface_counts:
            cfg = ScenarioConfig(num_irs=s, elements_per_irs=N_TOTAL // s,
                                 paths=l, normalize_pathloss=True,
                                 link_budget_db=BUDGET_DB, slots=SLOTS,
                                 master_seed=SEED)
            res = run_sum_se(cfg)
            taus.append(prelog_factor(res.se_y_mc, N_TOTAL))
        print(f"delta={delta:.3f} (L={l}): S*={rule.s_star}, "
              f"tau sweep {['%.2f' % t for t in taus]}")
        ax.plot(surface_counts, taus, "o-", color=color,
                label=f"bystander tau, L={l}")
        ax.axvline(rule.s_star, color=color, linestyle=":",
                   label=f"S* = {rule.s_star}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel(f"number of surfaces S (N = {N_TOTAL})")
    ax.set_ylabel("pre-log factor  SE / log2(N)")
    ax.set_title("Splitting the same elements over more surfaces helps bystanders")
    ax.grid(True, linestyle=":", alpha=0.6)
    ax.legend(fontsize=9)
    fig.tight_layout()
    fig.savefig("prelog_and_design.png", dpi=150)
    print(f"wrote prelog_and_design.png in {time.time()-t0:.0f}s")


if __name__ == "__main__":
    main()
