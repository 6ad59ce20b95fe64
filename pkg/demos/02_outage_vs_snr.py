"""
Outage probability against transmit SNR
=======================================

Both users at gamma_th = 0.5 for three surface sizes, analytical next to
Monte Carlo.  The larger surface wins at every SNR.
"""

from dataclasses import replace

from dris_noma import SweepSpec, load_preset, run_sweeps

base = replace(load_preset("table1"), gamma_th_i=0.5, gamma_th_o=0.5)
rhos = [28, 30, 32, 34, 36, 38, 40, 42, 44]

specs = [SweepSpec("rho_db", rhos, replace(base, n_total=n), trials=3000, seed=3,
                   outputs=["op_i", "op_o"]) for n in (25, 50, 100)]
results = run_sweeps(specs)

print("rho_dB " + "".join(f"| N={s.base.n_total:<3d} OP_I ana/mc   OP_O ana/mc   " for s in specs))
for i, rho in enumerate(rhos):
    line = f"{rho:6d} "
    for res in results:
        r = res.rows[i]
        line += (f"| {r['op_i_ana']:.3f}/{r['op_i_mc']:.3f}     "
                 f"{r['op_o_ana']:.3f}/{r['op_o_mc']:.3f}    ")
    print(line)

# Random phase shifts for comparison, N=100 at 35 dB.
rnd = SweepSpec("rho_db", [35], replace(base, n_total=100, phase_design="random"),
                trials=3000, seed=3, outputs=["op_i", "op_o"])
row = run_sweeps([rnd])[0].rows[0]
print(f"random phases, N=100, 35 dB: OP_I {row['op_i_mc']:.3f}, OP_O {row['op_o_mc']:.3f}")
