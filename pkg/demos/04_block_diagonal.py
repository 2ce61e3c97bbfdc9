"""Smoothness of diag(M, N) under diag(A, A)."""

# %%
import numpy as np

import semihilbert as sh

A = np.diag([0.0, 1.0, 1.0])
sp = sh.SemiSpace.from_matrix(A)
M = np.diag([2.0, 1.0, 1.0])  # not smooth on its own

for N in (0.5 * np.eye(3), np.diag([0.0, 3.0, 0.5]), np.eye(3)):
    rep = sh.block_smoothness_check(M, N, sp)
    print(f"||M||={rep.norm_m:.3g} ||N||={rep.norm_n:.3g} {rep.branch:>10}"
          f"  predicted={rep.predicted} computed={rep.computed}")

# %%
# with ||M|| > ||N|| the norming vectors live in the upper block
rng = np.random.default_rng(3)
G = rng.standard_normal((3, 2))
sp = sh.SemiSpace.from_matrix(G @ G.T)
M = sh.sampling.random_direction(rng, sp)
N = 0.5 * sh.sampling.random_direction(rng, sp)
N *= 0.5 * sh.a_op_norm(M, sp) / sh.a_op_norm(N, sp)
upper, lower, _ = sh.smoothness.block_norming_components(M, N, sp)
print("upper A-norms:", upper, " lower A-norms:", lower)
