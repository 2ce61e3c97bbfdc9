"""Smoothness and one-sided derivatives of the operator seminorm."""

# %%
import numpy as np

import semihilbert as sh

# rank-one A: every A-bounded T is smooth
sp1 = sh.SemiSpace.from_matrix(np.diag([1.0, 0.0]))
rep = sh.is_a_smooth(np.eye(2), sp1)
print("smooth:", rep.smooth, " x0:", rep.x0)

# %%
sp = sh.SemiSpace.from_matrix(np.diag([0.0, 1.0, 1.0]))
T = np.diag([2.0, 1.0, 1.0])
rep = sh.is_a_smooth(T, sp)
print("smooth:", rep.smooth, " k:", rep.top_multiplicity, " gap:", rep.spectral_gap)

# %%
# the two one-sided derivatives along S split apart
S = np.diag([0.0, 1.0, -1.0])
print("analytic:", sh.gateaux_derivatives(T, S, sp))
print("finite differences:", sh.gateaux_fd(T, S, sp))

taus = np.array([-1e-3, -1e-4, 1e-4, 1e-3])
for tau in taus:
    q = (sh.a_op_norm(T + tau * S, sp) - sh.a_op_norm(T, sp)) / tau
    print(f"tau={tau:+.0e}  quotient={q:+.6f}")

# %%
print("differentiable (50 random directions):",
      sh.is_gateaux_differentiable(T, sp, n_directions=50, rng_seed=0))

# %%
# right-additivity fails: T is orthogonal to S1 and to S2 but not to S1+S2 = T
S1, S2 = sh.non_smooth_splitting(T, sp)
for name, X in (("S1", S1), ("S2", S2), ("S1+S2", S1 + S2)):
    print(name, sh.is_birkhoff_orthogonal(T, X, sp).orthogonal)
