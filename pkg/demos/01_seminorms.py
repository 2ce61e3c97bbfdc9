"""Seminorms, the reduced operator and where the norm is attained."""

# %%
import numpy as np

import semihilbert as sh

# A degenerate weight: the first coordinate is invisible to <., .>_A
A = np.diag([0.0, 1.0, 1.0])
sp = sh.SemiSpace.from_matrix(A)
print("rank of A:", sp.rank)

x = np.array([7.0, 1.0, 0.0])
print("||x||_A =", sh.a_norm_vec(x, sp))  # the 7 lives in N(A)

# %%
# T must send N(A) into N(A) for ||T||_A to be finite
T = np.diag([2.0, 1.0, 1.0])
print("A-bounded:", sh.is_a_bounded(T, sp))

leaky = np.array([[1.0, 0, 0], [1.0, 1, 0], [0, 0, 1]])
print("leaky A-bounded:", sh.is_a_bounded(leaky, sp))

# %%
# the 2 on e1 never shows up: ||T||_A is the top singular value of the
# r x r matrix b = D^1/2 U* T U D^-1/2
red = sh.reduced_operator(T, sp)
print("b =\n", red.b)
print("singular values:", red.singular_values)
print("||T||_A =", sh.a_op_norm(T, sp, cross_check=True))

# %%
att = sh.attainment_basis(T, sp)
print("attainment dimension:", att.dimension)
print(att.ambient_vectors)

# %%
# sampling never beats the seminorm
rng = np.random.default_rng(0)
G = rng.standard_normal((4, 4))
A = G @ G.T
sp = sh.SemiSpace.from_matrix(A)
T = rng.standard_normal((4, 4))
xs = rng.standard_normal((4, 5000))
ratios = [sh.a_norm_vec(T @ v, sp) / sh.a_norm_vec(v, sp) for v in xs.T]
print("sampled max:", max(ratios), " exact:", sh.a_op_norm(T, sp))

# %%
# A-adjoint: A T# = T* A
W = sh.a_adjoint(T, sp)
print("residual:", np.linalg.norm(A @ W - T.T @ A))
print("||T#||_A =", sh.a_op_norm(W, sp))
