"""Birkhoff-James orthogonality under a semi-inner product."""

# %%
import numpy as np

import semihilbert as sh

sp = sh.SemiSpace.from_matrix(np.eye(2))
T = np.eye(2)
S = np.diag([1.0, -1.0])

# the compressed matrix m: its numerical range is the set of limits of
# <T x_n, S x_n>_A along norming sequences
w = sh.compressed_form(T, S, sp)
print("m =\n", w.m)

v = sh.is_birkhoff_orthogonal(T, S, sp)
print("orthogonal:", v.orthogonal, " margin:", v.margin)
print("witness:", v.witness, " <Tx, Sx>_A:", v.witness_value)

# %%
# check against the definition ||T + lam S|| >= ||T||
lams = np.linspace(-2, 2, 401)
print("min over lambda:", min(sh.a_op_norm(T + l * S, sp) for l in lams))

# %%
# a pair that is not orthogonal: T against itself
v = sh.is_birkhoff_orthogonal(T, T, sp)
print("T vs T:", v.orthogonal, " certificate angle:", v.certificate_angle)
print("||T - T/2|| =", sh.a_op_norm(T - 0.5 * T, sp))

# %%
# a non-normal m: W(m) is a disk of radius 1/2 around the diagonal value
for c in (0.3, 0.8):
    m = np.array([[c, 1.0], [0.0, c]], dtype=complex)
    f = sh.WSetForm(m=m, sigma1=1.0, s_norm=1.0, field="complex", basis=np.eye(2))
    z = sh.contains_zero(f)
    print(f"center {c}: contains 0 = {z.contains}, margin = {z.margin:+.3f}")

# %%
# a smooth T is witnessed at its single norming vector
A = np.diag([1.0, 0.0])
print("BS check:", sh.bs_property_check(np.eye(2), sh.SemiSpace.from_matrix(A), n_directions=100))
