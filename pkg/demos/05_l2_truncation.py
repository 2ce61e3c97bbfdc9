"""Weighted l2: A e_n = e_n / n and T e_n = n^(-3/2) e_1, truncated at N."""

# %%
import math

import numpy as np

import semihilbert as sh
from semihilbert.cli import l2_truncation

limit = math.pi / math.sqrt(6)
for n in (1, 10, 100, 1000):
    A, T = l2_truncation(n)
    sp = sh.SemiSpace.from_matrix(A)
    norm = sh.a_op_norm(T, sp)
    partial = math.sqrt(math.fsum(1 / k**2 for k in range(1, n + 1)))
    print(f"N={n:5d}  ||T||_A={norm:.12f}  sqrt(sum 1/k^2)={partial:.12f}  gap to limit={limit - norm:.2e}")

# %%
# the norming vector spreads over all coordinates, so nothing finite
# attains the limit
A, T = l2_truncation(1000)
x0 = sh.is_a_smooth(T, sh.SemiSpace.from_matrix(A)).x0
print("share of ||x0||_A^2 in the first 10 coordinates:", np.sum(x0[:10] ** 2 / np.arange(1, 11)))
