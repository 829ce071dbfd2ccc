"""Nuclear and spectral norms of matrix multiplication tensors.

The standard decomposition of M_{p,q,r} uses pqr terms of norm one that are
pairwise orthogonal in two of their three modes. That is enough to pin the
nuclear norm to pqr exactly, even though rank-minimal decompositions (such as
Strassen's for 2x2) use fewer terms with larger total cost.
"""
import math

from tensornorms import dsvd_verify, nuclear_cost, nuclear_interval, spectral_bounds
from tensornorms.canonical import matmul_tensor, strassen_decomposition

print("p q r | terms  sigma  nuclear interval        spectral")
for p, q, r in [(1, 1, 1), (1, 2, 2), (2, 2, 2), (2, 3, 2), (3, 3, 3)]:
    T, dec = matmul_tensor(p, q, r)
    rep = dsvd_verify(dec)
    iv = nuclear_interval(T, dec)
    sb = spectral_bounds(T)
    print(f"{p} {q} {r} | {len(dec):5d}  {rep.singular_values.max():.3f}  "
          f"[{iv.lower.value:8.4f}, {iv.upper.value:8.4f}]  "
          f"[{sb.lower.value:.6f}, {sb.upper.value:.6f}]")

cost = nuclear_cost(strassen_decomposition())
print(f"\nStrassen: 7 terms, cost {cost:.6f} = 12 + 2*sqrt(2) = {12 + 2 * math.sqrt(2):.6f}")
print("The 8-term standard decomposition costs 8, the true nuclear norm.")
