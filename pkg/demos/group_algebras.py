"""Group algebra multiplication tensors.

For an abelian group the characters give a decomposition whose singular
values all equal sqrt(n). Greedy extraction finds the same terms on its own.
For a nonabelian group only the closed-form singular values are computed here.
"""
import math

from tensornorms import dsvd_extract, frobenius_norm, nuclear_interval, spectral_bounds
from tensornorms.canonical import (
    cyclic_group,
    dft_decomposition,
    group_singular_values,
    group_tensor,
    symmetric_group,
)

for n in (2, 3, 5, 8):
    T = group_tensor(cyclic_group(n))
    iv = nuclear_interval(T, dft_decomposition(n))
    res = dsvd_extract(T)
    print(f"C_{n}: nuclear in [{iv.lower.value:.6f}, {iv.upper.value:.6f}], n^(3/2) = {n ** 1.5:.6f}; "
          f"extracted {len(res.decomposition)} terms, sigma = {res.singular_values.min():.6f}..{res.singular_values.max():.6f}")

G = symmetric_group(3)
T = group_tensor(G)
sb = spectral_bounds(T)
spec = group_singular_values(6, (1, 1, 2))
print(f"\nS_3: |T|^2 = {frobenius_norm(T) ** 2:.1f}, spectral in [{sb.lower.value:.6f}, {sb.upper.value:.6f}] "
      f"(sqrt 6 = {math.sqrt(6):.6f})")
print(f"closed form singular values {spec.values.round(4).tolist()}")
print(f"nuclear norm {spec.nuclear:.6f} = 2 sqrt 6 + 8 sqrt 3")
