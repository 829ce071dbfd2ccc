"""Why the 3x3 permanent and determinant have no diagonal SVD.

If T had one, the singular values would satisfy sum s^2 <= s_1 * sum s. For
both tensors the norms computed below make this an equality, which forces all
singular values to equal the spectral norm. Their count would then be
nuclear / spectral.
"""
from tensornorms import dsvd_verify, frobenius_norm, nuclear_interval, spectral_bounds
from tensornorms.canonical import determinant_tensor, glynn_decomposition, permanent_tensor
from tensornorms.decomposition import cardinality_ok

for name, T, dec in [("per_3", permanent_tensor(3), glynn_decomposition(3)),
                     ("det_3", determinant_tensor(3), None)]:
    spec = spectral_bounds(T).upper.value
    iv = nuclear_interval(T, dec)
    frob2 = frobenius_norm(T) ** 2
    count = iv.upper.value / spec
    print(f"{name}: |T|^2 = {frob2:.6f}, [T] * nuclear = {spec * iv.upper.value:.6f}, "
          f"forced term count = {count:.6f}")

print("per_3: 4.5 terms is impossible.")
print(f"det_3: a 2-orthogonal tuple of 6 terms in dimension 27 allowed? {cardinality_ok(6, 27, 2.0)}")

rep = dsvd_verify(glynn_decomposition(3))
print(f"\nGlynn's 4-term formula for per_3 fails clause {rep.failed_clause!r}: {rep.two_ortho.detail}")
