"""Degrees of orthogonality for tuples of pure tensors.

A tuple is t-orthogonal when [S]_{2/t} = 1. Pairwise orthogonality in two
modes is not enough for 2-orthogonality, as the three-term tuple below shows.
"""
from tensornorms import bracket_alpha, coherence_mu, t_orthogonality_check
from tensornorms.canonical import cyclic_group, group_tuple, pairwise_counterexample

S = pairwise_counterexample()
print(f"three-term tuple: coherence {coherence_mu(S):.3g}")
for t in (1.0, 2.0):
    v = t_orthogonality_check(S, t)
    print(f"  t = {t:g}: {v.verdict.value} ({v.detail})")

v = group_tuple(cyclic_group(3))
est = bracket_alpha(v, 4 / 3)
print(f"\nC_3 basis triples: {len(v)} members, certificate t = {v.certificate.t:g}")
print(f"  [v]_(4/3) estimate {est.value:.9f}")
print(f"  t = 2 check: {t_orthogonality_check(v, 2.0).verdict.value}")
