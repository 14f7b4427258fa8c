"""Verify the analytic backward pass against finite differences.

The operator is linear and self-adjoint, so central differences of
L = sum(w * F(X)) must reproduce the backward pass to roundoff, and
<F(X), Y> must equal <X, B(Y)> with B the reverse-order application.
The check runs every coordinate of seeded random fixtures, single
scale and cascaded.
"""

from spxkit import gradient_check

print("single-scale checks (seed, blocks varies):")
for seed in range(5):
    r = gradient_check(channels=3, height=8, width=8, blocks=2 + seed, seed=seed)
    print(f"  seed {seed}: max_rel_err {r['max_rel_err']:.2e}  "
          f"adjoint_err {r['adjoint_err']:.2e}  pass {r['pass']}")

print("\ncascade checks (2 and 3 stages):")
for stages in (2, 3):
    r = gradient_check(
        channels=2, height=6, width=6, blocks=3, seed=40 + stages, stages=stages
    )
    print(f"  {stages} stages: max_rel_err {r['max_rel_err']:.2e}  "
          f"adjoint_err {r['adjoint_err']:.2e}  pass {r['pass']}")

print("\nalpha = 0 turns the operator into the identity; the error is exact 0:")
r = gradient_check(channels=2, height=6, width=6, blocks=4, seed=1, alpha=0.0)
print(f"  max_rel_err {r['max_rel_err']}  adjoint_err {r['adjoint_err']}")
