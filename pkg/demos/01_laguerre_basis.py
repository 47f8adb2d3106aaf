"""
The Laguerre function system and its ladder operators
=====================================================

The functions l_k (indexed by multi-indices k) form an orthonormal basis of
L^2 on the positive orthant with the measure x^(2 alpha + 1) dx.  The first
order operators delta_j and their adjoints shift between the plain system and
the coordinate-differentiated systems, and build the second-order operator
whose eigenvalues are 4|k| + 2|alpha| + 2d.
"""

import numpy as np

from lps import (
    Expansion,
    PLAIN,
    analyze,
    delta_apply,
    delta_star_apply,
    eigenvalue,
    ell,
    laguerre_operator_apply,
    synthesize,
)

alpha = (0.3, -0.5)

# a Laguerre function is a product of 1-d functions; orthonormality holds in
# the weighted L^2 space
x = np.array([[0.8, 1.7], [1.5, 0.4]])
print("l_(2,1) at two points:", ell(alpha, (2, 1), x))

# recover coefficients of a finite expansion by quadrature
e = Expansion(alpha, PLAIN, {(0, 0): 1.0, (2, 1): -0.7, (1, 3): 0.25})
recovered = analyze(alpha, PLAIN, lambda p: synthesize(e, p), cutoff=4, order=48)
print("\nanalyze/synthesize round trip:")
for k, c in sorted(e.coeffs.items()):
    print(f"  mode {k}: put {c:+.6f}, recovered {recovered.coeffs[k]:+.6f}")

# the ladder algebra: delta_j^* delta_j acts as multiplication by 4 k_j,
# and the full operator is diagonal with the linear eigenvalue
dd = delta_star_apply(delta_apply(e, 1), 1)
print("\ndelta_1^* delta_1 multiplies mode k by 4 k_1:")
for k, c in sorted(dd.coeffs.items()):
    print(f"  mode {k}: {c / e.coeffs[k]:.1f}  (expected {4 * k[0]})")

op = laguerre_operator_apply(e)
print("\noperator eigenvalues 4|k| + 2|alpha| + 2d:")
for k, c in sorted(op.coeffs.items()):
    print(f"  mode {k}: {c / e.coeffs[k]:.3f}  (formula {eigenvalue(alpha, sum(k)):.3f})")
