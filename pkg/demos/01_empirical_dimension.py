"""Empirical dimension: a scale/rotation-invariant dimension estimator.

Collapses an isotropic 3-d Gaussian cloud into a plane and watches the
estimator interpolate smoothly from 3 to 2, for strict (small eps) and
lenient (large eps) settings. True rank would jump discontinuously at
the very end of the collapse.
"""

import numpy as np

from gdm import empirical_dimension, singular_values

rng = np.random.default_rng(0)
cloud = rng.normal(size=(3, 4000))

print("empirical dimension of a 3-d Gaussian cloud, one axis shrunk by s:")
print()
header = "  shrink s " + "".join("   eps=%.2f" % e for e in (0.1, 0.35, 0.9))
print(header)
for s in np.linspace(1.0, 0.0, 11):
    squashed = cloud * np.array([1.0, 1.0, s])[:, None]
    sigma = singular_values(squashed)
    row = "     %5.2f " % s
    row += "".join("   %8.4f" % empirical_dimension(sigma, e) for e in (0.1, 0.35, 0.9))
    print(row)

print()
print("invariance checks on a random 9 x 40 matrix:")
a = rng.normal(size=(9, 40))
base = empirical_dimension(singular_values(a), 0.35)
scaled = empirical_dimension(singular_values(37.0 * a), 0.35)
q, _ = np.linalg.qr(rng.normal(size=(9, 9)))
rotated = empirical_dimension(singular_values(q @ a), 0.35)
print("  base      %.12f" % base)
print("  scaled    %.12f   (|diff| = %.1e)" % (scaled, abs(scaled - base)))
print("  rotated   %.12f   (|diff| = %.1e)" % (rotated, abs(rotated - base)))
