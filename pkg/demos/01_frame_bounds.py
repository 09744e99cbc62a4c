"""Frame and Bessel bounds of finite vector families.

A family (x_k) in C^d has Bessel bound B when sum_k |<u, x_k>|^2 is at
most B |u|^2, and is a frame when the sum is also bounded below by a
positive A.  Both constants are extreme eigenvalues of the frame
operator sum_k x_k x_k^*.
"""

import numpy as np

from framescale import (
    bessel_and_frame_bounds,
    frame_operator,
    generate,
    is_schauder_identity,
    pair_operator,
)

rng = np.random.default_rng(0)

pair = generate("gaussian", rng, n=6, d=3)
bounds = bessel_and_frame_bounds(pair.xs)
print("random family of 6 vectors in C^3")
print(f"  frame bounds: A = {bounds.lower:.4f}, B = {bounds.upper:.4f}")
print(f"  is a frame: {bounds.is_frame}")

s = frame_operator(pair.xs)
w = np.linalg.eigvalsh(s)
print(f"  frame operator spectrum: {np.round(w, 4)}")

# a union of orthonormal bases is a tight frame: A = B = number of bases
union = generate("onb_union", rng, n=6, d=3)
tight = bessel_and_frame_bounds(union.xs)
print("\nunion of two orthonormal bases")
print(f"  frame bounds: A = {tight.lower:.4f}, B = {tight.upper:.4f}")

# a frame with its canonical dual reproduces every vector:
# u = sum_k <u, y_k> x_k, so the pair operator is the identity
dual = generate("schauder_mangled", rng, n=5, d=2, scaling_range=(1.0, 1.0))
t = pair_operator(dual)
print("\nframe with canonical dual")
print(f"  pair operator deviation from identity: "
      f"{np.max(np.abs(t - np.eye(2))):.2e}")
print(f"  reproduces the identity: {is_schauder_identity(dual)}")
