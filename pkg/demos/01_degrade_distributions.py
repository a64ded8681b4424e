"""Turning a label distribution into a multi-label vector.

A label distribution records how strongly each label describes an instance.
To mine the implicit multi-label information we can either keep adding the
strongest labels until their combined mass passes a threshold, or simply keep
the k strongest.  This script walks both procedures on a small natural-scene
style example.
"""
import numpy as np

from ldlkit import threshold_degrade, topk_degrade

labels = ["tree", "water", "mountain", "sky"]
d = np.array([0.25, 0.4, 0.25, 0.1])

print("label distribution:")
for name, degree in zip(labels, d):
    print(f"  {name:<9} {degree:.2f}")

print("\nthreshold degradation, T = 0.5")
print("  selection order: water (0.40, running sum 0.40 <= 0.5, keep going),")
print("  then tree (0.25, running sum 0.65 > 0.5, stop).")
L = threshold_degrade(d[:, None], 0.5)
relevant = [name for name, flag in zip(labels, L.data[:, 0]) if flag]
print(f"  relevant labels: {relevant}")

print("\ntop-k degradation, k = 3")
L = topk_degrade(d[:, None], 3)
relevant = [name for name, flag in zip(labels, L.data[:, 0]) if flag]
print(f"  relevant labels: {relevant}")

print("\nthreshold sweep on the same distribution:")
for t in (0.2, 0.4, 0.6, 0.8):
    L = threshold_degrade(d[:, None], t)
    count = int(L.data[:, 0].sum())
    print(f"  T = {t:.1f} -> {count} positive label(s)")
