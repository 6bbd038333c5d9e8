"""Supervised binary discretization walkthrough.

Shows the split-point machinery on a numeric feature: candidate
midpoints, the entropy objective, and the chosen cut.
"""

from rumix import (best_split, candidate_midpoints, entropy,
                   weighted_split_entropy)

# hours studied vs pass/fail: a clean threshold near 4
hours = [1.0, 1.5, 2.0, 3.0, 3.5, 5.0, 5.5, 6.0, 7.5, 8.0]
result = ["fail"] * 5 + ["pass"] * 5

print("class entropy of the whole set:",
      round(entropy([result.count("fail"), result.count("pass")]), 4))

print("\ncandidate cuts (midpoints of adjacent distinct values):")
for cut in candidate_midpoints(hours):
    info = weighted_split_entropy(hours, result, cut)
    print(f"  cut {cut:4.2f} -> weighted entropy {info:.4f}")

chosen = best_split("hours", hours, result)
print(f"\nbest split: {chosen.feature} at {chosen.cut_value}"
      f" -> bins {chosen.bins}")

# a noisy feature still gets its entropy-minimizing cut
noisy = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
labels = ["a", "a", "b", "a", "a", "b", "b", "a", "b", "b"]
print("\nnoisy feature:", best_split("noisy", noisy, labels))

# constant features have no valid split and collapse to one bin
print("constant feature:", best_split("flat", [3, 3, 3], ["a", "b", "a"]))
