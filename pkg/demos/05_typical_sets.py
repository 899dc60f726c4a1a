"""
Typical sets by enumeration
===========================

For a short Bernoulli source every string of length n can be listed, so the
size and probability of the epsilon-typical set are exact.
"""

from eentropy import atypical_mass_curve, bernoulli_model, typical_set_report

report = typical_set_report(bernoulli_model([0.7, 0.3], 12), 0.2)
s = report.summary()
print(f"typical strings: {s['typical_count']} of {s['strings_total']}")
print(f"probability of the typical set: {s['total_probability_typical']:.6f}")
for reading, b in s["bounds"].items():
    print(f"bounds ({reading}): {b['lower_bound']:.1f} <= |S| <= {b['upper_bound']:.1f}"
          f"  hold: {b['lower_holds']}, {b['upper_holds']}")

# Atypical mass does not fall monotonically at small n, but it does fall.
for n, mass in atypical_mass_curve([0.7, 0.3], [4, 8, 12, 16, 24, 32, 64, 128], 0.2):
    print(f"n={n:4d} atypical mass {mass:.5f}")

fair = typical_set_report(bernoulli_model([0.5, 0.5], 12), 0.0)
print("fair coin, eps=0:", fair.typical_count, "typical strings")
