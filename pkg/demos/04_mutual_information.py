"""
Mutual information distance
===========================

e_H(X, Y) = 1 - I(X;Y) / max(H(X), H(Y)) for an explicit joint distribution,
and the same formula applied to the empirical joint of two aligned strings.
"""

from eentropy import JointTable, e_h_from_strings, e_h_parts, from_text

for name, table in [
    ("X = Y", [[0.5, 0.0], [0.0, 0.5]]),
    ("independent", [[0.25, 0.25], [0.25, 0.25]]),
    ("1/2, 1/4, 1/4", [[0.5, 0.25], [0.25, 0.0]]),
]:
    r = e_h_parts(JointTable(table))
    print(f"{name:14s} H(X)={r.h_x:.6f} H(X,Y)={r.h_xy:.6f} I={r.mutual_information:.6f} e_H={r.value:.6f}")

# Positionwise pairing only sees symbol co-occurrence. Shifted copies of one
# periodic pattern come out fully dependent (0) or independent (1) depending
# on the shift, and a constant string is independent of everything.
print(e_h_from_strings(from_text("0101"), from_text("1010")))
print(e_h_from_strings(from_text("0000"), from_text("0101")))
print(e_h_from_strings(from_text("0011" * 8), from_text("0110" * 8)))
