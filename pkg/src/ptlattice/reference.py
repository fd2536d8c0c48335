"""Published reference values used by ``ptlattice tables`` and the acceptance checks."""

# n -> (alpha, degenerate energy) at z = 3
ALPHA_Z3 = {
    2: (1.0, 2.0),
    4: (0.0385208965, 2.0),
    6: (0.011344897, 2.0),
    8: (0.003383828, 0.9285),
    10: (0.001246890, 0.6194),
    12: (0.000543788, 0.4438),
    14: (0.000266880, 0.3335),
}
ALPHA_TOL = 1e-7
ENERGY_TOL = 1e-3

# critical exponents at n = 8, descending, and the patterns between them
ZCRIT_N8 = (3.982, 3.178, 1.630, 1.0358)
PATTERNS_N8 = ("E(E(E(C)))", "E(E(V(C,C)))", "E(V(C,C,C))", "V(C,E(C),C)", "V(C,C,C,C)")
ZCRIT_TOL = 1e-2

BETA = {6: 0.2718445, 8: 0.1683983}
SECULAR = {
    6: (1, 0, -26, 0, 181, 0, -225),
    8: (1, 0, -70, 0, 1487, 0, -9139, 0, 11025),
}
# positive roots; the polynomials are even
SECULAR_ROOTS = {
    6: (1.256913500, 3.102940862, 3.846027361),
    8: (1.259204635, 2.752948888, 5.256297172, 5.762552919),
}
SECULAR_FACTORS = {
    6: ((1, -2, -11, 15), (1, 2, -11, -15)),
    8: ((1, -2, -33, 47, 105), (1, 2, -33, -47, 105)),
}
