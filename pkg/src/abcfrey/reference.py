"""Published reference values used by ``repro`` and the acceptance tests."""

from fractions import Fraction

from .maps import TorsionFamily as T

SEEDS = {
    T.C2xC2: (4, 121),
    T.C2xC4: (32, 49),
    T.C2xC6: (432, 299693),
    T.C2xC8: (4, 121),
}

# quality of the seed triples
SEED_QUALITY = {(32, 49): 1.1757, (432, 299693): 1.0261, (4, 121): 1.0272}

# q(P_j) for j = 1, 2, 3
QUALITY = {
    T.C2xC2: {1: 1.0755, 2: 1.0324, 3: 1.015},
    T.C2xC4: {1: 1.2425, 2: 1.0531, 3: 1.0130},
    T.C2xC6: {1: 1.1211, 2: 1.0278},
    T.C2xC8: {1: 1.0331, 2: 1.0040},
}

# modified Szpiro ratio of the Frey curve of P_j
SIGMA_M = {
    T.C2xC2: {1: 6.4204, 2: 6.1912, 3: 6.0901},
    T.C2xC4: {1: 7.4219, 2: 6.3124, 3: 6.0769},
    T.C2xC6: {1: 6.7269, 2: 6.1666},
    T.C2xC8: {1: 6.1985, 2: 6.0241},
}

# factored a_1, b_1 as {prime: exponent}
FACTORED_A1 = {
    T.C2xC2: {2: 5, 11: 2, 14657: 1},
    T.C2xC4: {2: 12, 7: 4},
    T.C2xC6: {2: 16, 3: 9, 17: 3, 61: 1},
    T.C2xC8: {2: 12, 11: 8},
}
FACTORED_B1 = {
    T.C2xC2: {3: 8, 13: 4},
    T.C2xC4: {3: 8, 17: 2},
    T.C2xC6: {5: 9, 7: 12, 11: 1, 27127: 1},
    T.C2xC8: {7: 1, 31: 1, 503: 1, 1951: 1, 14657: 2},
}

THETA = {
    T.C2xC2: Fraction(1),
    T.C2xC4: Fraction(1),
    T.C2xC6: Fraction(487517, 100000),
    T.C2xC8: Fraction(317374, 100000),
}

TOLERANCE = 0.001

# depth reached under the default budget; j = 3 needs --deep
DEFAULT_DEPTH = 2
DEEP_DEPTH = {T.C2xC2: 3, T.C2xC4: 3, T.C2xC6: 2, T.C2xC8: 2}
