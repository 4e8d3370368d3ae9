# Fixed edge lists of the standard named graphs.

KARATE_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2),
    (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30), (2, 3),
    (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32), (3, 7),
    (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16), (6, 16),
    (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33),
    (15, 32), (15, 33), (18, 32), (18, 33), (19, 33), (20, 32), (20, 33),
    (22, 32), (22, 33), (23, 25), (23, 27), (23, 29), (23, 32), (23, 33),
    (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33),
    (28, 31), (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32),
    (31, 33), (32, 33),
]

FLORENTINE_NAMES = [
    "Acciaiuoli", "Medici", "Castellani", "Peruzzi", "Strozzi", "Barbadori",
    "Ridolfi", "Tornabuoni", "Albizzi", "Salviati", "Pazzi", "Bischeri",
    "Guadagni", "Ginori", "Lamberteschi",
]

# Padgett's marriage ties.
FLORENTINE_EDGES = [
    (0, 1), (1, 5), (1, 6), (1, 7), (1, 8), (1, 9), (2, 3), (2, 4), (2, 5),
    (3, 4), (3, 11), (4, 6), (4, 11), (6, 7), (7, 12), (8, 13), (8, 12),
    (9, 10), (11, 12), (12, 14),
]

TUTTE_EDGES = [
    (0, 1), (0, 2), (0, 3), (1, 4), (1, 26), (2, 10), (2, 11), (3, 18),
    (3, 19), (4, 5), (4, 33), (5, 6), (5, 29), (6, 7), (6, 27), (7, 8),
    (7, 14), (8, 9), (8, 38), (9, 10), (9, 37), (10, 39), (11, 12), (11, 39),
    (12, 13), (12, 35), (13, 14), (13, 15), (14, 34), (15, 16), (15, 22),
    (16, 17), (16, 44), (17, 18), (17, 43), (18, 45), (19, 20), (19, 45),
    (20, 21), (20, 41), (21, 22), (21, 23), (22, 40), (23, 24), (23, 27),
    (24, 25), (24, 32), (25, 26), (25, 31), (26, 33), (27, 28), (28, 29),
    (28, 32), (29, 30), (30, 31), (30, 33), (31, 32), (34, 35), (34, 38),
    (35, 36), (36, 37), (36, 39), (37, 38), (40, 41), (40, 44),
    (41, 42), (42, 43), (42, 45), (43, 44),
]

BULL_EDGES = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 4)]

SEDGEWICK_MAZE_EDGES = [
    (0, 2), (0, 5), (0, 7), (1, 7), (2, 6), (3, 4), (3, 5), (4, 5), (4, 6),
    (4, 7),
]
