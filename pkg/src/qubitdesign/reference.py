"""Reference schedules for 5 and 10 measurements.

``GREEDY`` holds the integer schedules the greedy search produces (ascending);
``SWARM`` holds real-valued schedules obtained by swarm search, used as the
comparison points in figure data and benchmarks.
"""

GREEDY = {
    5: (1, 1, 1, 2, 3),
    10: (1, 1, 1, 1, 1, 2, 2, 3, 4, 6),
}

SWARM = {
    5: (1.060, 1.082, 1.419, 2.138, 2.870),
    10: (1.071, 1.107, 1.161, 1.180, 1.200, 2.041, 2.152, 3.070, 3.970, 4.906),
}
