"""Shared helpers for the test suite."""

import numpy as np


def load_csv(path):
    """Structured array with one field per CSV column."""
    return np.genfromtxt(path, delimiter=",", names=True)


def l2(x):
    return float(np.sqrt(np.sum(np.square(np.asarray(x)))))


def trace_distance(a, b):
    eigs = np.linalg.eigvalsh(a - b)
    return 0.5 * float(np.sum(np.abs(eigs)))
