import numpy as np


def random_joint(rng, nx, ny, full_support=True):
    w = rng.random((nx, ny))
    if full_support:
        w += 0.05
    return w / w.sum()
