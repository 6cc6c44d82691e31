import math

from inline import itest

SCALE = 2


def g(x):
    return math.floor(x) * SCALE


def f(x):
    return g(x) + 1


def unused():
    return 0


value = f(3.7)
itest().check_eq(value, 7)
