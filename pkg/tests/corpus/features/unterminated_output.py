import sys

from inline import itest


def greet(name):
    n = sys.stdout.write(name)
    itest().given(name, "abc").check_eq(n, 3)
    itest().given(name, "abc").check_eq(n, 4)
    print(name, end="")
    itest().given(name, "abc").check_eq(name, "abc")
    return n
