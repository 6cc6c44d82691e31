import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest(tag=["str"]).given(name, "a:0").check_eq(m.group(1), "a")
    itest(tag=["regex"]).given(name, "a:0").check_not_none(m)
    itest(tag=["bit", "str"]).given(name, "b:1").check_eq(m.group(1), "b")
    return m.group(1)


def low_bits(x):
    y = x & 0b1111
    itest(tag=["bit"]).given(x, 0b10110).check_eq(y, 0b0110)
    return y
