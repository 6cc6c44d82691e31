import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest(parameterized=True).given(name, ["a:0", "b:0"]).check_eq(m.group(1), ["a", "b", "c"])
    return m.group(1)
