import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest(parameterized=True).given(name, ["a:0", "a:1:1"]).check_eq(m.group(1), ["a", "a:1"])
    return m.group(1)
