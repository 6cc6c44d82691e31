import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest(disabled=True).given(name, "a:0").check_eq(m.group(1), "never")
    return m.group(1)
