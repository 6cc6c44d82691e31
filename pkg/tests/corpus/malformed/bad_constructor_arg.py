import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest(retries=2).given(name, "a:0").check_eq(m.group(1), "a")
    return m.group(1)
