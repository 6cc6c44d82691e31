import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest().given(name, 5).check_none(m)
    return m.group(1)
