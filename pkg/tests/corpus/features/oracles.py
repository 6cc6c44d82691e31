import re

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", name)
    itest().given(name, "a:0").check_eq(m.group(1), "a")
    itest().given(name, "a:0").check_neq(m.group(1), "b")
    itest().given(name, "a:0").check_true(m)
    itest().given(name, "a:a").check_false(m)
    itest().given(name, "a:a").check_none(m)
    itest().given(name, "a:0").check_not_none(m)
    itest().given(name, "a:0").check_same(m.string, name)
    itest().given(name, "a:0").check_not_same(m, None)
    return m.group(1)
