import re

import itest_runner_no_such_module

from inline import itest


def split_name(name):
    m = re.match(r"^(.+):\d+$", itest_runner_no_such_module.clean(name))
    itest().given(name, "a:0").check_eq(m.group(1), "a")
    return m.group(1)
