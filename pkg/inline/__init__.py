"""Runtime side of inline tests

Subject files write ``from inline import itest`` and declare tests after
the statement they exercise. When the file runs normally every call here
is a no-op; itest-runner reads the declarations from the syntax tree and
runs them on its own.
"""


class itest:

    def __init__(self, test_name=None, parameterized=False, repeated=1, tag=(),
                 disabled=False, timeout=None):
        self.test_name = test_name
        self.parameterized = parameterized
        self.repeated = repeated
        self.tag = list(tag)
        self.disabled = disabled
        self.timeout = timeout

    def assume(self, condition):
        return self

    def given(self, variable, value):
        return self

    def check_eq(self, actual, expected):
        return self

    def check_neq(self, actual, expected):
        return self

    def check_same(self, actual, expected):
        return self

    def check_not_same(self, actual, expected):
        return self

    def check_true(self, value):
        return self

    def check_false(self, value):
        return self

    def check_none(self, value):
        return self

    def check_not_none(self, value):
        return self


__all__ = ["itest"]
