from inline import itest


def identity(name):
    itest().given(name, "a").check_eq(name, "a")
    return name
