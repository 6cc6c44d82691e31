from inline import itest


def first(items):
    return items[0]
    itest().given(items, [1]).check_eq(items[0], 1)
