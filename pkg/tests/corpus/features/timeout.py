from inline import itest


def wait(ready):
    while not ready:
        ready = False
    itest(timeout=1).given(ready, False).check_true(ready)
    return ready
