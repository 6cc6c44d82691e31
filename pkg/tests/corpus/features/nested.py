from inline import itest


class Counter:

    def __init__(self):
        self.count = 0

    def bump(self, step):
        total = step * 2
        itest().given(step, 3).check_eq(total, 6)
        if step > 0:
            total += 1
            itest().given(total, 2).check_eq(total, 3)
        self.count += total
        return total


def make():
    counter = Counter()
    itest().check_eq(counter.count, 0)
    return counter
