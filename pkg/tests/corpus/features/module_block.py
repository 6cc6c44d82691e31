from inline import itest

counter = []
if __name__ == "__main__":
    base = 10
    counter.append(base)
    itest().given(base, 10).check_eq(len(counter), 1)
