"""Per-criterion outcomes collected by test_acceptance and printed at the end of the run."""

from contextlib import contextmanager

RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(n: int, text: str):
    RESULTS[n] = (False, text)
    try:
        yield
    except BaseException:
        print(f"criterion {n}: FAIL  {text}")
        raise
    RESULTS[n] = (True, text)
    print(f"criterion {n}: PASS  {text}")
