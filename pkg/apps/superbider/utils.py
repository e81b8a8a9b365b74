# -----------------------------------------------------------------------------
# Superbider - exact super-biderivation engine
# Released for research and personal use, no warranty is given, either
# expressed or implied.
# -----------------------------------------------------------------------------
# fmt off
# pylint: disable=consider-using-f-string
# pylint: disable=line-too-long


class DummyThread:
    def __init__(self, result):
        """
        Store the data into the class
        """
        self.result = result

    def get(self):
        """
        Return the result
        """
        return self.result


def pool_running(pool):
    """
    True when work can be handed to the pool
    """
    return pool is not None and getattr(pool, "_state", None) == "RUN"


def launch(pool, function, args):
    """
    Run function(*args) on the pool, or inline when there is no running pool

    Either way the returned handle has a get() method.
    """
    if pool_running(pool):
        return pool.apply_async(function, args)
    return DummyThread(function(*args))


def partition_range(total, parts):
    """
    Split range(total) into at most parts contiguous (start, end) chunks
    """
    parts = max(1, min(int(parts), total)) if total > 0 else 1
    size, extra = divmod(total, parts)
    ranges = []
    start = 0
    for index in range(parts):
        end = start + size + (1 if index < extra else 0)
        if end > start:
            ranges.append((start, end))
        start = end
    return ranges


def format_bool(value):
    return "true" if value else "false"


def format_vector(field, vector):
    """
    Space separated scalars in the canonical field format
    """
    return " ".join(field.format(x) for x in vector)
