"""Shared test helpers: seeded table generation and independent oracles.

The oracle code here deliberately avoids the package's analytics internals;
it recomputes payloads from first principles (python builtins, Decimal
rounding) so the two implementations can disagree when either is wrong.
"""

from __future__ import annotations

import math
import random
import string
from decimal import ROUND_HALF_EVEN, Decimal

from tableinsights.table import DEFAULT_SUBJECTS, DataTable, TableContext, YColumn

_LETTERS = string.ascii_lowercase


def random_word(rng: random.Random, lo: int = 3, hi: int = 9) -> str:
    return "".join(rng.choice(_LETTERS) for _ in range(rng.randint(lo, hi)))


def _random_values(rng: random.Random, n: int) -> tuple[float, ...]:
    if rng.random() < 0.08:
        return (round(rng.uniform(-1000, 1000), rng.randint(0, 2)),) * n
    decimals = rng.randint(0, 2)
    values = [round(rng.uniform(-1000, 1000), decimals) for _ in range(n)]
    if n >= 2 and rng.random() < 0.2:
        i, j = rng.sample(range(n), 2)
        values[j] = values[i]
    return tuple(values)


def random_table(rng: random.Random) -> tuple[DataTable, TableContext]:
    n_rows = rng.randint(3, 50)
    n_cols = rng.randint(1, 4)
    roll = rng.random()
    if roll < 0.55:
        start = rng.randint(1900, 2040)
        xs = [str(start + i) for i in range(n_rows)]
        if rng.random() < 0.5:
            xs.reverse()
    elif roll < 0.6:
        # numeric-looking but unordered, so not a time series
        start = rng.randint(1900, 2040)
        xs = [str(start + i) for i in range(n_rows)]
        while xs == sorted(xs) or xs == sorted(xs, reverse=True):
            rng.shuffle(xs)
    else:
        seen = set()
        xs = []
        while len(xs) < n_rows:
            w = random_word(rng).capitalize()
            if w not in seen:
                seen.add(w)
                xs.append(w)
    names = set()
    while len(names) < n_cols + 1:
        names.add(random_word(rng).capitalize())
    ordered = sorted(names)
    columns = tuple(
        YColumn(name, _random_values(rng, n_rows)) for name in ordered[1:]
    )
    table = DataTable(x_name=ordered[0], x_values=tuple(xs), y_columns=columns)
    title = " ".join(random_word(rng) for _ in range(rng.randint(2, 4))).capitalize()
    ctx = TableContext(title=title, subject=rng.choice(DEFAULT_SUBJECTS))
    return table, ctx


def round2(value: float) -> float:
    return float(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def oracle_max(xs, values):
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return xs[best], values[best]


def oracle_min(xs, values):
    best = 0
    for i in range(1, len(values)):
        if values[i] < values[best]:
            best = i
    return xs[best], values[best]


def oracle_sum(values):
    return round2(math.fsum(values))


def oracle_average(values):
    return round2(math.fsum(values) / len(values))


def oracle_ranked(xs, values, depth=3):
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))[:min(depth, len(values))]
    return tuple((xs[i], values[i]) for i in order)


def oracle_compare(xs, values, is_time_series):
    if is_time_series:
        i, j = len(values) - 2, len(values) - 1
    else:
        ranked = sorted(range(len(values)), key=lambda i: (-values[i], i))
        i, j = sorted(ranked[:2])
    if values[i] <= values[j]:
        lower, higher = i, j
    else:
        lower, higher = j, i
    return (xs[lower], values[lower], xs[higher], values[higher])


def oracle_value(xs, values):
    return xs[-1], values[-1]
