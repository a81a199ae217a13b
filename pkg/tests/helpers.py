"""Shared generators for the randomized suites (seeded, deterministic)."""

from __future__ import annotations

import random

from varietal.words import Word, integrated, multiple_letters


def random_word(rng: random.Random, pool, min_len=4, max_len=8) -> Word:
    letters = list(pool[: rng.randint(2, min(3, len(pool)))])
    if len(pool) > 3 and rng.random() < 0.4:
        letters.append(pool[3])
    return Word(rng.choice(letters) for _ in range(rng.randint(min_len, max_len)))


def absorb_splits(w: Word):
    """All valid (v1, a, v2, v3) splits for the square-gathering rewrite."""
    mul = multiple_letters(w)
    return [
        (w[:p], w[p], w[p + 1 : q], w[q + 1 :])
        for p in range(len(w))
        for q in range(p + 1, len(w))
        if w[p] == w[q] and set(w[p + 1 : q]) <= mul
    ]


def swap_splits(w: Word):
    """All valid ((w1, a, b, w2), case) splits for the adjacent swap."""
    mul = multiple_letters(w)
    out = []
    for k in range(len(w) - 1):
        a, b = w[k], w[k + 1]
        if a == b or a not in mul or b not in mul:
            continue
        if integrated(w, a, b):
            out.append(((w[:k], a, b, w[k + 2 :]), "integrated"))
        else:
            positions = [i for i, c in enumerate(w[:k]) if c == b]
            if positions and set(w[positions[-1] + 1 : k]) <= mul:
                out.append(((w[:k], a, b, w[k + 2 :]), "second-occurrence"))
    return out


def random_macro_applications(seed: int, count: int, pool=("a", "b", "c", "s")):
    """``count`` seeded valid applications: (op, word, result-builder args)."""
    from varietal.rewrite import absorb_square, normalize_con3, swap_adjacent

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        op = rng.choice(("absorb", "swap", "con3"))
        w = random_word(rng, pool)
        if op == "absorb":
            splits = absorb_splits(w)
            if not splits:
                continue
            result = absorb_square(w, rng.choice(splits))
        elif op == "swap":
            splits = swap_splits(w)
            if not splits:
                continue
            split, case = rng.choice(splits)
            result = swap_adjacent(w, split, case)
        else:
            result = normalize_con3(w)
        if result == w:
            continue
        out.append((op, w, result))
    return out
