"""Reduced words in a free group, as tuples of (letter, sign) pairs.

Letters are hashable labels, signs are +1/-1, and every function returns a
fully reduced word (no adjacent x x^-1). The empty tuple is the identity.
"""

from __future__ import annotations

from .errors import InputError


def free_reduce(letters) -> tuple:
    stack = []
    for item in letters:
        x, s = item
        if s not in (1, -1):
            raise InputError(f"word sign must be +1 or -1, got {s!r}")
        if stack and stack[-1][0] == x and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((x, s))
    return tuple(stack)


def word_mul(u, v) -> tuple:
    return free_reduce(tuple(u) + tuple(v))


def word_inv(u) -> tuple:
    return tuple((x, -s) for x, s in reversed(tuple(u)))


def word_str(w) -> str:
    if not w:
        return "1"
    return ".".join(f"{x}" if s == 1 else f"{x}^-1" for x, s in w)


def word_to_json(w):
    return [[x, s] for x, s in w]


def word_from_json(data) -> tuple:
    if not isinstance(data, list):
        raise InputError("word must be a list of [letter, sign] pairs")
    out = []
    for item in data:
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise InputError(f"bad word letter: {item!r}")
        out.append((item[0], int(item[1])))
    return free_reduce(out)
