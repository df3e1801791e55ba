"""Generalized Cartan matrices and the linear Weyl group actions.

Indices are 0-based internally; the CLI and fixtures use the 1-based labels
``s1, s2, ...`` and ``L1, L2, ...``.  A word ``(j1, ..., jp)`` acts as the
operator composition ``s_j1 o s_j2 o ... o s_jp`` (rightmost letter first).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import math

Word = Tuple[int, ...]
Weight = Tuple[int, ...]
RootVector = Tuple[int, ...]

INFINITY = math.inf


class CartanError(ValueError):
    """Validation failure; ``code`` is one of the documented error names."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


PRESET_MATRICES: Dict[str, Tuple[Tuple[int, ...], ...]] = {
    "2A1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -2), (-1, 2)),
    "G2": ((2, -3), (-1, 2)),
    "A2(1)": ((2, -1, -1), (-1, 2, -1), (-1, -1, 2)),
}


@dataclass(frozen=True)
class CartanData:
    matrix: Tuple[Tuple[int, ...], ...]
    epsilon: Optional[Tuple[Fraction, ...]] = None

    @property
    def n(self) -> int:
        return len(self.matrix)

    def a(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def with_symmetrizer(self) -> "CartanData":
        if self.epsilon is not None:
            return self
        return CartanData(self.matrix, symmetrize(self))

    # -- linear actions ----------------------------------------------------
    def reflect_weight(self, i: int, lam: Sequence[int]) -> Weight:
        # r_i(Lambda) = Lambda - <h_i, Lambda> alpha_i, alpha_i = sum_k a_ki Lambda_k
        ci = lam[i]
        if not ci:
            return tuple(lam)
        return tuple(lam[k] - ci * self.matrix[k][i] for k in range(self.n))

    def reflect_root(self, i: int, alpha: Sequence[int]) -> RootVector:
        pair = sum(self.matrix[i][j] * alpha[j] for j in range(self.n))
        if not pair:
            return tuple(alpha)
        out = list(alpha)
        out[i] -= pair
        return tuple(out)

    def reflect_coroot(self, i: int, h: Sequence[int]) -> Tuple[int, ...]:
        pair = sum(h[j] * self.matrix[j][i] for j in range(self.n))
        out = list(h)
        out[i] -= pair
        return tuple(out)

    def root_to_weight(self, alpha: Sequence[int]) -> Weight:
        """The natural map Q -> L."""
        return tuple(sum(self.matrix[k][j] * alpha[j] for j in range(self.n)) for k in range(self.n))

    def simple_root(self, i: int) -> RootVector:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def fundamental_weight(self, i: int) -> Weight:
        return tuple(1 if k == i else 0 for k in range(self.n))


def validate_gcm(matrix: Sequence[Sequence[int]], epsilon=None) -> CartanData:
    rows = [list(r) for r in matrix]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise CartanError("NOT_SQUARE", "the matrix must be square and nonempty")
    for i in range(n):
        for j in range(n):
            v = rows[i][j]
            if isinstance(v, bool) or int(v) != v:
                raise CartanError("NOT_INTEGER", f"entry ({i + 1},{j + 1}) = {v!r}")
    m = tuple(tuple(int(v) for v in r) for r in rows)
    for i in range(n):
        if m[i][i] != 2:
            raise CartanError("DIAGONAL_NOT_TWO", f"a[{i + 1}][{i + 1}] = {m[i][i]}")
    for i in range(n):
        for j in range(n):
            if i != j and m[i][j] > 0:
                raise CartanError("POSITIVE_OFFDIAGONAL", f"a[{i + 1}][{j + 1}] = {m[i][j]}")
            if i != j and (m[i][j] == 0) != (m[j][i] == 0):
                raise CartanError("ZERO_PATTERN_ASYMMETRIC", f"a[{i + 1}][{j + 1}] = {m[i][j]}, a[{j + 1}][{i + 1}] = {m[j][i]}")
    eps = None
    if epsilon is not None:
        eps = tuple(Fraction(e) for e in epsilon)
        if len(eps) != n or any(e <= 0 for e in eps):
            raise CartanError("BAD_SYMMETRIZER", "epsilon must be n positive rationals")
        for i in range(n):
            for j in range(n):
                if m[i][j] * eps[j] != m[j][i] * eps[i]:
                    raise CartanError("BAD_SYMMETRIZER", f"a_ij eps_j != a_ji eps_i at ({i + 1},{j + 1})")
    return CartanData(m, eps)


def preset_cartan(name: str) -> CartanData:
    try:
        return validate_gcm(PRESET_MATRICES[name])
    except KeyError:
        raise CartanError("UNKNOWN_PRESET", name) from None


def symmetrize(c: CartanData) -> Tuple[Fraction, ...]:
    """Positive ``eps`` with ``a_ij eps_j = a_ji eps_i``; first entry of each
    connected component is 1."""
    n = c.n
    eps: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if eps[start] is not None:
            continue
        eps[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j == i or c.a(i, j) == 0:
                    continue
                want = eps[i] * c.a(j, i) / c.a(i, j)
                if eps[j] is None:
                    eps[j] = want
                    queue.append(j)
                elif eps[j] != want:
                    raise CartanError("NOT_SYMMETRIZABLE", f"cycle through {i + 1},{j + 1} is inconsistent")
    return tuple(eps)


def is_symmetrizable(c: CartanData) -> bool:
    try:
        symmetrize(c)
    except CartanError:
        return False
    return True


def coxeter_m(c: CartanData, i: int, j: int):
    if i == j:
        raise CartanError("SAME_INDEX", "m_ij needs i != j")
    p = c.a(i, j) * c.a(j, i)
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(p, INFINITY)


def act_weight(c: CartanData, word: Sequence[int], lam: Sequence[int]) -> Weight:
    out = tuple(lam)
    for i in reversed(word):
        out = c.reflect_weight(i, out)
    return out


def act_root(c: CartanData, word: Sequence[int], alpha: Sequence[int]) -> RootVector:
    out = tuple(alpha)
    for i in reversed(word):
        out = c.reflect_root(i, out)
    return out


def act_coroot(c: CartanData, word: Sequence[int], h: Sequence[int]) -> Tuple[int, ...]:
    out = tuple(h)
    for i in reversed(word):
        out = c.reflect_coroot(i, out)
    return out


def pairing(h: Sequence[int], lam: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(h, lam))


def is_positive_root(alpha: Sequence[int]) -> bool:
    return any(alpha) and all(x >= 0 for x in alpha)


def inversion_roots(c: CartanData, word: Sequence[int]) -> List[RootVector]:
    """``s_j1 ... s_j(k-1) (alpha_jk)`` for k = 1..p."""
    return [act_root(c, word[:k], c.simple_root(word[k])) for k in range(len(word))]


def is_reduced(c: CartanData, word: Sequence[int]) -> bool:
    return all(is_positive_root(b) for b in inversion_roots(c, word))


def reflect_lambda(c: CartanData, i: int) -> Dict[int, Dict[int, int]]:
    """Linear substitution ``lambda_j -> lambda_j - a_ji lambda_i`` as
    ``{j: {k: coeff}}``."""
    out = {}
    for j in range(c.n):
        row = {j: 1}
        if c.a(j, i):
            row[i] = row.get(i, 0) - c.a(j, i)
        out[j] = {k: v for k, v in row.items() if v}
    return out


def element_key(c: CartanData, word: Sequence[int]) -> Weight:
    """Identifies the group element: the image of the regular weight rho."""
    return act_weight(c, word, (1,) * c.n)


def alternating_word(i: int, j: int, length: int) -> Word:
    return tuple(i if k % 2 == 0 else j for k in range(length))


def reduced_words_by_element(c: CartanData, max_len: int) -> Dict[Weight, List[Word]]:
    """All reduced words of length <= max_len grouped by group element.

    A word is reduced when its element does not occur at a shorter length.
    Only words whose proper prefixes are reduced are extended.
    """
    groups: Dict[Weight, List[Word]] = {element_key(c, ()): [()]}
    first_len = {element_key(c, ()): 0}
    layer: List[Word] = [()]
    for length in range(1, max_len + 1):
        nxt = []
        for w in layer:
            for i in range(c.n):
                if w and w[-1] == i:
                    continue
                cand = w + (i,)
                key = element_key(c, cand)
                seen = first_len.get(key)
                if seen is None:
                    first_len[key] = length
                    groups[key] = [cand]
                    nxt.append(cand)
                elif seen == length:
                    groups[key].append(cand)
                    nxt.append(cand)
        layer = nxt
        if not layer:
            break
    return groups


def all_words(n: int, max_len: int):
    """Every word over n letters of length <= max_len, shortest first."""
    layer: List[Word] = [()]
    yield ()
    for _ in range(max_len):
        layer = [w + (i,) for w in layer for i in range(n)]
        yield from layer
