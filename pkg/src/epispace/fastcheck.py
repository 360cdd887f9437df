"""Vectorized postulate evaluation over many operators at once.

Operators are given as an integer array ``tables`` of shape ``(N, S, K)``
(``K`` = number of input masks) holding target state indices.  Every function
returns a boolean array of shape ``(N,)``.  The scalar checkers in
:mod:`epispace.postulates` are the reference; this module exists so that
exhaustive scans over hundreds of thousands of operators stay fast.
"""

from __future__ import annotations

import numpy as np

from .postulates import AGM, BY_REPRESENTATION, CL, ECL, PostulateId

P = PostulateId


class Evaluator:
    def __init__(self, bel, n_masks: int):
        self.bel = np.asarray(bel, dtype=np.int64)
        self.K = n_masks
        A = np.arange(n_masks, dtype=np.int64)
        self.A = A
        self.AND = A[:, None] & A[None, :]
        self.OR = A[:, None] | A[None, :]
        self.SUB = (A[:, None] & ~A[None, :]) == 0  # SUB[a, b]: a <= b

    def beliefs(self, tables: np.ndarray) -> np.ndarray:
        return self.bel[tables]

    # each returns violations with shape (N, S, K) or (N, S, K, K)

    def _single(self, p: PostulateId, M: np.ndarray) -> np.ndarray:
        A = self.A[None, None, :]
        b = self.bel[None, :, None]
        if p is P.R1:
            return (M & ~A) != 0
        if p in (P.R2, P.CL2, P.ECL2):
            return ((A & b) != 0) & (M != (A & b))
        if p is P.R3:
            return (A != 0) & (M == 0)
        if p in (P.CL1, P.ECL1):
            return ((M & ~A) != 0) & (M != b)
        if p is P.CL3:
            return M == 0
        if p in (P.CL3wcp, P.ECL3):
            return (M == 0) & (b != 0) & (A != 0)
        if p is P.WCP:
            return (b != 0) & (A != 0) & (M == 0)
        raise KeyError(p)

    def _pair(self, p: PostulateId, M: np.ndarray) -> np.ndarray:
        MA = M[:, :, :, None]
        MB = M[:, :, None, :]
        B = self.A[None, None, None, :]
        if p is P.R5:
            x = MA & B
            return (x & ~M[:, :, self.AND]) != 0
        if p is P.R6:
            x = MA & B
            return (x != 0) & ((M[:, :, self.AND] & ~x) != 0)
        if p in (P.CL3u, P.ECL4):
            return (MA != 0) & self.SUB[None, None] & (MB == 0)
        if p in (P.CL5, P.ECL6):
            A = self.A[None, None, :, None]
            return ((MA & ~A) == 0) & self.SUB[None, None] & ((MB & ~B) != 0)
        if p in (P.CL6, P.ECL7):
            MU = M[:, :, self.OR]
            return (MU != MA) & (MU != MB) & (MU != (MA | MB))
        raise KeyError(p)

    def satisfies(self, p: PostulateId | str, M: np.ndarray) -> np.ndarray:
        """``M`` is the belief array ``bel[tables]``; result has shape ``(N,)``."""
        p = PostulateId(p)
        n = M.shape[0]
        if p in BY_REPRESENTATION:
            return np.ones(n, dtype=bool)
        if p in (P.R5, P.R6, P.CL3u, P.ECL4, P.CL5, P.ECL6, P.CL6, P.ECL7):
            bad = self._pair(p, M)
        else:
            bad = self._single(p, M)
        return ~bad.reshape(n, -1).any(axis=1)

    def satisfies_all(self, postulates, M: np.ndarray) -> np.ndarray:
        ok = np.ones(M.shape[0], dtype=bool)
        for p in postulates:
            ok &= self.satisfies(p, M)
        return ok

    def classes(self, tables: np.ndarray) -> dict[str, np.ndarray]:
        M = self.beliefs(tables)
        return {
            "AGMRev": self.satisfies_all(AGM, M),
            "CLRev": self.satisfies_all(CL, M),
            "ECLRev": self.satisfies_all(ECL, M),
        }
