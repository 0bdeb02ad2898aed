"""Sparse exact linear algebra over cyclotomic scalars.

Vectors are {column-index: CycNum} dicts with no stored zeros.  The echelon
structure keeps every stored row reduced so that membership tests, ranks,
coordinate solves and nullspaces are all exact and deterministic.
"""

from __future__ import annotations

from typing import Optional

from .cyclotomic import CycNum


def vec_add_scaled(target: dict, source: dict, scale) -> None:
    """target += scale * source, dropping zeros in place."""
    for col, val in source.items():
        cur = target.get(col)
        new = val * scale if cur is None else cur + val * scale
        if new.is_zero() if isinstance(new, CycNum) else new == 0:
            if cur is not None:
                del target[col]
        else:
            target[col] = new


class SparseEchelon:
    """Incremental echelon basis with optional coordinate tracking.

    Rows are normalized to leading (minimal-column) coefficient 1.  When
    ``track`` is set, each row also carries its expression in terms of the
    inserted vectors, enabling coordinate solves.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[int, dict] = {}
        self.track = track
        self.combos: dict[int, dict] = {}
        self.count_inserted = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: dict, combo: Optional[dict]) -> tuple[dict, Optional[dict]]:
        row = dict(row)
        while row:
            lead = min(row)
            pivot_row = self.pivots.get(lead)
            if pivot_row is None:
                return row, combo
            scale = -row[lead]
            vec_add_scaled(row, pivot_row, scale)
            if combo is not None:
                vec_add_scaled(combo, self.combos[lead], scale)
        return row, combo

    def reduce(self, row: dict) -> dict:
        """Fully reduce ``row`` against the current basis (no insertion)."""
        reduced, _ = self._reduce(row, None)
        return reduced

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def coordinates(self, row: dict) -> Optional[dict]:
        """Expression of ``row`` in inserted-vector indices, or None."""
        if not self.track:
            raise ValueError("echelon was built without coordinate tracking")
        reduced, combo = self._reduce(row, {})
        if reduced:
            return None
        return {k: -v for k, v in combo.items()}

    def insert(self, row: dict) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        idx = self.count_inserted
        self.count_inserted += 1
        combo = None
        if self.track:
            combo = {idx: _field_one(row)} if row else {}
        reduced, combo = self._reduce(row, combo)
        if not reduced:
            return False
        lead = min(reduced)
        inv = reduced[lead].inv()
        normalized = {c: v * inv for c, v in reduced.items()}
        self.pivots[lead] = normalized
        if self.track:
            self.combos[lead] = {k: v * inv for k, v in combo.items()}
        # keep earlier rows fully reduced against the new pivot
        for col, prow in list(self.pivots.items()):
            if col == lead:
                continue
            coef = prow.get(lead)
            if coef is not None:
                vec_add_scaled(prow, normalized, -coef)
                if self.track:
                    vec_add_scaled(self.combos[col], self.combos[lead], -coef)
        return True

    def basis_rows(self) -> list[dict]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def _field_one(row: dict):
    some = next(iter(row.values()))
    return some.one(some.order)


def rank(rows: list[dict]) -> int:
    ech = SparseEchelon()
    for r in rows:
        ech.insert(r)
    return ech.rank


def nullspace(conditions: list[dict], dim: int, order: int) -> list[dict]:
    """Basis of {v in k^dim : C v = 0} for sparse condition rows.

    Returns echelonized sparse vectors, deterministic, with leading
    coefficient 1 at the smallest free column.
    """
    ech = SparseEchelon()
    for c in conditions:
        ech.insert(c)
    pivot_cols = set(ech.pivots)
    one = CycNum.one(order)
    basis = []
    for free in range(dim):
        if free in pivot_cols:
            continue
        vec = {free: one}
        for col, row in ech.pivots.items():
            coef = row.get(free)
            if coef is not None:
                vec[col] = -coef
        basis.append(vec)
    return basis


def solve_columns(columns: list[dict], target: dict) -> Optional[list]:
    """Solve sum_j x_j * columns[j] = target; returns the x list or None."""
    ech = SparseEchelon(track=True)
    for col in columns:
        ech.insert(col)
    coords = ech.coordinates(target)
    if coords is None:
        return None
    # coordinates are relative to inserted indices; unused columns get 0
    zero = None
    for col in columns:
        if col:
            zero = next(iter(col.values())).zero(next(iter(col.values())).order)
            break
    if zero is None and target:
        zero = next(iter(target.values())).zero(next(iter(target.values())).order)
    out = [zero] * len(columns)
    for idx, val in coords.items():
        out[idx] = val
    return out
