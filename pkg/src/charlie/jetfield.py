"""Truncated first-order differential operators on the jet space of u_xy = f(u).

A JetField stores the coefficient of d/du (the "u slot") plus coefficients of
d/du_1 ... d/du_N as quasipolynomials.  Slots are kept only where they are
provably exact, i.e. equal to the corresponding coefficient of the untruncated
operator; bracketing tracks exactness slot by slot, which is what makes every
equality claim in this package a statement about retained slots rather than an
approximation.

The exact total derivative D acts on quasipolynomials without truncation via
apply_total_derivative; make_D materializes it as a JetField for bracketing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import exactring as xr
from .bell import d_power_exp
from .exactring import Quasi


class TruncationError(ValueError):
    """An operation needed slots beyond the stored valid order."""


@dataclass(frozen=True)
class JetField:
    u_slot: Quasi
    slots: tuple  # slots[j-1] = coefficient of d/du_j, j = 1..valid_order
    valid_order: int
    d_count: int = 0  # bracket-with-D steps in this field's history, bookkeeping only

    def slot(self, j: int) -> Quasi:
        if not 1 <= j <= self.valid_order:
            raise TruncationError(f"slot {j} outside valid order {self.valid_order}")
        return self.slots[j - 1]

    def is_zero(self) -> bool:
        return xr.qp_is_zero(self.u_slot) and all(xr.qp_is_zero(s) for s in self.slots)


@dataclass(frozen=True)
class ZeroStatus:
    """Zero certificate: either all retained slots vanish up to `order`, or a
    witness slot (0 = the u slot) is nonzero."""
    is_zero: bool
    order: int = 0
    witness_slot: int = -1

    def __str__(self) -> str:
        if self.is_zero:
            return f"ZERO_UP_TO({self.order})"
        return f"NONZERO(slot {self.witness_slot})"


def make_field(u_slot: Quasi, slots: list, valid_order: int, d_count: int = 0) -> JetField:
    if valid_order < 1:
        raise ValueError(f"valid order must be >= 1, got {valid_order}")
    if len(slots) != valid_order:
        raise ValueError(f"expected {valid_order} slots, got {len(slots)}")
    return JetField(u_slot, tuple(slots), valid_order, d_count)


def zero_field(order: int) -> JetField:
    return make_field({}, [{} for _ in range(order)], order)


def make_D(order: int) -> JetField:
    """D = u_1 d/du + u_2 d/du_1 + u_3 d/du_2 + ...; operator bigrading (-1, 0)."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    slots = [xr.qp_from_poly(xr.poly_var(k + 1)) for k in range(1, order + 1)]
    return make_field(xr.qp_from_poly(xr.poly_var(1)), slots, order, d_count=1)


def make_X0(order: int) -> JetField:
    """X_0 = d/du."""
    return make_field(xr.qp_exp(0, 1), [{} for _ in range(order)], order)


def make_Xf(f: Quasi, order: int) -> JetField:
    """X(f) = f d/du_1 + D(f) d/du_2 + ... + D^{j-1}(f) d/du_j + ...

    f must be a pure exponential sum (no jet variables); each slot is assembled
    from D^{j-1}(e^{a*u}) = e^{a*u} B_{j-1}(a*u_1, ...) per exponential part.
    """
    if not xr.qp_is_exponential_only(f):
        raise ValueError("X(f) needs f depending on u only (pure exponential sum)")
    terms = [(alpha, p[xr.MONO_ONE]) for alpha, p in f.items()]
    slots = []
    for j in range(1, order + 1):
        acc: Quasi = {}
        for alpha, c in terms:
            acc = xr.qp_add(acc, xr.qp_scale(d_power_exp(j - 1, alpha), c))
        slots.append(acc)
    return make_field({}, slots, order)


# ---------------------------------------------------------------------------
# applying a field and the exact total derivative
# ---------------------------------------------------------------------------

def apply_field(X: JetField, g: Quasi) -> Quasi:
    """X(g) = u_slot * dg/du + sum_k slot_k * dg/du_k, exact.

    Raises TruncationError when g depends on a jet variable beyond X's valid
    order (the contribution of the unknown slot would be missing).
    """
    top = xr.qp_max_index(g)
    if top > X.valid_order:
        raise TruncationError(
            f"applying a field of valid order {X.valid_order} to a value using u_{top}")
    out = xr.qp_mul(X.u_slot, xr.qp_derive_u(g)) if X.u_slot else {}
    for k in range(1, top + 1):
        dk = xr.qp_derive_uk(g, k)
        if dk:
            out = xr.qp_add(out, xr.qp_mul(X.slots[k - 1], dk))
    return out


def apply_total_derivative(g: Quasi) -> Quasi:
    """D(g), exact for any quasipolynomial (no truncation: D(u_k) = u_{k+1})."""
    out = xr.qp_mul(xr.qp_from_poly(xr.poly_var(1)), xr.qp_derive_u(g))
    for k in range(1, xr.qp_max_index(g) + 1):
        dk = xr.qp_derive_uk(g, k)
        if dk:
            out = xr.qp_add(out, xr.qp_mul(xr.qp_from_poly(xr.poly_var(k + 1)), dk))
    return out


# ---------------------------------------------------------------------------
# linear structure and the bracket
# ---------------------------------------------------------------------------

def field_add(X: JetField, Y: JetField) -> JetField:
    n = min(X.valid_order, Y.valid_order)
    return make_field(
        xr.qp_add(X.u_slot, Y.u_slot),
        [xr.qp_add(X.slots[j], Y.slots[j]) for j in range(n)],
        n,
        max(X.d_count, Y.d_count),
    )


def field_sub(X: JetField, Y: JetField) -> JetField:
    return field_add(X, field_scale(Y, -1))


def field_scale(X: JetField, c) -> JetField:
    return make_field(
        xr.qp_scale(X.u_slot, c),
        [xr.qp_scale(s, c) for s in X.slots],
        X.valid_order,
        X.d_count,
    )


def truncate(X: JetField, order: int) -> JetField:
    if order > X.valid_order:
        raise TruncationError(f"cannot extend valid order {X.valid_order} to {order}")
    return make_field(X.u_slot, list(X.slots[:order]), order, X.d_count)


def fields_equal(X: JetField, Y: JetField) -> bool:
    """Equality on the common valid range (and u slots)."""
    n = min(X.valid_order, Y.valid_order)
    return X.u_slot == Y.u_slot and all(X.slots[j] == Y.slots[j] for j in range(n))


def bracket(X: JetField, Y: JetField) -> JetField:
    """[X, Y], exact on every retained slot.

    Slot j of the result is X(Q_j^Y) - Y(Q_j^X); it is retained while both
    coefficient quasipolynomials stay within the other operand's valid order.
    For the triangular fields generated from X_0 and X(f) this keeps
    min(N_X, N_Y) slots; one bracket with D costs exactly one slot.
    """
    if xr.qp_max_index(X.u_slot) > Y.valid_order or xr.qp_max_index(Y.u_slot) > X.valid_order:
        raise TruncationError("u slots exceed the operands' valid orders")
    u_slot = xr.qp_sub(apply_field(X, Y.u_slot), apply_field(Y, X.u_slot))
    slots = []
    for j in range(1, min(X.valid_order, Y.valid_order) + 1):
        qx, qy = X.slots[j - 1], Y.slots[j - 1]
        if xr.qp_max_index(qy) > X.valid_order or xr.qp_max_index(qx) > Y.valid_order:
            break
        slots.append(xr.qp_sub(apply_field(X, qy), apply_field(Y, qx)))
    if not slots:
        raise TruncationError("bracket result would have valid order < 1")
    return make_field(u_slot, slots, len(slots), X.d_count + Y.d_count)


def is_zero_up_to(X: JetField) -> ZeroStatus:
    """Truncation-level zero test; full certification is the matrix oracle's job."""
    if X.u_slot:
        return ZeroStatus(False, witness_slot=0)
    for j in range(1, X.valid_order + 1):
        if X.slots[j - 1]:
            return ZeroStatus(False, witness_slot=j)
    return ZeroStatus(True, order=X.valid_order)


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bigrading:
    d: int  # natural/weight degree: slot j carries weight j - d
    r: int  # exponential degree: slots are multiples of e^{r*u}


def _slot_profile(q: Quasi, j: int) -> Optional[Bigrading]:
    """(d, r) implied by one nonzero slot, or None if inhomogeneous."""
    if len(q) != 1:
        return None
    (r, p), = q.items()
    w = xr.weight_of(p)
    if w is None:
        return None
    return Bigrading(j - w, r)


def bigrading_of(X: JetField) -> Optional[Bigrading]:
    """Homogeneity type: slot j = e^{r*u} * (weight j-d), u slot e^{r*u} * (weight -d)."""
    grading: Optional[Bigrading] = None
    for j in range(1, X.valid_order + 1):
        q = X.slots[j - 1]
        if not q:
            continue
        b = _slot_profile(q, j)
        if b is None or (grading is not None and b != grading):
            return None
        grading = b
    if X.u_slot:
        b = _slot_profile(X.u_slot, 0)  # weight of u slot must be -d
        if b is None or (grading is not None and b != grading):
            return None
        grading = b
    return grading


def eigencheck_adX0(X: JetField) -> Optional[int]:
    """lambda with [X_0, X] = lambda*X, if X is an ad-X_0 eigenvector.

    [X_0, .] differentiates every coefficient by u, i.e. multiplies the e^{a*u}
    part by a; X is an eigenvector iff a single exponential index occurs.
    """
    alphas = set()
    for q in (X.u_slot, *X.slots):
        alphas.update(q.keys())
    if not alphas:
        return None  # zero field: any eigenvalue
    if len(alphas) == 1:
        return alphas.pop()
    return None


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def field_to_dict(X: JetField) -> dict:
    return {
        "u_slot": xr.qp_to_text(X.u_slot),
        "slots": [xr.qp_to_text(s) for s in X.slots],
        "valid_order": X.valid_order,
    }


def field_to_json(X: JetField) -> str:
    return json.dumps(field_to_dict(X))


def field_from_dict(d: dict) -> JetField:
    slots = [xr.qp_parse(s) for s in d["slots"]]
    return make_field(xr.qp_parse(d["u_slot"]), slots, d["valid_order"])


def field_from_json(text: str) -> JetField:
    return field_from_dict(json.loads(text))
