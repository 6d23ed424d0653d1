"""Exchange-rate state and the 24 conditional arbitrage operators.

The market has four currencies (USD < EUR < GBP < JPY) and six principal
exchange rates; every other rate is a reciprocal.  States are kept in log
domain, either as six floats ("numeric") or as integer combinations of
declared generators over a balanced base ("lattice", exact).  All operators
are pure: they return new ensembles and never mutate.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

ACTIVATION_TOL = 1e-12
BALANCE_TOL_DEFAULT = 1e-9


class Currency(enum.IntEnum):
    USD = 0
    EUR = 1
    GBP = 2
    JPY = 3

    @property
    def symbol(self) -> str:
        return "$€£¥"[self.value]


#: the six principal ordered pairs, index 0..5 <-> ($€, $£, $¥, €£, €¥, £¥)
PAIRS: tuple[tuple[Currency, Currency], ...] = (
    (Currency.USD, Currency.EUR),
    (Currency.USD, Currency.GBP),
    (Currency.USD, Currency.JPY),
    (Currency.EUR, Currency.GBP),
    (Currency.EUR, Currency.JPY),
    (Currency.GBP, Currency.JPY),
)

_PAIR_INDEX = {pair: j for j, pair in enumerate(PAIRS)}

#: row vectors v1, v2, v3 with d_i = <v_i, log R>
DISCREPANCY_VECTORS: tuple[tuple[int, ...], ...] = (
    (1, -1, 0, 1, 0, 0),
    (1, 0, -1, 0, 1, 0),
    (0, 1, -1, 0, 0, 1),
)


def principal_index(frm: Currency, to: Currency) -> tuple[int, int]:
    """Map an ordered currency pair to (principal index, orientation sign)."""
    if frm == to:
        raise ValueError(f"degenerate pair {frm.name}/{to.name}")
    if (frm, to) in _PAIR_INDEX:
        return _PAIR_INDEX[(frm, to)], 1
    return _PAIR_INDEX[(to, frm)], -1


def _pair_vec(frm: Currency, to: Currency) -> tuple[int, ...]:
    j, s = principal_index(frm, to)
    v = [0] * 6
    v[j] = s
    return tuple(v)


def _add_vecs(*vecs: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(col) for col in zip(*vecs))


def _neg(vec: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in vec)


@dataclass(frozen=True)
class StrongOp:
    """Unconditional sub-market balancing operator (index 1..12).

    Sets log-rate ``target`` to ``<combo, l>``; ``gap = <combo, l> - l[target]``
    decides which of the two conditional members is active (positive ->
    ``member_pos``, negative -> ``member_neg``, zero -> neither, no-op).
    """

    index: int
    target: int
    combo: tuple[int, ...]
    gap: tuple[int, ...]
    member_pos: int
    member_neg: int
    via: Currency


@dataclass(frozen=True)
class ArbOp:
    """Conditional arbitrage operator A_{XYZ} (index 1..24)."""

    index: int
    trader: Currency
    quoted: Currency
    via: Currency
    pair: int
    strong: int
    condition: tuple[int, ...]  # active iff <condition, log R> > 0
    combo: tuple[int, ...]      # new l[pair] = <combo, log R>


def _build_operator_tables() -> tuple[tuple[ArbOp, ...], tuple[StrongOp, ...]]:
    arbs: list[ArbOp] = []
    for trader in Currency:
        for quoted in Currency:
            if quoted == trader:
                continue
            for via in Currency:
                if via in (trader, quoted):
                    continue
                pair, s_xy = principal_index(trader, quoted)
                indirect = _add_vecs(_pair_vec(trader, via), _pair_vec(via, quoted))
                direct = _pair_vec(trader, quoted)
                condition = _add_vecs(indirect, _neg(direct))
                combo = indirect if s_xy == 1 else _neg(indirect)
                arbs.append(
                    ArbOp(
                        index=len(arbs) + 1,
                        trader=trader,
                        quoted=quoted,
                        via=via,
                        pair=pair,
                        strong=0,  # patched below
                        condition=condition,
                        combo=combo,
                    )
                )

    # Strong operators: one per (principal pair, via currency), ordered by
    # (pair, via); each groups the two conditional members with opposite
    # activation signs and identical action.
    groups: dict[tuple[int, tuple[int, ...]], list[ArbOp]] = {}
    for op in arbs:
        groups.setdefault((op.pair, op.combo), []).append(op)
    strongs: list[StrongOp] = []
    for (pair, combo), members in sorted(
        groups.items(), key=lambda kv: (kv[0][0], kv[1][0].via.value)
    ):
        gap = list(combo)
        gap[pair] -= 1
        plus = [m for m in members if m.condition == tuple(gap)]
        minus = [m for m in members if m.condition == _neg(tuple(gap))]
        if len(plus) != 1 or len(minus) != 1:
            raise AssertionError("strong operator grouping broke")
        strongs.append(
            StrongOp(
                index=len(strongs) + 1,
                target=pair,
                combo=combo,
                gap=tuple(gap),
                member_pos=plus[0].index,
                member_neg=minus[0].index,
                via=plus[0].via,
            )
        )
    by_index = {s.member_pos: s.index for s in strongs}
    by_index.update({s.member_neg: s.index for s in strongs})
    arbs = [
        ArbOp(
            index=a.index,
            trader=a.trader,
            quoted=a.quoted,
            via=a.via,
            pair=a.pair,
            strong=by_index[a.index],
            condition=a.condition,
            combo=a.combo,
        )
        for a in arbs
    ]
    return tuple(arbs), tuple(strongs)


ARBITRAGES, STRONG_ARBITRAGES = _build_operator_tables()


def arbitrage(k: int) -> ArbOp:
    if not 1 <= k <= 24:
        raise ValueError(f"arbitrage index {k} outside 1..24")
    return ARBITRAGES[k - 1]


def strong_arbitrage(i: int) -> StrongOp:
    if not 1 <= i <= 12:
        raise ValueError(f"strong arbitrage index {i} outside 1..12")
    return STRONG_ARBITRAGES[i - 1]


@dataclass(frozen=True)
class GeneratorBasis:
    """Formal generators (logs of multiplicative steps) over a balanced base.

    ``base`` holds the three dollar log-rates of the balanced reference
    ensemble; the cross rates are forced by balance.  ``relation`` optionally
    declares the exact ratio values[1]/values[0] for two-generator bases,
    making sign tests exact.
    """

    names: tuple[str, ...]
    values: tuple[float, ...]
    base: tuple[float, float, float] = (0.0, 0.0, 0.0)
    relation: Fraction | None = None

    def __post_init__(self) -> None:
        if not self.names or len(self.names) != len(self.values):
            raise ValueError("generator names/values mismatch")
        if len(self.names) > 2:
            raise ValueError("at most two generators supported")
        if any(v == 0.0 for v in self.values):
            raise ValueError("generator values must be nonzero")
        if self.relation is not None and len(self.values) != 2:
            raise ValueError("relation declares values[1]/values[0]; needs two generators")

    @property
    def base6(self) -> tuple[float, ...]:
        b1, b2, b3 = self.base
        return (b1, b2, b3, b2 - b1, b3 - b1, b3 - b2)

    @classmethod
    def single(cls, alpha: float, base: tuple[float, float, float] = (0.0, 0.0, 0.0)) -> "GeneratorBasis":
        if alpha <= 0 or alpha == 1.0:
            raise ValueError("alpha must be positive and != 1")
        return cls(names=("a",), values=(math.log(alpha),), base=base)


@dataclass(frozen=True)
class RateEnsemble:
    """Six principal log-rates, numeric or exact-lattice."""

    log_rates: tuple[float, ...]
    basis: GeneratorBasis | None = None
    coeffs: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        if len(self.log_rates) != 6 or not all(math.isfinite(x) for x in self.log_rates):
            raise ValueError("need six finite log-rates")
        if (self.basis is None) != (self.coeffs is None):
            raise ValueError("lattice mode needs both basis and coeffs")
        if self.coeffs is not None:
            k = len(self.basis.values)  # type: ignore[union-attr]
            if len(self.coeffs) != 6 or any(len(row) != k for row in self.coeffs):
                raise ValueError("coeffs must be 6 x n_generators")

    @property
    def mode(self) -> str:
        return "numeric" if self.basis is None else "lattice"

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(math.exp(x) for x in self.log_rates)

    @classmethod
    def from_rates(cls, rates: Sequence[float]) -> "RateEnsemble":
        if len(rates) != 6 or any(r <= 0 for r in rates):
            raise ValueError("need six positive rates")
        return cls(log_rates=tuple(math.log(r) for r in rates))

    @classmethod
    def from_log_rates(cls, log_rates: Sequence[float]) -> "RateEnsemble":
        return cls(log_rates=tuple(float(x) for x in log_rates))

    @classmethod
    def lattice(cls, basis: GeneratorBasis, coeffs: Sequence[Sequence[int]]) -> "RateEnsemble":
        rows = tuple(tuple(int(c) for c in row) for row in coeffs)
        logs = tuple(
            b + sum(c * g for c, g in zip(row, basis.values))
            for b, row in zip(basis.base6, rows)
        )
        return cls(log_rates=logs, basis=basis, coeffs=rows)

    @classmethod
    def balanced(cls, basis: GeneratorBasis) -> "RateEnsemble":
        k = len(basis.values)
        return cls.lattice(basis, tuple((0,) * k for _ in range(6)))


def make_perturbed(basis: GeneratorBasis, which: int) -> RateEnsemble:
    """Balanced base with one extra generator step on principal rate `which` (1..6)."""
    if not 1 <= which <= 6:
        raise ValueError(f"component {which} outside 1..6")
    if len(basis.values) != 1:
        raise ValueError("single-generator basis required")
    coeffs = [[0] for _ in range(6)]
    coeffs[which - 1][0] = 1
    return RateEnsemble.lattice(basis, coeffs)


def reciprocal_rate(ensemble: RateEnsemble, frm: Currency, to: Currency) -> float:
    """Linear-domain rate for any ordered pair, reciprocals derived."""
    j, s = principal_index(frm, to)
    return math.exp(s * ensemble.log_rates[j])


def _coeff_combo(ensemble: RateEnsemble, vec: Sequence[int]) -> tuple[int, ...]:
    rows = ensemble.coeffs
    k = len(rows[0]) if rows else 0
    return tuple(sum(vec[j] * rows[j][g] for j in range(6)) for g in range(k))


def _lattice_sign(ensemble: RateEnsemble, vec: Sequence[int]) -> int:
    """Exact-ish sign of <vec, log R> in lattice mode (base part cancels only
    for balance-invariant vecs; callers pass discrepancy/gap combinations,
    whose base contribution is exactly zero for a balanced base)."""
    basis = ensemble.basis
    combo = _coeff_combo(ensemble, vec)
    if all(c == 0 for c in combo):
        return 0
    if len(combo) == 1:
        return (1 if combo[0] > 0 else -1) * (1 if basis.values[0] > 0 else -1)
    if basis.relation is not None:
        # value = (c0 + c1 * relation) * g0, exact over Fraction
        total = combo[0] + combo[1] * basis.relation
        if total == 0:
            return 0
        return (1 if total > 0 else -1) * (1 if basis.values[0] > 0 else -1)
    value = sum(c * g for c, g in zip(combo, basis.values))
    if abs(value) <= ACTIVATION_TOL:
        return 0
    return 1 if value > 0 else -1


def _gap_sign(ensemble: RateEnsemble, vec: Sequence[int]) -> int:
    if ensemble.mode == "lattice":
        return _lattice_sign(ensemble, vec)
    value = sum(v * x for v, x in zip(vec, ensemble.log_rates))
    if value > ACTIVATION_TOL:
        return 1
    if value < -ACTIVATION_TOL:
        return -1
    return 0


def activation(ensemble: RateEnsemble, k: int) -> bool:
    """True iff the indirect route of arbitrage k strictly beats the direct rate."""
    return _gap_sign(ensemble, arbitrage(k).condition) > 0


def active_flags(ensemble: RateEnsemble) -> tuple[bool, ...]:
    return tuple(activation(ensemble, k) for k in range(1, 25))


def _set_rate(ensemble: RateEnsemble, target: int, combo: Sequence[int]) -> RateEnsemble:
    if ensemble.mode == "lattice":
        rows = list(ensemble.coeffs)
        rows[target] = _coeff_combo(ensemble, combo)
        return RateEnsemble.lattice(ensemble.basis, rows)
    logs = list(ensemble.log_rates)
    logs[target] = sum(v * x for v, x in zip(combo, ensemble.log_rates))
    return RateEnsemble.from_log_rates(logs)


def apply_arbitrage(ensemble: RateEnsemble, k: int) -> RateEnsemble:
    """Apply arbitrage k; inactive arbitrages are a legal no-op."""
    op = arbitrage(k)
    if not activation(ensemble, k):
        return ensemble
    return _set_rate(ensemble, op.pair, op.combo)


def apply_strong(ensemble: RateEnsemble, i: int) -> RateEnsemble:
    """Unconditionally set the affected rate to the indirect value."""
    op = strong_arbitrage(i)
    return _set_rate(ensemble, op.target, op.combo)


def strong_active_member(ensemble: RateEnsemble, i: int) -> int | None:
    """Which member of strong arbitrage i fires at this state, if any."""
    op = strong_arbitrage(i)
    sign = _gap_sign(ensemble, op.gap)
    if sign > 0:
        return op.member_pos
    if sign < 0:
        return op.member_neg
    return None


@dataclass(frozen=True)
class DiscrepancyTriple:
    """(d_euro_gbp, d_euro_jpy, d_gbp_jpy): log-domain cross-rate violations."""

    values: tuple[float, float, float]
    coeffs: tuple[tuple[int, ...], ...] | None = None

    def __iter__(self):
        return iter(self.values)

    def is_zero(self, tol: float = BALANCE_TOL_DEFAULT) -> bool:
        if self.coeffs is not None:
            return all(all(c == 0 for c in row) for row in self.coeffs)
        return all(abs(v) <= tol for v in self.values)


def discrepancies(ensemble: RateEnsemble) -> DiscrepancyTriple:
    values = tuple(
        sum(v * x for v, x in zip(vec, ensemble.log_rates))
        for vec in DISCREPANCY_VECTORS
    )
    coeffs = None
    if ensemble.mode == "lattice":
        coeffs = tuple(_coeff_combo(ensemble, vec) for vec in DISCREPANCY_VECTORS)
    return DiscrepancyTriple(values=values, coeffs=coeffs)


def is_balanced(ensemble: RateEnsemble, tol: float = BALANCE_TOL_DEFAULT) -> bool:
    """Cross-rate law of one price; exact coefficient test in lattice mode."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return discrepancies(ensemble).is_zero(tol)


@dataclass(frozen=True)
class Chain:
    """Finite word over the 24 arbitrages; ``period`` marks a repeating block."""

    items: tuple[int, ...]
    period: int | None = None

    def __post_init__(self) -> None:
        if any(not 1 <= k <= 24 for k in self.items):
            raise ValueError("chain items must be arbitrage indices 1..24")
        if self.period is not None and self.period != len(self.items):
            raise ValueError("period must equal the stored block length")

    def __len__(self) -> int:
        return len(self.items)

    def at(self, n: int) -> int:
        """n-th arbitrage (0-based), unrolling periodic chains."""
        if self.period is not None:
            return self.items[n % self.period]
        return self.items[n]


def apply_chain(ensemble: RateEnsemble, chain: Chain, steps: int | None = None) -> list[RateEnsemble]:
    """Trajectory [R0, R1, ..., R_steps]; left-most arbitrage applies first."""
    if steps is None:
        if chain.period is not None:
            raise ValueError("periodic chains need an explicit step count")
        steps = len(chain.items)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if chain.period is None and steps > len(chain.items):
        raise ValueError("steps exceeds chain length")
    out = [ensemble]
    for n in range(steps):
        out.append(apply_arbitrage(out[-1], chain.at(n)))
    return out


def balance_three(r_de: float, r_dp: float, r_ep: float, first_mover: Currency) -> tuple[float, float, float]:
    """Three-currency warm-up: the first-informed trader adjusts one rate.

    Inputs are the dollar/euro, dollar/sterling and euro/sterling rates; the
    returned triple satisfies r_ep == r_dp / r_de exactly in log domain.
    """
    if r_de <= 0 or r_dp <= 0 or r_ep <= 0:
        raise ValueError("rates must be positive")
    if first_mover == Currency.USD:
        return (r_dp / r_ep, r_dp, r_ep)
    if first_mover == Currency.EUR:
        return (r_de, r_dp, r_dp / r_de)
    if first_mover == Currency.GBP:
        return (r_de, r_de * r_ep, r_ep)
    raise ValueError("first mover must be one of USD, EUR, GBP")


# ---------------------------------------------------------------------------
# JSON serialization (schemas shared with the CLI and the console service)

def ensemble_to_dict(ensemble: RateEnsemble) -> dict:
    doc: dict = {
        "mode": ensemble.mode,
        "log_rates": list(ensemble.log_rates),
    }
    if ensemble.mode == "lattice":
        basis = ensemble.basis
        doc["base"] = list(basis.base)
        doc["generators"] = [
            {"name": n, "value": v} for n, v in zip(basis.names, basis.values)
        ]
        doc["coeffs"] = [list(row) for row in ensemble.coeffs]
    else:
        doc["base"] = []
        doc["generators"] = []
        doc["coeffs"] = []
    return doc


def ensemble_from_dict(doc: dict) -> RateEnsemble:
    mode = doc.get("mode")
    if mode == "numeric":
        return RateEnsemble.from_log_rates(doc["log_rates"])
    if mode == "lattice":
        gens = doc["generators"]
        basis = GeneratorBasis(
            names=tuple(g["name"] for g in gens),
            values=tuple(float(g["value"]) for g in gens),
            base=tuple(float(b) for b in doc["base"]),
        )
        return RateEnsemble.lattice(basis, doc["coeffs"])
    raise ValueError(f"unknown ensemble mode {mode!r}")


def ensemble_to_json(ensemble: RateEnsemble) -> str:
    return json.dumps(ensemble_to_dict(ensemble))


def ensemble_from_json(text: str) -> RateEnsemble:
    return ensemble_from_dict(json.loads(text))


def chain_to_dict(chain: Chain) -> dict:
    return {"chain": list(chain.items), "period": chain.period}


def chain_from_dict(doc: dict) -> Chain:
    return Chain(items=tuple(int(k) for k in doc["chain"]), period=doc.get("period"))


def chain_to_json(chain: Chain) -> str:
    return json.dumps(chain_to_dict(chain))


def chain_from_json(text: str) -> Chain:
    return chain_from_dict(json.loads(text))
