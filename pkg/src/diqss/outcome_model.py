"""Exact model of the tripartite GHZ measurement.

Tensor order is Alice (x) Bob (x) Charlie with |H> = |0>, |V> = |1>.
Measurement outcomes use +1 / -1 for the two sigma_x eigenstates and
``NO_CLICK`` (0) for a lost photon; as bits, +1 -> 0 and -1 -> 1.

Besides the forward model this module holds the brute-force enumeration
oracles that the closed forms in :mod:`diqss.rates` are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .rates import _check_flip, _check_unit

PLUS = 1
MINUS = -1
NO_CLICK = 0
THREE_VALUED = "three_valued"
BINARY = "binary"

MAX_ORACLE_BLOCK = 4

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_IDENTITY2 = np.eye(2, dtype=complex)

#: Observables exactly as listed for the protocol, indexed 1..n per party.
ALICE_OBSERVABLES = {1: _SIGMA_X, 2: _SIGMA_Y}
BOB_OBSERVABLES = {
    1: _SIGMA_X,
    2: (_SIGMA_X - _SIGMA_Y) / np.sqrt(2),
    3: (_SIGMA_X + _SIGMA_Y) / np.sqrt(2),
}
CHARLIE_OBSERVABLES = {1: _SIGMA_X, 2: -_SIGMA_Y}

# With the listed observables the eight-term Svetlichny combination
# vanishes on |phi_1>.  Relabelling the outcomes of A2 and B2 (a sign flip,
# harmless in a device-independent setting) makes it reach 4*sqrt(2).
SVETLICHNY_RELABEL = {("alice", 2): -1, ("bob", 2): -1}

#: (sign, (a, b, c)) terms of the Svetlichny polynomial.
SVETLICHNY_TERMS = (
    (+1, (1, 2, 2)),
    (+1, (1, 3, 1)),
    (+1, (2, 2, 1)),
    (-1, (2, 3, 2)),
    (+1, (2, 3, 1)),
    (+1, (2, 2, 2)),
    (+1, (1, 3, 2)),
    (-1, (1, 2, 1)),
)

# ket index = 4a + 2b + c, H=0, V=1
_GHZ_PAIRS = {
    1: ((0, 0, 0), (1, 1, 1), +1),
    2: ((0, 0, 0), (1, 1, 1), -1),
    3: ((1, 0, 0), (0, 1, 1), +1),
    4: ((1, 0, 0), (0, 1, 1), -1),
    5: ((0, 1, 0), (1, 0, 1), +1),
    6: ((0, 1, 0), (1, 0, 1), -1),
    7: ((0, 0, 1), (1, 1, 0), +1),
    8: ((0, 0, 1), (1, 1, 0), -1),
}


def _ket_index(bits) -> int:
    a, b, c = bits
    return 4 * a + 2 * b + c


def ghz_basis_state(i: int) -> np.ndarray:
    """Normalised GHZ basis vector |phi_i>, i = 1..8, in the H/V basis."""
    if i not in _GHZ_PAIRS:
        raise DomainError(f"GHZ basis index must be 1..8, got {i}")
    first, second, sign = _GHZ_PAIRS[i]
    v = np.zeros(8, dtype=complex)
    v[_ket_index(first)] = 1 / np.sqrt(2)
    v[_ket_index(second)] = sign / np.sqrt(2)
    return v


def noisy_state(fidelity: float) -> np.ndarray:
    """All-click conditional state F |phi_1><phi_1| + (1-F)/8 I."""
    f = _check_unit("fidelity", fidelity)
    phi = ghz_basis_state(1)
    return f * np.outer(phi, phi.conj()) + (1 - f) / 8 * np.eye(8, dtype=complex)


def check_density_matrix(rho: np.ndarray, tol: float = 1e-12) -> None:
    """Raise DomainError unless rho is an 8x8 Hermitian, unit-trace PSD matrix."""
    rho = np.asarray(rho)
    if rho.shape != (8, 8):
        raise DomainError(f"expected an 8x8 matrix, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        raise DomainError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise DomainError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise DomainError("density matrix is not positive semidefinite")


def _x_basis_ket(bits) -> np.ndarray:
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    ket = np.array([1], dtype=complex)
    for b in bits:
        ket = np.kron(ket, minus if b else plus)
    return ket


def click_outcome_probs(fidelity: float) -> np.ndarray:
    """P(a, b, c | all parties click) for sigma_x measurements.

    Returned as a length-8 array indexed by 4a + 2b + c with bits a, b, c.
    """
    rho = noisy_state(fidelity)
    out = np.empty(8)
    for bits in itertools.product((0, 1), repeat=3):
        ket = _x_basis_ket(bits)
        out[_ket_index(bits)] = float(np.real(ket.conj() @ rho @ ket))
    return out


def outcome_to_bit(value: int) -> int:
    if value == PLUS:
        return 0
    if value == MINUS:
        return 1
    raise DomainError(f"no bit for outcome {value!r}")


THREE_VALUED_CELLS: tuple[tuple[int, int, int], ...] = tuple(
    itertools.product((PLUS, MINUS, NO_CLICK), repeat=3)
)
BINARY_CELLS: tuple[tuple[int, int, int], ...] = tuple(itertools.product((0, 1), repeat=3))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Joint outcome probabilities of one round.

    ``three_valued`` keys are triples over {+1, -1, NO_CLICK}; ``binary`` keys
    are bit triples.
    """

    mode: str
    probs: dict[tuple[int, int, int], float]

    def total(self) -> float:
        return float(sum(self.probs.values()))

    def cells(self) -> tuple[tuple[int, int, int], ...]:
        return THREE_VALUED_CELLS if self.mode == THREE_VALUED else BINARY_CELLS

    def as_array(self) -> np.ndarray:
        return np.array([self.probs[k] for k in self.cells()])


def outcome_distribution(fidelity: float, eta: float) -> OutcomeDistribution:
    """27-cell distribution under independent photon loss.

    Each party clicks with probability eta.  When all click the outcomes
    follow :func:`click_outcome_probs`; when some photons are lost the
    remaining parties see uniform, independent sigma_x outcomes.
    """
    e = _check_unit("eta", eta)
    clicked = click_outcome_probs(fidelity)
    probs = {}
    for cell in THREE_VALUED_CELLS:
        n_click = sum(v != NO_CLICK for v in cell)
        p_pattern = e**n_click * (1 - e) ** (3 - n_click)
        if n_click == 3:
            p = p_pattern * clicked[_ket_index([outcome_to_bit(v) for v in cell])]
        else:
            p = p_pattern * 0.5**n_click
        probs[cell] = float(p)
    return OutcomeDistribution(THREE_VALUED, probs)


def apply_post_selection(dist: OutcomeDistribution) -> OutcomeDistribution:
    """Remap every no-click to +1 and aggregate into 8 bit-triple cells."""
    if dist.mode != THREE_VALUED:
        raise DomainError("post-selection needs a three-valued distribution")
    probs = {cell: 0.0 for cell in BINARY_CELLS}
    for cell, p in dist.probs.items():
        mapped = tuple(outcome_to_bit(PLUS if v == NO_CLICK else v) for v in cell)
        probs[mapped] += p
    return OutcomeDistribution(BINARY, probs)


def _round_table(dist: OutcomeDistribution, q: float):
    """Per-round (prob, valid, parity) arrays, with Alice's flip folded in."""
    cells = dist.cells()
    prob = dist.as_array()
    if dist.mode == THREE_VALUED:
        valid = np.array([NO_CLICK not in c for c in cells])
        parity = np.array(
            [sum(outcome_to_bit(v) for v in c) % 2 if NO_CLICK not in c else 0 for c in cells]
        )
    else:
        valid = np.ones(len(cells), dtype=bool)
        parity = np.array([sum(c) % 2 for c in cells])
    if q > 0:
        prob = np.concatenate([prob * (1 - q), prob * q])
        valid = np.concatenate([valid, valid])
        parity = np.concatenate([parity, parity ^ 1])
    return prob, valid, parity


def oracle_qber(dist: OutcomeDistribution, q: float = 0.0, discard_noclick: bool = False) -> float:
    """Exact per-round error probability by direct summation.

    On three-valued input a no-click counts as an error unless
    ``discard_noclick`` is set, in which case the result is conditional on
    all three parties clicking (NaN if that never happens).
    """
    q = _check_flip(q)
    if discard_noclick and dist.mode != THREE_VALUED:
        raise DomainError("discard_noclick needs a three-valued distribution")
    prob, valid, parity = _round_table(dist, q)
    if discard_noclick:
        kept = prob[valid].sum()
        if kept == 0:
            return float("nan")
        return float((prob * valid * parity).sum() / kept)
    return float((prob * (~valid | (parity == 1))).sum())


def oracle_ad(
    dist: OutcomeDistribution, q: float = 0.0, n: int = 2, discard_noclick: bool = True
) -> tuple[float, float]:
    """Exact block retention and post-AD QBER by enumerating every n-round block.

    A block is kept when all its round parities (after Alice's optional
    flips) are equal; on three-valued input blocks with a no-click are
    dropped.  Returns ``(retention, qber)``; qber is NaN when nothing is kept.
    """
    q = _check_flip(q)
    if not 1 <= n <= MAX_ORACLE_BLOCK:
        raise DomainError(f"enumeration supports 1 <= n <= {MAX_ORACLE_BLOCK}, got {n}")
    if dist.mode == THREE_VALUED and not discard_noclick:
        raise DomainError("three-valued input requires discard_noclick=True")
    if dist.mode == BINARY and discard_noclick:
        raise DomainError("binary input has no no-click events to discard")
    prob, valid, parity = _round_table(dist, q)
    k = len(prob)

    def axis(arr, i):
        shape = [1] * n
        shape[i] = k
        return arr.reshape(shape)

    p_block = np.ones([1] * n)
    all_valid = np.ones([1] * n, dtype=bool)
    for i in range(n):
        p_block = p_block * axis(prob, i)
        all_valid = all_valid & axis(valid, i)
    first = axis(parity, 0)
    agree = np.ones([1] * n, dtype=bool)
    for i in range(1, n):
        agree = agree & (axis(parity, i) == first)
    keep = all_valid & agree
    retention = float((p_block * keep).sum())
    if retention == 0:
        return 0.0, float("nan")
    wrong = float((p_block * (keep & (first == 1))).sum())
    return retention, wrong / retention


@dataclass(frozen=True)
class MeasurementSetting:
    """Basis choice (1-based indices) for Alice, Bob and Charlie.

    With ``relabeled`` the Svetlichny outcome relabelling of A2 and B2 is
    applied; otherwise the observables are used exactly as listed.
    """

    alice: int
    bob: int
    charlie: int
    relabeled: bool = False

    def observables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        try:
            ops = [
                ALICE_OBSERVABLES[self.alice],
                BOB_OBSERVABLES[self.bob],
                CHARLIE_OBSERVABLES[self.charlie],
            ]
        except KeyError as exc:
            raise DomainError(f"no such basis index in {self}") from exc
        if self.relabeled:
            for j, (party, idx) in enumerate(
                (("alice", self.alice), ("bob", self.bob), ("charlie", self.charlie))
            ):
                ops[j] = SVETLICHNY_RELABEL.get((party, idx), 1) * ops[j]
        return ops[0], ops[1], ops[2]


def _check_involution(op: np.ndarray) -> None:
    if op.shape != (2, 2) or not np.allclose(op, op.conj().T, atol=1e-12):
        raise DomainError("observable must be a 2x2 Hermitian matrix")
    if not np.allclose(op @ op, _IDENTITY2, atol=1e-12):
        raise DomainError("observable must square to the identity")


def correlator(
    rho: np.ndarray,
    setting: Union[MeasurementSetting, tuple[np.ndarray, np.ndarray, np.ndarray]],
) -> float:
    """Three-party correlator tr(rho A (x) B (x) C)."""
    ops = setting.observables() if isinstance(setting, MeasurementSetting) else setting
    for op in ops:
        _check_involution(np.asarray(op))
    joint = np.kron(np.kron(ops[0], ops[1]), ops[2])
    return float(np.real(np.trace(np.asarray(rho) @ joint)))


def svetlichny_polynomial(fidelity: float) -> float:
    """Svetlichny value of the noisy GHZ state at unit detection efficiency."""
    rho = noisy_state(fidelity)
    return sum(
        sign * correlator(rho, MeasurementSetting(*abc, relabeled=True))
        for sign, abc in SVETLICHNY_TERMS
    )
