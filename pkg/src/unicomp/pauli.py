"""Generalized Pauli operators and Clifford recognition.

Index convention: basis kets ``|t>, t = 1..d`` map to array index ``t - 1``.
``X = sum_t |t-1><t|`` is then the cyclic shift ``X|j> = |j-1 mod d>`` and
``Z = sum_t exp(2 pi i t / d) |t><t|`` is ``diag(w, w^2, ..., w^d)`` with
``w = exp(2 pi i / d)``. With these conventions ``XZ = w ZX`` and

    sigma_pq sigma_rs = w^{-q r} sigma_{p+r, q+s}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .linalg import LabeledOperator, SubsystemLayout, TOL

MATCH_TOL = 1e-8


@dataclass(frozen=True, order=True)
class PauliLabel:
    p: int
    q: int
    d: int = field(default=2, compare=False)

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"dimension must be at least 2, got {self.d}")
        if not (0 <= self.p < self.d and 0 <= self.q < self.d):
            raise ValueError(f"Pauli exponents ({self.p}, {self.q}) out of range for d={self.d}")

    @property
    def is_identity(self) -> bool:
        return self.p == 0 and self.q == 0

    def matrix(self) -> np.ndarray:
        return pauli_matrix(self.p, self.q, self.d)

    def __str__(self):
        return f"s{self.p}{self.q}"


@lru_cache(maxsize=None)
def shift_matrix(d: int) -> np.ndarray:
    x = np.zeros((d, d), dtype=complex)
    for j in range(d):
        x[(j - 1) % d, j] = 1.0
    x.flags.writeable = False
    return x


@lru_cache(maxsize=None)
def clock_matrix(d: int) -> np.ndarray:
    w = np.exp(2j * np.pi / d)
    z = np.diag([w ** (j + 1) for j in range(d)])
    z.flags.writeable = False
    return z


@lru_cache(maxsize=None)
def pauli_matrix(p: int, q: int, d: int) -> np.ndarray:
    """``X^p Z^q`` as a plain array."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    if not (0 <= p < d and 0 <= q < d):
        raise ValueError(f"Pauli exponents ({p}, {q}) out of range for d={d}")
    m = np.linalg.matrix_power(shift_matrix(d), p) @ np.linalg.matrix_power(clock_matrix(d), q)
    m.flags.writeable = False
    return m


def pauli(p: int, q: int, d: int, label: str = "A") -> LabeledOperator:
    return LabeledOperator(SubsystemLayout.of((label, d)), pauli_matrix(p, q, d), kind="unitary", check=False)


def all_labels(d: int) -> list[PauliLabel]:
    return [PauliLabel(p, q, d) for p in range(d) for q in range(d)]


def pauli_string(labels, registers) -> LabeledOperator:
    """Tensor product of single-qudit Paulis on the named registers."""
    labels = list(labels)
    registers = list(registers)
    if len(labels) != len(registers):
        raise ValueError("one label per register")
    mat = np.ones((1, 1), dtype=complex)
    for lab in labels:
        mat = np.kron(mat, lab.matrix())
    layout = SubsystemLayout(tuple((reg, lab.d) for reg, lab in zip(registers, labels)))
    return LabeledOperator(layout, mat, kind="unitary", check=False)


def multiply_labels(a: tuple[int, int], b: tuple[int, int], d: int) -> tuple[complex, tuple[int, int]]:
    """``sigma_a sigma_b = phase * sigma_c``."""
    w = np.exp(2j * np.pi / d)
    phase = w ** (-(a[1] * b[0]) % d)
    return phase, ((a[0] + b[0]) % d, (a[1] + b[1]) % d)


@lru_cache(maxsize=None)
def _product_basis(d: int) -> tuple[tuple[tuple[int, int, int, int], ...], np.ndarray]:
    keys = tuple(product(range(d), repeat=4))
    rows = np.stack([np.kron(pauli_matrix(p, q, d), pauli_matrix(r, s, d)).ravel() for p, q, r, s in keys])
    rows.flags.writeable = False
    return keys, rows


def match_product_pauli(mat: np.ndarray, d: int):
    """Best product-Pauli match of ``mat`` up to a phase.

    Returns ``(key, phase, score)`` where ``score = |Tr[P^dagger mat]| / d^2``.
    """
    keys, rows = _product_basis(d)
    coeffs = rows.conj() @ mat.ravel() / d**2
    best = int(np.argmax(np.abs(coeffs)))
    score = float(abs(coeffs[best]))
    phase = coeffs[best] / score if score > 0 else 1.0
    return keys[best], complex(phase), score


GENERATORS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


@dataclass(frozen=True)
class CliffordTable:
    """Conjugation map ``U (s_pq (x) s_rs) U^dagger = phase * (s_p'q' (x) s_r's')``."""

    d: int
    entries: dict = field(repr=False)

    def image(self, key):
        return self.entries[tuple(key)]

    def generator_rows(self) -> list[dict]:
        rows = []
        for key in GENERATORS:
            img = self.entries[key]
            rows.append({
                "in": list(key),
                "out": list(img[:4]),
                # phases are roots of unity; rounding strips 1e-16 noise from the printout
                "phase": [round(float(np.real(img[4])), 12) + 0.0, round(float(np.imag(img[4])), 12) + 0.0],
            })
        return rows

    def preimage(self, key) -> tuple[tuple[int, int, int, int], complex]:
        """Label mapped onto ``key`` and the phase picked up going forward."""
        inv = self._inverse()
        try:
            return inv[tuple(key)]
        except KeyError:
            raise ValueError(f"Clifford table has no preimage for {tuple(key)}") from None

    def _inverse(self):
        inv = self.__dict__.get("_inv")
        if inv is None:
            inv = {tuple(v[:4]): (k, v[4]) for k, v in self.entries.items()}
            object.__setattr__(self, "_inv", inv)
        return inv

    def is_bijection(self) -> bool:
        images = {tuple(v[:4]) for v in self.entries.values()}
        return len(self.entries) == self.d**4 and len(images) == self.d**4


def _compose(a, b, d):
    """Product of two phased two-qudit Paulis ``(phase, (p, q, r, s))``."""
    ph_a, (pa, qa, ra, sa) = a
    ph_b, (pb, qb, rb, sb) = b
    ph1, (p, q) = multiply_labels((pa, qa), (pb, qb), d)
    ph2, (r, s) = multiply_labels((ra, sa), (rb, sb), d)
    return ph_a * ph_b * ph1 * ph2, (p, q, r, s)


def is_clifford(U: LabeledOperator, tol: float = MATCH_TOL):
    """Decide whether ``U`` maps product Paulis to product Paulis up to phase.

    Returns ``(verdict, table)``; ``table`` is ``None`` when the verdict is false.
    The generator images are found by exhaustive matching; the rest of the
    table follows by multiplying generator images.
    """
    if len(U.layout) != 2 or U.layout.dims[0] != U.layout.dims[1]:
        raise ValueError("is_clifford expects a unitary on two equal-dimension registers")
    d = U.layout.dims[0]
    if d > 5:
        raise ValueError("is_clifford is limited to d <= 5")
    u = U.matrix
    gens = {}
    for key in GENERATORS:
        g = np.kron(pauli_matrix(key[0], key[1], d), pauli_matrix(key[2], key[3], d))
        found, phase, score = match_product_pauli(u @ g @ u.conj().T, d)
        if score < 1 - tol:
            return False, None
        gens[key] = (phase, found)

    entries = {}
    for p, q, r, s in product(range(d), repeat=4):
        acc = (1.0 + 0j, (0, 0, 0, 0))
        for key, power in zip(GENERATORS, (p, q, r, s)):
            for _ in range(power):
                acc = _compose(acc, gens[key], d)
        phase, img = acc
        entries[(p, q, r, s)] = (*img, complex(phase))
    return True, CliffordTable(d=d, entries=entries)


def conjugation_error(U: LabeledOperator, table: CliffordTable) -> float:
    """Max-entry error of the table's conjugation identity over all entries."""
    d = table.d
    u = U.matrix
    worst = 0.0
    for (p, q, r, s), (p2, q2, r2, s2, ph) in table.entries.items():
        lhs = u @ np.kron(pauli_matrix(p, q, d), pauli_matrix(r, s, d)) @ u.conj().T
        rhs = ph * np.kron(pauli_matrix(p2, q2, d), pauli_matrix(r2, s2, d))
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def pauli_transpose_phase(p: int, q: int, d: int) -> tuple[int, int, complex]:
    """Find ``(p'', q'', phase)`` with ``sigma_pq^T = phase * sigma_p''q''``.

    Matched numerically against all ``d^2`` Paulis; the identity
    ``sigma_pq^T = w^{pq} sigma_{-p, q}`` holds under this module's convention.
    """
    target = pauli_matrix(p, q, d).T
    for lab in all_labels(d):
        cand = lab.matrix()
        ov = np.vdot(cand, target) / d
        if abs(abs(ov) - 1) < TOL:
            phase = ov / abs(ov)
            if np.abs(target - phase * cand).max() < TOL:
                return lab.p, lab.q, complex(phase)
    raise AssertionError(f"transpose of sigma_{p}{q} is not a Pauli")  # unreachable for valid labels


def translate_reference_pauli(table: CliffordTable, p: int, q: int) -> PauliLabel:
    """A-side Pauli equivalent to ``sigma_pq`` on ``R_B`` for the state ``Psi(U^dagger)``.

    ``sigma_pq^{R_B} |Phi>^{B R_B} = phase * sigma_p''q''^B |Phi>^{B R_B}``, and
    ``U^dagger (I (x) sigma_p''q'') U`` is a product Pauli read off the inverse
    table. Its A factor is the returned label; the B factor drops out of the
    ``A R_A R_B`` marginal.
    """
    d = table.d
    pt, qt, _ = pauli_transpose_phase(p, q, d)
    (pa, qa, _, _), _ = table.preimage((0, 0, pt, qt))
    return PauliLabel(pa, qa, d)
