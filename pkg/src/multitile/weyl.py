"""Lattice refinement for two-coset families and the Weyl equidistribution search.

For two translates of one rational-basis lattice, the offset difference is
decomposed in lattice coordinates over the declared irrational generators; the
least common multiple N of all expansion-coefficient denominators gives the
candidate lattice t1 + (1/N) L0, which is then certified directly rather than
through the existence proof.  The odd-multiple search and the exponential-sum
statistic exhibit the equidistribution argument behind the irrational case.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldClosureViolation, InputError
from .lattice import Coset, Lattice, QuasiPeriodicSet, refine_lattice
from .linalg import Vec, as_vec
from .polytope import Polytope, ProbeDirection
from .scalar import Scalar, to_scalar
from .verifier import verify_constant_multiplicity


@dataclass
class OffsetDecomposition:
    """Lattice coordinates of the offset difference, with generator expansions.

    coordinates[i] is an exact scalar; terms[i] is its (rational constant,
    {generator key: rational coefficient}) expansion read off the scalar
    representation.  Reconstruction is exact by construction.
    """

    coordinates: Vec
    terms: tuple
    generators: tuple

    @property
    def irrational_rank(self) -> int:
        return len(self.generators)


@dataclass
class RefinementResult:
    n: int
    candidate: Coset
    verification: object  # TilingCertificate | Discrepancy
    decomposition: OffsetDecomposition


def decompose_offset(lattice: Lattice, t1, t2) -> OffsetDecomposition:
    """Expand the lattice coordinates of t2 - t1 over the declared generators."""
    if not lattice.is_rational:
        raise FieldClosureViolation(
            "offset decomposition requires a rational lattice basis"
        )
    t1, t2 = as_vec(t1), as_vec(t2)
    diff = tuple(a - b for a, b in zip(t2, t1))
    coords = lattice.coords(diff)
    terms = []
    gens = []
    for c in coords:
        expansion = {g.key(): coeff for g, coeff in c.coeffs.items()}
        terms.append((c.rat, expansion))
        for g in c.coeffs:
            if g not in gens:
                gens.append(g)
    gens.sort(key=lambda g: g.sort_key())
    return OffsetDecomposition(coords, tuple(terms), tuple(gens))


def denominator_lcm(dec: OffsetDecomposition) -> int:
    """lcm of the denominators of every rational coefficient in the expansion."""
    n = 1
    for const, expansion in dec.terms:
        n = n * const.denominator // math.gcd(n, const.denominator)
        for coeff in expansion.values():
            n = n * coeff.denominator // math.gcd(n, coeff.denominator)
    return n


def theorem_1_4_pipeline(polytope: Polytope, probe: ProbeDirection | None,
                         lattice: Lattice, t1, t2, weights=(1, 1),
                         mode=None) -> RefinementResult:
    """Refine the two-coset lattice by the denominator lcm and certify it.

    The candidate is t1 + (1/N) L0; its verification outcome is returned
    as-is, so a Discrepancy is reported rather than papered over.
    """
    if len(weights) != 2 or any(int(w) < 1 for w in weights):
        raise InputError("weights must be two positive integers")
    dec = decompose_offset(lattice, t1, t2)
    n = denominator_lcm(dec)
    candidate = Coset(refine_lattice(lattice, n), as_vec(t1))
    verification = verify_constant_multiplicity(
        polytope, probe, QuasiPeriodicSet((candidate,)), mode
    )
    return RefinementResult(n, candidate, verification, dec)


def _distance_to_integers(x: Scalar) -> Scalar:
    f = x.floor()
    below = x - f
    above = to_scalar(f + 1) - x
    return below if (below - above).sign() <= 0 else above


def weyl_search(aprime, eps, j_max: int):
    """Smallest j in 0..j_max with (2j+1) * aprime within eps of Z^k in max norm.

    Distances are exact; the eps comparison is strict.  Returns None when no
    j qualifies, without deciding existence beyond the cap.
    """
    aprime = as_vec(aprime)
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise InputError("eps must satisfy 0 < eps < 1/2")
    for j in range(j_max + 1):
        mult = 2 * j + 1
        ok = True
        for a in aprime:
            dist = _distance_to_integers(a * mult)
            if (dist - eps).sign() >= 0:
                ok = False
                break
        if ok:
            return j
    return None


def equidistribution_statistic(aprime, frequency, m: int) -> float:
    """|1/M sum_{n=1..M} e^{2 pi i <frequency, 2n aprime>}|, floating point.

    The only floating-point output in the library; a diagnostic exhibiting the
    averaged exponential-sum decay that underlies density modulo Z^k.
    """
    aprime = as_vec(aprime)
    frequency = [int(f) for f in frequency]
    if len(frequency) != len(aprime) or not any(frequency):
        raise InputError("frequency must be a nonzero integer vector matching aprime")
    if m < 1:
        raise InputError("M must be positive")
    dot = 0.0
    for f, a in zip(frequency, aprime):
        if f:
            dot += f * a.to_float()
    total = 0 + 0j
    for n in range(1, m + 1):
        phase = math.fmod(2 * n * dot, 1.0)
        total += cmath.exp(2j * math.pi * phase)
    return abs(total) / m
