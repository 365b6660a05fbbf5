"""Weighted 0-cycles of CM points on X_0(N).

A point of discriminant -d < 0 at level N with residue r mod 2N is cut out
by an integral binary quadratic form [a, b, c] with

    b^2 - 4ac = -d,   N | a,   b = r mod 2N,   a > 0,

taken modulo Gamma_0(N).  Each class contributes the root of a z^2 + b z + c
in the upper half plane with multiplicity 1/e, where 2e is the order of the
stabilizer of the point in Gamma_0(N).

Gamma_0(N)-equivalence is decided two ways:

* the production path explores bounded form sets under the parabolic moves
  T: (a,b,c) -> (a, b+2a, a+b+c) and L_N: (a,b,c) -> (a+bN+cN^2, b+2cN, c)
  with union-find, doubling the height bound until the class partition is
  stable (and, at N = 1, matches the reduced-form count);
* an exact transporter test (SL_2(Z)-reduction plus the finite automorph
  group, intersected with Gamma_0(N)) is used to certify the partition.

The two must agree; BoundNotStabilized is raised when the doubling loop
fails to certify.  orbit_cross_check re-derives the same cycle through an
independent enumeration of trace-zero 2x2 matrices under conjugation and
compares weighted multisets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "BoundNotStabilized",
    "MismatchDetected",
    "BinaryForm",
    "CMPoint",
    "CyclePoint",
    "HeegnerCycle",
    "CrossCheckReport",
    "forms_with_disc",
    "gamma0_classes",
    "heegner_cycle",
    "orbit_cross_check",
    "stabilizer_order",
    "gamma0_equivalent",
]


class BoundNotStabilized(RuntimeError):
    pass


class MismatchDetected(RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BinaryForm:
    """[a, b, c] with context (N, r); disc = b^2 - 4ac must be negative."""

    a: int
    b: int
    c: int
    n: int = 1
    r: int = 0

    def __post_init__(self):
        if self.disc >= 0:
            raise ValueError("only negative discriminants are supported")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def in_q_set(self) -> bool:
        """Membership in Q_{N,r,d}: N | a and b = r mod 2N."""
        return self.a % self.n == 0 and (self.b - self.r) % (2 * self.n) == 0

    @property
    def in_q_plus(self) -> bool:
        return self.in_q_set and self.a > 0

    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class CMPoint:
    """The root z = (-b + i sqrt(d)) / (2a) of a z^2 + b z + c, a > 0."""

    a: int
    b: int
    d: int

    @property
    def value(self) -> complex:
        return complex(-self.b, math.sqrt(self.d)) / (2 * self.a)

    @property
    def float_approx(self) -> complex:
        z = self.value
        return complex(float(f"{z.real:.12g}"), float(f"{z.imag:.12g}"))

    def exact_parts(self) -> tuple[Fraction, Fraction, int]:
        """(re, im_coeff, d): z = re + im_coeff * sqrt(d) * i, exactly."""
        return (Fraction(-self.b, 2 * self.a), Fraction(1, 2 * self.a), self.d)


@dataclass(frozen=True)
class CyclePoint:
    point: CMPoint
    multiplicity: Fraction
    form: BinaryForm
    stabilizer_order: int


@dataclass(frozen=True)
class HeegnerCycle:
    n: int
    r: int
    d: int
    points: tuple[CyclePoint, ...]
    degree: Fraction

    def to_json_dict(self) -> dict:
        return {
            "N": self.n,
            "r": self.r,
            "d": self.d,
            "degree": str(self.degree),
            "points": [
                {
                    "a": p.point.a,
                    "b": p.point.b,
                    "d": p.point.d,
                    "mult": str(p.multiplicity),
                    "stab": p.stabilizer_order,
                    "form": list(p.form.triple()),
                    "approx": [p.point.float_approx.real, p.point.float_approx.imag],
                }
                for p in self.points
            ],
        }


def _congruence_solvable(n: int, r: int, d: int) -> bool:
    return (r * r + d) % (4 * n) == 0


def forms_with_disc(n: int, r: int, d: int, height_bound: int) -> list[BinaryForm]:
    """All [a, b, c] with b^2 - 4ac = -d, N | a, b = r mod 2N and
    0 < a <= A, 0 < c <= A (which bounds |b| automatically)."""
    if n < 1 or d <= 0:
        raise ValueError("need N >= 1 and d > 0")
    if not _congruence_solvable(n, r, d):
        return []
    out = []
    r2n = r % (2 * n)
    for a in range(n, height_bound + 1, n):
        for c in range(1, height_bound + 1):
            b2 = 4 * a * c - d
            if b2 < 0:
                continue
            b = math.isqrt(b2)
            if b * b != b2:
                continue
            for bb in ({b, -b} if b else {0}):
                if (bb - r2n) % (2 * n) == 0:
                    out.append(BinaryForm(a, bb, c, n, r2n))
    out.sort(key=lambda f: f.triple())
    return out


def _move_t(t: tuple[int, int, int], k: int = 1) -> tuple[int, int, int]:
    """Action of [[1, k], [0, 1]] on forms: b -> b + 2ak."""
    a, b, c = t
    return (a, b + 2 * a * k, a * k * k + b * k + c)


def _move_l(t: tuple[int, int, int], n: int, k: int = 1) -> tuple[int, int, int]:
    """Action of [[1, 0], [kN, 1]] on forms."""
    a, b, c = t
    m = k * n
    return (a + b * m + c * m * m, b + 2 * c * m, c)


def _canonical_key(t: tuple[int, int, int]):
    a, b, c = t
    return (a, abs(b), -1 if b > 0 else (1 if b < 0 else 0), c)


# ---------------------------------------------------------------------------
# exact SL2(Z) reduction, automorphs, and Gamma_0(N) transporters


def _reduce_sl2(t: tuple[int, int, int]):
    """Reduce a positive form; returns (reduced_triple, g) with form.g = reduced,
    where the action is y -> transpose(g) y g on Gram matrices."""
    a, b, c = t
    g = ((1, 0), (0, 1))

    def mul(m1, m2):
        return (
            (m1[0][0] * m2[0][0] + m1[0][1] * m2[1][0], m1[0][0] * m2[0][1] + m1[0][1] * m2[1][1]),
            (m1[1][0] * m2[0][0] + m1[1][1] * m2[1][0], m1[1][0] * m2[0][1] + m1[1][1] * m2[1][1]),
        )

    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            a, b, c = _move_t((a, b, c), k)
            g = mul(g, ((1, k), (0, 1)))
            continue
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            g = mul(g, ((0, -1), (1, 0)))
            continue
        return (a, b, c), g


def _automorphs(t: tuple[int, int, int]):
    """All g in SL2(Z) with transpose(g) y g = y, via the primitive part."""
    a, b, c = t
    k = math.gcd(math.gcd(a, b), c)
    a0, b0, c0 = a // k, b // k, c // k
    d0 = 4 * a0 * c0 - b0 * b0
    sols = []
    u_max = math.isqrt(4 // d0) if d0 <= 4 else 0
    for u in range(-u_max, u_max + 1):
        rest = 4 - d0 * u * u
        if rest < 0:
            continue
        s = math.isqrt(rest)
        if s * s != rest:
            continue
        for tt in ({s, -s} if s else {0}):
            if (tt - b0 * u) % 2 == 0:
                sols.append(((
                    (tt - b0 * u) // 2, -c0 * u),
                    (a0 * u, (tt + b0 * u) // 2),
                ))
    return sols


def _transporters(t1, t2):
    """All g in SL2(Z) with transpose(g) y1 g = y2 (empty if inequivalent)."""
    r1, g1 = _reduce_sl2(t1)
    r2, g2 = _reduce_sl2(t2)
    if r1 != r2:
        return []
    # invert g2 (det 1)
    (p, q), (r, s) = g2
    g2_inv = ((s, -q), (-r, p))
    out = []
    for aut in _automorphs(r1):
        m1 = (
            (g1[0][0] * aut[0][0] + g1[0][1] * aut[1][0], g1[0][0] * aut[0][1] + g1[0][1] * aut[1][1]),
            (g1[1][0] * aut[0][0] + g1[1][1] * aut[1][0], g1[1][0] * aut[0][1] + g1[1][1] * aut[1][1]),
        )
        g = (
            (m1[0][0] * g2_inv[0][0] + m1[0][1] * g2_inv[1][0], m1[0][0] * g2_inv[0][1] + m1[0][1] * g2_inv[1][1]),
            (m1[1][0] * g2_inv[0][0] + m1[1][1] * g2_inv[1][0], m1[1][0] * g2_inv[0][1] + m1[1][1] * g2_inv[1][1]),
        )
        out.append(g)
    return out


def gamma0_equivalent(t1, t2, n: int) -> bool:
    """Exact test: some transporter lies in Gamma_0(N)."""
    return any(g[1][0] % n == 0 for g in _transporters(t1, t2))


def stabilizer_order(t: tuple[int, int, int], n: int) -> int:
    """Order of the stabilizer in Gamma_0(N) of the root of [a,b,c] (a > 0).

    This is the number of automorphs of the primitive part that lie in
    Gamma_0(N); it always contains +-identity, and equals 4 or 6 exactly at
    forms whose primitive part has discriminant -4 or -3 with N dividing
    the primitive leading coefficient times u."""
    return sum(1 for g in _automorphs(t) if g[1][0] % n == 0)


# ---------------------------------------------------------------------------
# class enumeration


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def classes(self):
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _partition_forms(triples, n: int):
    """Union-find partition of a set of form triples under T, L_N moves,
    joined only inside the given set."""
    s = set(triples)
    uf = _UnionFind(s)
    for t in s:
        for img in (
            _move_t(t, 1),
            _move_t(t, -1),
            _move_l(t, n, 1),
            _move_l(t, n, -1),
        ):
            if img in s:
                uf.union(t, img)
    return uf.classes()


def _certified_classes(triples, n: int):
    """Merge union-find classes whose representatives are Gamma_0(N)
    equivalent (exact transporter test), certifying the partition."""
    classes = _partition_forms(triples, n)
    reps = sorted(classes, key=_canonical_key)
    merged: list[list] = []
    owners: list[tuple[int, int, int]] = []
    for rep in reps:
        for i, owner in enumerate(owners):
            if gamma0_equivalent(rep, owner, n):
                merged[i].extend(classes[rep])
                break
        else:
            owners.append(rep)
            merged.append(list(classes[rep]))
    return [sorted(members, key=_canonical_key) for members in merged]


@lru_cache(maxsize=None)
def gamma0_classes(n: int, r: int, d: int) -> tuple[tuple[BinaryForm, int], ...]:
    """Gamma_0(N)-classes of Q+_{N,r,d}: (canonical representative,
    stabilizer order) pairs, sorted by representative.

    The height bound doubles until the class partition is stable over two
    consecutive rounds (and matches the reduced-form count at N = 1, where
    Gamma_0(1)-classes are classical).  Partitions are certified with the
    exact transporter test, so a stray parabolic-orbit split cannot leak
    into the output.
    """
    r = r % (2 * n)
    if not _congruence_solvable(n, r, d):
        return ()
    if n == 1:
        from .eisenstein import reduced_forms

        expected = len(reduced_forms(d))
    else:
        expected = None
    bound = max(d, 4 * n, 8)
    prev: tuple | None = None
    for _round in range(10):
        triples = [f.triple() for f in forms_with_disc(n, r, d, bound)]
        classes = _certified_classes(triples, n)
        signature = tuple(sorted(min(_canonical_key(t) for t in cls) for cls in classes))
        stable = prev is not None and signature == prev
        if stable and (expected is None or len(classes) == expected):
            out = []
            for cls in sorted(classes, key=lambda c: _canonical_key(c[0])):
                rep = min(cls, key=_canonical_key)
                out.append(
                    (BinaryForm(*rep, n, r), stabilizer_order(rep, n))
                )
            return tuple(out)
        prev = signature
        bound *= 2
    raise BoundNotStabilized(f"no stable partition for (N, r, d) = ({n}, {r}, {d})")


def _families(n: int, r: int) -> list[int]:
    """The residues r, -r mod 2N, without duplication when they coincide."""
    r = r % (2 * n)
    neg = (-r) % (2 * n)
    return [r] if neg == r else [r, neg]


@lru_cache(maxsize=None)
def heegner_cycle(n: int, r: int, d: int) -> HeegnerCycle:
    """The weighted 0-cycle attached to (N, r, d): empty unless
    -d = r^2 mod 4N, otherwise one point per class of Q+_{N,r,d} and (for
    r != -r mod 2N) of Q+_{N,-r,d}, each weighted by 1/e."""
    if n < 1 or d <= 0:
        raise ValueError("need N >= 1 and d > 0")
    points = []
    for fam in _families(n, r):
        for form, stab in gamma0_classes(n, fam, d):
            e = stab // 2
            points.append(
                CyclePoint(
                    point=CMPoint(form.a, form.b, d),
                    multiplicity=Fraction(1, e),
                    form=form,
                    stabilizer_order=stab,
                )
            )
    points.sort(key=lambda p: _canonical_key(p.form.triple()))
    degree = sum((p.multiplicity for p in points), Fraction(0))
    return HeegnerCycle(n=n, r=r % (2 * n), d=d, points=tuple(points), degree=degree)


# ---------------------------------------------------------------------------
# independent route: trace-zero matrices under conjugation


def _mat_move(x, g_inv, g):
    """g^-1 x g for 2x2 integer matrices."""
    (a, b), (c, d) = x
    (p, q), (r, s) = g_inv
    y = ((p * a + q * c, p * b + q * d), (r * a + s * c, r * b + s * d))
    (a, b), (c, d) = y
    (p, q), (r, s) = g
    return ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))


_T = ((1, 1), (0, 1))
_T_INV = ((1, -1), (0, 1))


def _enumerate_x_matrices(n: int, r: int, d: int, bound: int):
    """Matrices x = [[B, C], [-A, -B]] with A = 0 mod 2N, C = 0 mod 2,
    B = +-r mod 2N, det x = -B^2 + AC = d, A > 0 (one of each +-x pair),
    bounded via A/2, C/2 <= bound."""
    res = {r % (2 * n), (-r) % (2 * n)}
    out = []
    for a_half in range(n, bound + 1, n):
        for c_half in range(1, bound + 1):
            b2 = 4 * a_half * c_half - d
            if b2 < 0:
                continue
            b = math.isqrt(b2)
            if b * b != b2:
                continue
            for bb in ({b, -b} if b else {0}):
                if bb % (2 * n) in res:
                    out.append(((bb, 2 * c_half), (-2 * a_half, -bb)))
    return sorted(out)


def _x_to_form(x) -> tuple[int, int, int]:
    (b, c2), (a2, _nb) = x
    return (-a2 // 2, b, c2 // 2)


@dataclass(frozen=True)
class CrossCheckReport:
    n: int
    r: int
    d: int
    match: bool
    forms_side: tuple
    orbit_side: tuple


def orbit_cross_check(n: int, r: int, d: int, raise_on_mismatch: bool = True) -> CrossCheckReport:
    """Compare the forms-route cycle against an independent enumeration of
    trace-zero integer matrices with the right congruences, reduced under
    Gamma_0(N)-conjugation.  Multisets of (class representative, point,
    multiplicity) must coincide exactly."""
    cycle = heegner_cycle(n, r, d)
    forms_side = tuple(
        sorted((p.form.triple(), str(p.multiplicity)) for p in cycle.points)
    )

    if not _congruence_solvable(n, r % (2 * n), d) and not _congruence_solvable(
        n, (-r) % (2 * n), d
    ):
        orbit_side = ()
    else:
        gen_l = ((1, 0), (n, 1))
        gen_l_inv = ((1, 0), (-n, 1))
        bound = max(d, 4 * n, 8)
        prev = None
        orbit_side = None
        for _round in range(10):
            mats = _enumerate_x_matrices(n, r, d, bound)
            s = set(mats)
            uf = _UnionFind(s)
            for x in s:
                for g, g_inv in ((_T, _T_INV), (gen_l, gen_l_inv)):
                    for gg, gg_inv in ((g, g_inv), (g_inv, g)):
                        img = _mat_move(x, gg_inv, gg)
                        if img in s:
                            uf.union(x, img)
            classes = list(uf.classes().values())
            # certify with the exact test on the mapped forms
            mapped = [sorted(_x_to_form(x) for x in cls) for cls in classes]
            merged: list[list] = []
            owners: list = []
            for cls in sorted(mapped, key=lambda c: _canonical_key(c[0])):
                for i, owner in enumerate(owners):
                    if gamma0_equivalent(cls[0], owner, n):
                        merged[i].extend(cls)
                        break
                else:
                    owners.append(cls[0])
                    merged.append(list(cls))
            sig = tuple(
                sorted(min(_canonical_key(t) for t in cls) for cls in merged)
            )
            if prev is not None and sig == prev:
                entries = []
                for cls in merged:
                    rep = min(cls, key=_canonical_key)
                    stab = stabilizer_order(rep, n)
                    entries.append((rep, str(Fraction(1, stab // 2))))
                orbit_side = tuple(sorted(entries))
                break
            prev = sig
            bound *= 2
        if orbit_side is None:
            raise BoundNotStabilized(
                f"orbit route did not stabilize for ({n}, {r}, {d})"
            )

    report = CrossCheckReport(
        n=n, r=r % (2 * n), d=d,
        match=(forms_side == orbit_side),
        forms_side=forms_side,
        orbit_side=orbit_side,
    )
    if raise_on_mismatch and not report.match:
        raise MismatchDetected(
            f"routes disagree for ({n}, {r}, {d}): "
            f"forms={forms_side} orbit={orbit_side}",
            report,
        )
    return report
