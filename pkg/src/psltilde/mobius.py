"""Exact-tolerance 2x2 real matrix layer for PSL(2,R).

Matrices act on the projective line of directions through the origin; the
direction with angle x in [0, pi) is the line through (cos x, sin x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NonUnitDeterminant, NotConjugate, NotHyperbolic

DET_PRE_TOL = 1e-6      # |det - 1| allowed before normalization
PAR_BAND = 1e-8         # |trace| within this of 2 classifies parabolic
IDENTITY_TOL = 1e-9
CONJ_TOL = 1e-8

ALL_DIRECTIONS = "all"  # fixed_directions result for the identity


@dataclass(frozen=True)
class Matrix2:
    """Row-major 2x2 real matrix (a b / c d)."""

    a: float
    b: float
    c: float
    d: float

    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Matrix2":
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def inv(self) -> "Matrix2":
        # valid for det 1; callers keep matrices unit-determinant
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def scale(self, s: float) -> "Matrix2":
        return Matrix2(self.a * s, self.b * s, self.c * s, self.d * s)

    def apply(self, vx: float, vy: float) -> tuple[float, float]:
        return (self.a * vx + self.b * vy, self.c * vx + self.d * vy)

    def entries(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def maxdiff(self, other: "Matrix2") -> float:
        return max(
            abs(self.a - other.a),
            abs(self.b - other.b),
            abs(self.c - other.c),
            abs(self.d - other.d),
        )


IDENTITY = Matrix2(1.0, 0.0, 0.0, 1.0)


def rotation(theta: float) -> Matrix2:
    """Rotation translating direction angles by -theta (the exponential of
    theta * (0 1 / -1 0), the paper-standard elliptic one-parameter family)."""
    c, s = math.cos(theta), math.sin(theta)
    return Matrix2(c, s, -s, c)


def diag(m: float) -> Matrix2:
    return Matrix2(m, 0.0, 0.0, 1.0 / m)


@dataclass(frozen=True)
class ProjectiveMatrix:
    """Canonical-sign unit-determinant representative of a PSL(2,R) element.

    Construct through normalize(); the first nonzero entry in scan order
    (a, b, c) is strictly positive, so a matrix and its negation coincide.
    """

    rep: Matrix2

    def trace_abs(self) -> float:
        return abs(self.rep.trace())

    def inv(self) -> "ProjectiveMatrix":
        return normalize(self.rep.inv())

    def __matmul__(self, other: "ProjectiveMatrix") -> "ProjectiveMatrix":
        return normalize(self.rep @ other.rep)

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return self.rep.maxdiff(IDENTITY) < tol


class PslType(Enum):
    HYPERBOLIC = "Hyperbolic"
    PARABOLIC_PLUS = "ParabolicPlus"
    PARABOLIC_MINUS = "ParabolicMinus"
    ELLIPTIC = "Elliptic"
    IDENTITY = "Identity"


def _canonical_sign(m: Matrix2) -> Matrix2:
    for entry in (m.a, m.b, m.c):
        if entry != 0.0:
            return m if entry > 0.0 else -m
    # det 1 rules this out except for contrived inputs; keep a defined answer
    return m if m.d > 0.0 else -m


def normalize(m: Matrix2, det_tol: float = DET_PRE_TOL) -> ProjectiveMatrix:
    """Rescale to determinant 1 and pick the canonical-sign representative.

    Raises NonUnitDeterminant for det <= 0 or |det - 1| >= det_tol: this layer
    repairs float drift, not arbitrary GL matrices.
    """
    det = m.det()
    if det <= 0.0 or abs(det - 1.0) >= det_tol:
        raise NonUnitDeterminant(f"determinant {det!r} not acceptably close to 1")
    if det != 1.0:
        m = m.scale(1.0 / math.sqrt(det))
    return ProjectiveMatrix(_canonical_sign(m))


def normalize_unit(m: Matrix2) -> ProjectiveMatrix:
    """Canonical-sign representative of a matrix whose determinant is known
    to be exactly 1 (e.g. a product of unit-determinant factors whose entries
    are too large for the determinant to be measurable in floats)."""
    return ProjectiveMatrix(_canonical_sign(m))


def classify_psl(p: ProjectiveMatrix, par_band: float = PAR_BAND) -> PslType:
    """Type of a PSL(2,R) element, with the parabolic sign read off the
    trace-+2 unit-determinant lift: sign = sgn(a12) if a12 != 0 else -sgn(a21).
    """
    if p.is_identity():
        return PslType.IDENTITY
    tr = p.rep.trace()
    if abs(tr) > 2.0 + par_band:
        return PslType.HYPERBOLIC
    if abs(tr) < 2.0 - par_band:
        return PslType.ELLIPTIC
    m = p.rep if tr > 0 else -p.rep
    if m.b != 0.0:
        sign = 1.0 if m.b > 0 else -1.0
    else:
        sign = -1.0 if m.c > 0 else 1.0
    return PslType.PARABOLIC_PLUS if sign > 0 else PslType.PARABOLIC_MINUS


def is_parabolic(t: PslType) -> bool:
    return t in (PslType.PARABOLIC_PLUS, PslType.PARABOLIC_MINUS)


def _angle_of(vx: float, vy: float) -> float:
    return math.atan2(vy, vx) % math.pi


def fixed_directions(p: ProjectiveMatrix):
    """Angles t in [0, pi) with p . (cos t, sin t) projectively fixed.

    Two for hyperbolic, one for parabolic, none for elliptic; the identity
    returns the sentinel ALL_DIRECTIONS.
    """
    kind = classify_psl(p)
    if kind is PslType.IDENTITY:
        return ALL_DIRECTIONS
    if kind is PslType.ELLIPTIC:
        return []
    m = p.rep if p.rep.trace() > 0 else -p.rep
    tr = m.trace()
    if kind is PslType.HYPERBOLIC:
        disc = math.sqrt(tr * tr - 4.0)
        out = []
        for lam in ((tr + disc) / 2.0, (tr - disc) / 2.0):
            # eigenvector of the larger row of (m - lam I)
            v1 = (m.b, lam - m.a)
            v2 = (lam - m.d, m.c)
            v = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
            out.append(_angle_of(*v))
        return sorted(out)
    # parabolic: kernel direction of (m - I)
    v1 = (m.b, 1.0 - m.a)
    v2 = (1.0 - m.d, m.c)
    v = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
    return [_angle_of(*v)]


def _strictly_inside_arc(x: float, a: float, b: float) -> bool:
    # circle of circumference pi, going from a towards b in increasing angle
    span = (b - a) % math.pi
    off = (x - a) % math.pi
    return 0.0 < off < span


def axes_cross(p: ProjectiveMatrix, q: ProjectiveMatrix) -> bool:
    """True iff the fixed-direction pairs of two hyperbolics strictly
    interleave on the direction circle."""
    if classify_psl(p) is not PslType.HYPERBOLIC:
        raise NotHyperbolic("first argument is not hyperbolic")
    if classify_psl(q) is not PslType.HYPERBOLIC:
        raise NotHyperbolic("second argument is not hyperbolic")
    a1, a2 = fixed_directions(p)
    b1, b2 = fixed_directions(q)
    inside = sum(1 for x in (b1, b2) if _strictly_inside_arc(x, a1, a2))
    return inside == 1


def _positive_trace_rep(p: ProjectiveMatrix) -> Matrix2:
    return p.rep if p.rep.trace() > 0 else -p.rep


def _hyperbolic_frame(p: ProjectiveMatrix) -> Matrix2:
    """Unit-determinant matrix whose columns are the expanding and
    contracting eigendirections of p, in that order."""
    m = _positive_trace_rep(p)
    tr = m.trace()
    disc = math.sqrt(tr * tr - 4.0)
    cols = []
    for lam in ((tr + disc) / 2.0, (tr - disc) / 2.0):
        v1 = (m.b, lam - m.a)
        v2 = (lam - m.d, m.c)
        v = v1 if math.hypot(*v1) >= math.hypot(*v2) else v2
        n = math.hypot(*v)
        cols.append((v[0] / n, v[1] / n))
    f = Matrix2(cols[0][0], cols[1][0], cols[0][1], cols[1][1])
    det = f.det()
    if det < 0:
        f = Matrix2(f.a, -f.b, f.c, -f.d)
        det = -det
    return f.scale(1.0 / math.sqrt(det))


def _elliptic_fixed_point(p: ProjectiveMatrix) -> complex:
    """Fixed point in the upper half-plane of the Moebius action."""
    m = p.rep
    # c z^2 + (d - a) z - b = 0; elliptic forces c != 0
    tr = m.trace()
    im = math.sqrt(4.0 - tr * tr) / (2.0 * abs(m.c))
    re = (m.a - m.d) / (2.0 * m.c)
    return complex(re, im)


def _halfplane_transport(z: complex) -> Matrix2:
    """Unit-determinant matrix sending i to z (a shear-scale pair)."""
    y = z.imag
    r = math.sqrt(y)
    return Matrix2(r, z.real / r, 0.0, 1.0 / r)


def _intertwiner_null_basis(p: Matrix2, q: Matrix2) -> list[tuple[float, ...]]:
    """Two-dimensional null space of G -> G p - q G (vectorized 4x4 system)
    for conjugate or anti-conjugate pairs; empty when the traces genuinely
    differ."""
    rows = [
        [p.a - q.a, p.c, -q.b, 0.0],
        [p.b, p.d - q.a, 0.0, -q.b],
        [-q.c, 0.0, p.a - q.d, p.c],
        [0.0, -q.c, p.b, p.d - q.d],
    ]
    scale = max(max(abs(v) for v in row) for row in rows) or 1.0
    tol = 1e-9 * scale
    m = [row[:] for row in rows]
    pivots = []
    r = 0
    for col in range(4):
        piv = max(range(r, 4), key=lambda i: abs(m[i][col]))
        if abs(m[piv][col]) <= tol:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        m[r] = [v / lead for v in m[r]]
        for i in range(4):
            if i != r and m[i][col] != 0.0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == 4:
            break
    free = [c for c in range(4) if c not in pivots]
    basis = []
    for fc in free:
        v = [0.0] * 4
        v[fc] = 1.0
        for ri, pc in enumerate(pivots):
            v[pc] = -m[ri][fc]
        basis.append(tuple(v))
    return basis


def conjugator(p: ProjectiveMatrix, q: ProjectiveMatrix,
               tol: float = CONJ_TOL) -> ProjectiveMatrix:
    """G with G p G^-1 = q, solved exactly on the intertwiner space.

    The solutions of G p = q G form a two-dimensional space for same-trace
    pairs; conjugacy in PSL(2,R) holds iff the determinant form is positive
    somewhere on it, which also rejects parabolic sign mismatches and
    opposite elliptic rotation senses. Raises NotConjugate otherwise.
    """
    tp, tq = classify_psl(p), classify_psl(q)
    if tp is not tq:
        raise NotConjugate(f"type mismatch: {tp.value} vs {tq.value}")
    if tp is PslType.IDENTITY:
        return normalize(IDENTITY)
    if tp in (PslType.HYPERBOLIC, PslType.ELLIPTIC):
        if abs(p.trace_abs() - q.trace_abs()) >= tol:
            raise NotConjugate(
                f"trace mismatch: {p.trace_abs()} vs {q.trace_abs()}")
    # the intertwining equation is sign-sensitive; try both lifts of q
    for qm in (q.rep, -q.rep):
        basis = _intertwiner_null_basis(p.rep, qm)
        if len(basis) < 2:
            continue
        v1, v2 = basis[0], basis[1]
        det = lambda v: v[0] * v[3] - v[1] * v[2]
        d11, d22 = det(v1), det(v2)
        d12 = (det(tuple(a + b for a, b in zip(v1, v2))) - d11 - d22) / 2.0
        half_tr = (d11 + d22) / 2.0
        lam_max = half_tr + math.hypot((d11 - d22) / 2.0, d12)
        if lam_max <= 1e-12:
            continue
        # eigenvector of the determinant form for its largest eigenvalue
        e1, e2 = (d12, lam_max - d11)
        if math.hypot(e1, e2) < 1e-12 * max(1.0, abs(lam_max)):
            e1, e2 = (lam_max - d22, d12)
        if math.hypot(e1, e2) < 1e-12 * max(1.0, abs(lam_max)):
            e1, e2 = 1.0, 0.0
        nrm = math.hypot(e1, e2)
        c, s = e1 / nrm, e2 / nrm
        g = Matrix2(*(c * a + s * b for a, b in zip(v1, v2)))
        gdet = g.det()
        if gdet <= 1e-12:
            continue
        g = normalize(g.scale(1.0 / math.sqrt(gdet)), det_tol=1.0)
        check = g @ p @ g.inv()
        if check.rep.maxdiff(q.rep) < tol:
            return g
    raise NotConjugate(
        f"no orientation-preserving conjugator exists "
        f"({tp.value}, |tr| {p.trace_abs():.6g})")
