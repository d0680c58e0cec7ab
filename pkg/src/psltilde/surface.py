"""Surface presentations, representations, word evaluation, relative Euler
class, sign vectors, feasibility bounds, the evaluation map, and restriction
to standard subsurfaces.

Presentation convention: pi_1 of the genus-g surface with p punctures is free
on a1,b1,..,ag,bg,c1,..,c_{p-1}; the last primitive peripheral is the implied
word c_p = ([a1,b1]..[ag,bg] c1..c_{p-1})^-1, so a Representation can never
violate the defining relation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .cover import (
    CoverElement,
    central_index,
    cover_inv,
    cover_mul,
    special_lift,
)
from .errors import (
    BoundaryElliptic,
    NotHP,
    NotHyperbolic,
    RelatorNotCentral,
    SelfVerificationError,
    UnknownGenerator,
    UnsupportedCurve,
)
from .mobius import (
    Matrix2,
    ProjectiveMatrix,
    PslType,
    classify_psl,
    normalize,
)
from .words import CurveWord, EMPTY_WORD, word

EULER_BASE_TOL = 1e-8
RENORM_EVERY = 8


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.punctures < 1:
            raise ValueError("need at least one puncture")
        if self.chi >= 0:
            raise ValueError(
                f"Euler characteristic {self.chi} of "
                f"(g={self.genus}, p={self.punctures}) must be negative")

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def a(self, j: int) -> str:
        return f"a{j}"

    def b(self, j: int) -> str:
        return f"b{j}"

    def c(self, i: int) -> str:
        return f"c{i}"

    def free_generators(self) -> tuple[str, ...]:
        names = []
        for j in range(1, self.genus + 1):
            names += [self.a(j), self.b(j)]
        names += [self.c(i) for i in range(1, self.punctures)]
        return tuple(names)

    def handle_word(self, j: int) -> CurveWord:
        a, b = self.a(j), self.b(j)
        return CurveWord([(a, 1), (b, 1), (a, -1), (b, -1)])

    def gamma_word(self, j: int, k: int) -> CurveWord:
        """Standard subsurface boundary [a1,b1]..[aj,bj] c1..ck."""
        w = EMPTY_WORD
        for jj in range(1, j + 1):
            w = w * self.handle_word(jj)
        for i in range(1, k + 1):
            w = w * word(self.c(i))
        return w

    def last_peripheral_word(self) -> CurveWord:
        """The implied c_p as a word in the free generators."""
        return self.gamma_word(self.genus, self.punctures - 1).inv()

    def peripheral_word(self, i: int) -> CurveWord:
        if not 1 <= i <= self.punctures:
            raise ValueError(f"puncture index {i} out of range")
        if i < self.punctures:
            return word(self.c(i))
        return self.last_peripheral_word()


@dataclass(frozen=True, eq=False)
class Representation:
    surface: SurfacePresentation
    images: dict[str, ProjectiveMatrix]

    def __post_init__(self):
        missing = set(self.surface.free_generators()) - set(self.images)
        if missing:
            raise UnknownGenerator(f"missing generator images: {sorted(missing)}")

    def image(self, gen: str) -> ProjectiveMatrix:
        try:
            return self.images[gen]
        except KeyError:
            raise UnknownGenerator(gen) from None

    def peripheral_image(self, i: int) -> ProjectiveMatrix:
        return eval_word(self, self.surface.peripheral_word(i))

    def conjugate(self, g: ProjectiveMatrix) -> "Representation":
        # compensated products: builders chain conjugations, and plain float
        # sandwiches would accumulate genuine image error at tolerance scale
        from .dd import DDMatrix

        gd = DDMatrix(g.rep.entries())
        gi = gd.inv_unit()
        out = {}
        for k, m in self.images.items():
            prod = (gd @ DDMatrix(m.rep.entries()) @ gi).renormalized()
            out[k] = normalize(Matrix2(*prod.to_floats()))
        return Representation(self.surface, out)


def eval_word(rep: Representation, w: CurveWord) -> ProjectiveMatrix:
    """Left-to-right product of generator images, accumulated in compensated
    (double-double) arithmetic with periodic determinant renormalization, so
    image traces are reliable at tolerance scale even through long
    cancellation-heavy words. The implied last peripheral name (e.g. "c3" on
    a thrice-punctured sphere) expands to its defining word."""
    from .dd import DDMatrix
    from .mobius import normalize_unit

    surf = rep.surface
    last_name = surf.c(surf.punctures)
    acc = DDMatrix.identity()
    letters = list(w.letters)
    while letters:
        gen, exp = letters.pop(0)
        if gen == last_name:
            expansion = surf.last_peripheral_word()
            if exp == -1:
                expansion = expansion.inv()
            letters = list(expansion.letters) + letters
            continue
        m = rep.image(gen).rep
        if exp != 1:
            m = m.inv()
        acc = acc @ DDMatrix(m.entries())
    entries = acc.to_floats()
    if max(abs(v) for v in entries) > 1e4:
        # the determinant is exactly 1 but, past this entry size, float
        # cancellation makes it unmeasurable (error ~ entries^2 * 2^-53)
        return normalize_unit(Matrix2(*entries))
    return normalize(Matrix2(*acc.renormalized().to_floats()))


@dataclass(frozen=True)
class SignVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        if any(e not in (-1, 0, 1) for e in self.entries):
            raise ValueError("sign entries must be -1, 0 or +1")

    @property
    def p_plus(self) -> int:
        return sum(1 for e in self.entries if e == 1)

    @property
    def p_zero(self) -> int:
        return sum(1 for e in self.entries if e == 0)

    @property
    def p_minus(self) -> int:
        return sum(1 for e in self.entries if e == -1)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _require_hp(rep: Representation) -> list[PslType]:
    kinds = []
    for i in range(1, rep.surface.punctures + 1):
        kind = classify_psl(rep.peripheral_image(i))
        if kind in (PslType.ELLIPTIC, PslType.IDENTITY):
            raise NotHP(
                f"peripheral image {i} is {kind.value}; need hyperbolic or "
                "parabolic")
        kinds.append(kind)
    return kinds


def _commutator_lift(rep: Representation, j: int, shift_a: int = 0,
                     shift_b: int = 0) -> CoverElement:
    """Lifted commutator of a handle pair. The deck index comes from the
    float cover chain (robust at its 1e-6 guards); the base is recomputed in
    compensated arithmetic because commutator intermediates are exactly the
    cancellation-heavy products that leak float noise."""
    from .cover import with_base
    from .dd import DDMatrix

    at = CoverElement(rep.image(rep.surface.a(j)), shift_a)
    bt = CoverElement(rep.image(rep.surface.b(j)), shift_b)
    rough = cover_mul(cover_mul(at, bt), cover_mul(cover_inv(at), cover_inv(bt)))
    a = DDMatrix(at.base.rep.entries())
    b = DDMatrix(bt.base.rep.entries())
    comm = (a @ b @ a.inv_unit() @ b.inv_unit()).renormalized()
    return with_base(rough, normalize(Matrix2(*comm.to_floats())))


def euler_class(rep: Representation, ab_lift_shifts: dict[str, int] | None = None) -> int:
    """Relative Euler class: the central power reached by the lifted relator.

    Handle generators are lifted at index 0 (any shift leaves the commutator
    unchanged; ab_lift_shifts exists so tests can exercise exactly that),
    peripherals at their component-index-0 lifts. Raises NotHP for elliptic
    peripherals and RelatorNotCentral if the lifted relator does not project
    to the identity.
    """
    _require_hp(rep)
    shifts = ab_lift_shifts or {}
    surf = rep.surface
    total: CoverElement | None = None
    for j in range(1, surf.genus + 1):
        k = _commutator_lift(rep, j, shifts.get(surf.a(j), 0),
                             shifts.get(surf.b(j), 0))
        total = k if total is None else cover_mul(total, k)
    for i in range(1, surf.punctures + 1):
        ct = special_lift(rep.peripheral_image(i), "closure_hyp0")
        total = ct if total is None else cover_mul(total, ct)
    if not total.base.is_identity(EULER_BASE_TOL):
        raise RelatorNotCentral(
            f"lifted relator base off identity by "
            f"{total.base.rep.maxdiff(Matrix2(1, 0, 0, 1)):.3e}")
    return central_index(total)


def sign_vector(rep: Representation) -> SignVector:
    kinds = _require_hp(rep)
    table = {PslType.PARABOLIC_PLUS: 1, PslType.PARABOLIC_MINUS: -1,
             PslType.HYPERBOLIC: 0}
    return SignVector(tuple(table[k] for k in kinds))


class Feasibility(Enum):
    FEASIBLE_IFF = "FeasibleIff"
    FEASIBLE_SUFFICIENT = "FeasibleSufficient"
    INFEASIBLE = "Infeasible"
    UNKNOWN = "Unknown"


def mw_bounds(genus: int, punctures: int, n: int, s) -> Feasibility:
    """Generalized Milnor-Wood verdict for Euler class n and sign vector s.

    With at least one hyperbolic puncture the double inequality
    chi + p_plus <= n <= -chi - p_minus is necessary and sufficient; for
    all-parabolic signs it is only sufficient (extremal components exist
    outside it), hence Unknown when it fails.
    """
    sv = s if isinstance(s, SignVector) else SignVector(tuple(s))
    if len(sv) != punctures:
        raise ValueError("sign vector length must equal puncture count")
    chi = 2 - 2 * genus - punctures
    inside = (chi + sv.p_plus) <= n <= (-chi - sv.p_minus)
    if sv.p_zero >= 1:
        return Feasibility.FEASIBLE_IFF if inside else Feasibility.INFEASIBLE
    return Feasibility.FEASIBLE_SUFFICIENT if inside else Feasibility.UNKNOWN


def evaluation_map(rep: Representation) -> CoverElement:
    """Lifted product of the handle commutators and the first p-1 peripheral
    lifts (component-index-0 closure lifts, elliptics at their Ell(1) lift);
    its base is the inverse of the last peripheral image."""
    surf = rep.surface
    total: CoverElement | None = None
    for j in range(1, surf.genus + 1):
        k = _commutator_lift(rep, j)
        total = k if total is None else cover_mul(total, k)
    for i in range(1, surf.punctures):
        ct = special_lift(rep.peripheral_image(i), "eval")
        total = ct if total is None else cover_mul(total, ct)
    if total is None:  # (g, p) = (0, 1) is excluded by chi < 0
        raise AssertionError("empty evaluation product")
    return total


@dataclass(frozen=True)
class SplittingSpec:
    """A separating curve from the standard list.

    kind "prefix": gamma_{j,k} = [a1,b1]..[aj,bj] c1..ck, which is a simple
    prefix of the relator only for j = genus or k = 0.
    kind "pants_pair": the curve c_i c_{i+1} cutting off the pair of pants
    containing punctures i and i+1.
    """

    kind: str
    j: int = 0
    k: int = 0
    i: int = 0

    @staticmethod
    def prefix(j: int, k: int) -> "SplittingSpec":
        return SplittingSpec("prefix", j=j, k=k)

    @staticmethod
    def pants_pair(i: int) -> "SplittingSpec":
        return SplittingSpec("pants_pair", i=i)

    def curve_word(self, surf: SurfacePresentation) -> CurveWord:
        if self.kind == "prefix":
            return surf.gamma_word(self.j, self.k)
        w = surf.peripheral_word(self.i) * surf.peripheral_word(self.i + 1)
        return w

    def validate(self, surf: SurfacePresentation) -> None:
        g, p = surf.genus, surf.punctures
        if self.kind == "prefix":
            j, k = self.j, self.k
            if not (0 <= j <= g and 0 <= k <= p - 1):
                raise UnsupportedCurve(f"gamma_({j},{k}) out of range")
            if j < g and k > 0:
                raise UnsupportedCurve(
                    f"gamma_({j},{k}) is not simple in standard position "
                    "(handle blocks intervene); use j = genus or k = 0")
            side_a_chi = 2 - 2 * j - (k + 1)
            side_b_chi = 2 - 2 * (g - j) - (p - k + 1)
            if side_a_chi >= 0 or side_b_chi >= 0:
                raise UnsupportedCurve(
                    f"gamma_({j},{k}) does not cut two hyperbolic-type pieces")
        elif self.kind == "pants_pair":
            if not 1 <= self.i <= p - 1:
                raise UnsupportedCurve(f"pants pair index {self.i} out of range")
            if 2 - 2 * g - (p - 1) >= 0:
                raise UnsupportedCurve(
                    "complement of the pants is not of hyperbolic type")
        else:
            raise UnsupportedCurve(f"unknown splitting kind {self.kind!r}")


def standard_splits(surf: SurfacePresentation) -> list[SplittingSpec]:
    out = []
    g, p = surf.genus, surf.punctures
    for j in range(1, g + 1):
        spec = SplittingSpec.prefix(j, 0)
        try:
            spec.validate(surf)
        except UnsupportedCurve:
            continue
        out.append(spec)
    for k in range(1, p - 1):
        spec = SplittingSpec.prefix(g, k)
        try:
            spec.validate(surf)
        except UnsupportedCurve:
            continue
        out.append(spec)
    for i in range(1, p):
        spec = SplittingSpec.pants_pair(i)
        try:
            spec.validate(surf)
        except UnsupportedCurve:
            continue
        out.append(spec)
    return out


def restrict(rep: Representation, split: SplittingSpec
             ) -> tuple[Representation, Representation]:
    """Restrict along a standard separating curve; Euler classes add.

    Both pieces are returned on standard presentations: the splitting curve
    becomes each piece's implied last peripheral (prefix splits) or sits in
    the complement's peripheral list at the cut position (pants splits).
    """
    surf = rep.surface
    split.validate(surf)
    boundary = eval_word(rep, split.curve_word(surf))
    bkind = classify_psl(boundary)
    if bkind in (PslType.ELLIPTIC, PslType.IDENTITY):
        raise BoundaryElliptic(
            f"splitting curve image is {bkind.value}; restriction undefined")
    g, p = surf.genus, surf.punctures
    if split.kind == "prefix":
        j, k = split.j, split.k
        side_a = SurfacePresentation(j, k + 1)
        images_a: dict[str, ProjectiveMatrix] = {}
        for jj in range(1, j + 1):
            images_a[side_a.a(jj)] = rep.image(surf.a(jj))
            images_a[side_a.b(jj)] = rep.image(surf.b(jj))
        for i in range(1, k + 1):
            images_a[side_a.c(i)] = rep.image(surf.c(i))
        side_b = SurfacePresentation(g - j, p - k + 1)
        images_b: dict[str, ProjectiveMatrix] = {}
        for jj in range(j + 1, g + 1):
            images_b[side_b.a(jj - j)] = rep.image(surf.a(jj))
            images_b[side_b.b(jj - j)] = rep.image(surf.b(jj))
        for i in range(k + 1, p + 1):
            images_b[side_b.c(i - k)] = (rep.image(surf.c(i)) if i < p
                                         else rep.peripheral_image(p))
        return (Representation(side_a, images_a),
                Representation(side_b, images_b))
    i = split.i
    side_a = SurfacePresentation(0, 3)
    images_a = {
        side_a.c(1): rep.peripheral_image(i),
        side_a.c(2): rep.peripheral_image(i + 1),
    }
    side_b = SurfacePresentation(g, p - 1)
    images_b = {}
    for jj in range(1, g + 1):
        images_b[side_b.a(jj)] = rep.image(surf.a(jj))
        images_b[side_b.b(jj)] = rep.image(surf.b(jj))
    new_list: list[ProjectiveMatrix] = []
    for m in range(1, p):
        if m < i:
            new_list.append(rep.image(surf.c(m)))
        elif m == i:
            new_list.append(boundary)
        else:
            new_list.append(rep.peripheral_image(m + 1))
    for m, img in enumerate(new_list[:p - 2], start=1):
        images_b[side_b.c(m)] = img
    return (Representation(side_a, images_a), Representation(side_b, images_b))


def _one_parameter_power(m: ProjectiveMatrix, t: float) -> ProjectiveMatrix:
    """Time-t element of the hyperbolic one-parameter subgroup through m."""
    from .mobius import _hyperbolic_frame, _positive_trace_rep

    rep = _positive_trace_rep(m)
    tr = rep.trace()
    lam = (tr + math.sqrt(tr * tr - 4.0)) / 2.0
    f = _hyperbolic_frame(m)
    d = Matrix2(lam ** t, 0.0, 0.0, lam ** (-t))
    return normalize(f @ d @ f.inv())


def _split_side_a_generators(surf: SurfacePresentation,
                             split: SplittingSpec) -> list[str]:
    if split.kind == "prefix":
        gens = []
        for jj in range(1, split.j + 1):
            gens += [surf.a(jj), surf.b(jj)]
        gens += [surf.c(i) for i in range(1, split.k + 1)]
        return gens
    gens = [surf.c(split.i)]
    if split.i + 1 < surf.punctures:
        gens.append(surf.c(split.i + 1))
    return gens


def find_standard_split(surf: SurfacePresentation, curve: CurveWord
                        ) -> SplittingSpec:
    from .words import canonical_form

    target = canonical_form(_expand_last(surf, curve))
    for spec in standard_splits(surf):
        if canonical_form(_expand_last(surf, spec.curve_word(surf))) == target:
            return spec
    raise UnsupportedCurve(f"curve {curve} is not in the standard list")


def _expand_last(surf: SurfacePresentation, w: CurveWord) -> CurveWord:
    from .words import substitute

    images = {g: word(g) for g in surf.free_generators()}
    images[surf.c(surf.punctures)] = surf.last_peripheral_word()
    return substitute(w, images)


def twist_deform(rep: Representation, curve, t: float) -> Representation:
    """Conjugate one side of a standard splitting by the time-t element of
    the one-parameter subgroup through the curve's image. Peripheral types,
    Euler class and sign vector are asserted unchanged."""
    surf = rep.surface
    split = curve if isinstance(curve, SplittingSpec) else \
        find_standard_split(surf, curve)
    split.validate(surf)
    boundary = eval_word(rep, split.curve_word(surf))
    bkind = classify_psl(boundary)
    if bkind is PslType.ELLIPTIC or bkind is PslType.IDENTITY:
        raise BoundaryElliptic("twist curve image is elliptic")
    if bkind is not PslType.HYPERBOLIC:
        raise NotHyperbolic("twist curve image must be hyperbolic")
    if t == 0.0:
        return rep
    h = _one_parameter_power(boundary, t)
    side = set(_split_side_a_generators(surf, split))
    new_images = {
        gen: (h @ m @ h.inv() if gen in side else m)
        for gen, m in rep.images.items()
    }
    out = Representation(surf, new_images)
    before = (euler_class(rep), sign_vector(rep))
    after = (euler_class(out), sign_vector(out))
    if before != after:
        raise SelfVerificationError(
            f"twist changed invariants: {before} -> {after}")
    return out
