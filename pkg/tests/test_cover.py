import math
import random

import pytest

from psltilde.cover import (
    Center,
    CoverElement,
    Ell,
    Hyp,
    ParMinus,
    ParPlus,
    Z,
    angle_lift,
    central_index,
    cover_classify,
    cover_conj,
    cover_equal,
    cover_inv,
    cover_mul,
    identity_cover,
    lift_in_class,
    sl_projection,
    sl_trace,
    special_lift,
    z_power,
)
from psltilde.errors import EllipticHasNoHyp0Lift
from psltilde.mobius import Matrix2, diag, normalize, rotation
from psltilde.sampling import (
    random_cover,
    random_elliptic,
    random_hyperbolic,
    random_parabolic,
    random_psl,
)

PI = math.pi


def test_angle_lift_identity():
    ident = normalize(Matrix2(1, 0, 0, 1))
    for x in (0.0, 0.4, 2.0, 5.0, -3.3):
        assert abs(angle_lift(ident, x) - x) < 1e-12


def test_angle_lift_rotation_translates():
    # the standard elliptic one-parameter family translates the angle line
    theta = 0.7
    p = normalize(rotation(theta).inv())
    for x in (0.0, 1.0, 2.8):
        assert abs(angle_lift(p, x) - (x + theta)) < 1e-12


def test_angle_lift_diag_example():
    # image direction of (cos pi/4, sin pi/4) under diag(2, 1/2) is (2c, s/2)
    p = normalize(diag(2.0))
    assert abs(angle_lift(p, PI / 4) - math.atan(0.25)) < 1e-12


def test_angle_lift_equivariance_and_monotone():
    rng = random.Random(5)
    for _ in range(200):
        p = random_psl(rng)
        x = rng.uniform(-4, 4)
        assert abs(angle_lift(p, x + PI) - angle_lift(p, x) - PI) < 1e-9
        assert angle_lift(p, x + 0.1) > angle_lift(p, x)
    g0 = angle_lift(p, 0.0)
    assert 0 <= g0 < PI


def test_calibration_anchor():
    assert cover_classify(CoverElement(normalize(Matrix2(1, 1, 0, 1)), 0)) \
        == ParPlus(0)


def test_center_powers():
    assert cover_classify(cover_mul(Z, Z)) == Center(2)
    assert cover_classify(cover_inv(Z)) == Center(-1)
    assert cover_classify(z_power(-3)) == Center(-3)
    assert central_index(z_power(5)) == 5


def test_rotation_translation_classes():
    rot = normalize(rotation(1.0))
    cls0 = cover_classify(CoverElement(rot, 0))
    assert cls0.tag == "Ell" and abs(cls0.n) == 1
    # shifting the lift index by one crosses the center and skips zero
    cls1 = cover_classify(CoverElement(rot, -1))
    assert cls1.tag == "Ell" and cls1.n == -cls0.n


def test_one_parameter_hyperbolic_is_hyp0():
    assert cover_classify(CoverElement(normalize(diag(math.e)), 0)) == Hyp(0)


def test_par_shift_classes():
    a = normalize(Matrix2(1, 1, 0, 1))
    assert cover_classify(lift_in_class(a, ParPlus(2))) == ParPlus(2)
    assert cover_classify(cover_mul(z_power(2), special_lift(a))) == ParPlus(2)


def test_product_of_positive_parabolic_lifts():
    a = special_lift(normalize(Matrix2(1, 1, 0, 1)))
    b = special_lift(normalize(Matrix2(1, 0, -5, 1)))
    prod = cover_mul(a, b)
    assert prod.base.rep.maxdiff(normalize(Matrix2(-4, 1, -5, 1)).rep) < 1e-12
    assert abs(sl_trace(prod)) == pytest.approx(3.0)
    assert cover_classify(prod) == Hyp(1)


def test_translations_add():
    t1 = normalize(rotation(0.5).inv())
    t2 = normalize(rotation(0.9).inv())
    prod = cover_mul(CoverElement(t1, 0), CoverElement(t2, 0))
    assert prod.lift_index == 0
    assert abs(angle_lift(prod.base, 0.0) - 1.4) < 1e-12


def test_inverse_round_trip():
    rng = random.Random(11)
    for _ in range(1000):
        x = random_cover(rng)
        assert cover_classify(cover_mul(x, cover_inv(x))) == Center(0)


def test_inverse_of_hyp1_is_hyp_minus1():
    x = lift_in_class(random_hyperbolic(random.Random(2)), Hyp(1))
    assert cover_classify(cover_inv(x)) == Hyp(-1)


def test_special_lift_hyperbolic():
    p = normalize(diag(2.0))
    assert cover_classify(special_lift(p)) == Hyp(0)


def test_special_lift_eval_elliptic():
    rot = normalize(rotation(0.8))
    assert cover_classify(special_lift(rot, "eval")) == Ell(1)


def test_special_lift_rejects_elliptic_in_closure_mode():
    with pytest.raises(EllipticHasNoHyp0Lift):
        special_lift(normalize(rotation(0.8)), "closure_hyp0")


def test_special_lift_identity():
    assert cover_classify(special_lift(normalize(Matrix2(1, 0, 0, 1)))) \
        == Center(0)


def test_homomorphism_and_associativity():
    rng = random.Random(3)
    for _ in range(2000):
        x, y, z = (random_cover(rng) for _ in range(3))
        xy = cover_mul(x, y)
        assert xy.base.rep.maxdiff((x.base @ y.base).rep) < 1e-9
        assert cover_equal(cover_mul(xy, z), cover_mul(x, cover_mul(y, z)), 1e-8)


def test_classification_conjugation_invariant():
    rng = random.Random(17)
    for _ in range(500):
        x, g = random_cover(rng), random_cover(rng)
        assert cover_classify(cover_conj(g, x)) == cover_classify(x)


def _expected_ell_shift(n1, m):
    n2 = n1 + m
    if n1 > 0 and n2 <= 0:
        n2 -= 1
    elif n1 < 0 and n2 >= 0:
        n2 += 1
    return n2


def test_central_shift_laws():
    rng = random.Random(23)
    for _ in range(300):
        x = random_cover(rng)
        cls = cover_classify(x)
        for m in range(-3, 4):
            shifted = cover_classify(cover_mul(z_power(m), x))
            assert shifted.tag == cls.tag
            if cls.tag == "Ell":
                assert shifted.n == _expected_ell_shift(cls.n, m)
            else:
                assert shifted.n == cls.n + m


def test_sl_projection_is_homomorphism_mod_center():
    rng = random.Random(31)
    for _ in range(300):
        x, y = random_cover(rng), random_cover(rng)
        lhs = sl_projection(cover_mul(x, y))
        rhs = sl_projection(x) @ sl_projection(y)
        assert min(lhs.maxdiff(rhs), lhs.maxdiff(-rhs)) < 1e-9
        # equality on the nose, not just up to sign
        assert lhs.maxdiff(rhs) < 1e-9


def test_sl_projection_of_z_is_minus_identity():
    assert sl_projection(Z).maxdiff(Matrix2(-1, 0, 0, -1)) < 1e-15


def test_trace_parity():
    rng = random.Random(37)
    for _ in range(500):
        n = rng.randint(-3, 3)
        x = lift_in_class(random_hyperbolic(rng), Hyp(n))
        assert math.copysign(1, sl_trace(x)) == (-1) ** (n % 2)


def test_offdiag_parabolic_sign_rules():
    rng = random.Random(41)
    for n in range(-2, 3):
        for sign in (1, -1):
            cls = ParPlus(n) if sign > 0 else ParMinus(n)
            for _ in range(1000):
                x = lift_in_class(random_parabolic(rng, sign), cls)
                m = sl_projection(x)
                if n % 2 == 0:
                    got = math.copysign(1, m.b) if m.b != 0 \
                        else -math.copysign(1, m.c)
                else:
                    got = -math.copysign(1, m.b) if m.b != 0 \
                        else math.copysign(1, m.c)
                assert got == sign


def test_offdiag_elliptic_sign_rules():
    rng = random.Random(43)
    for n in (-2, -1, 1, 2):
        for _ in range(1000):
            x = lift_in_class(random_elliptic(rng), Ell(n))
            m = sl_projection(x)
            assert m.b != 0 and m.c != 0
            if n % 2:
                assert math.copysign(1, n) == math.copysign(1, m.b) \
                    == -math.copysign(1, m.c)
            else:
                assert math.copysign(1, n) == -math.copysign(1, m.b) \
                    == math.copysign(1, m.c)


def test_commutator_image_membership():
    from psltilde.selftest import COMMUTATOR_IMAGE

    rng = random.Random(47)
    for _ in range(3000):
        x, y = random_cover(rng), random_cover(rng)
        comm = cover_mul(cover_mul(x, y),
                         cover_mul(cover_inv(x), cover_inv(y)))
        assert cover_classify(comm) in COMMUTATOR_IMAGE
