"""Ready-made polynomial systems used by the demos and the test-suite."""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, PolySystem, parse_poly, substitute_line

CLEBSCH_CUBIC = (
    "81*(x^3 + y^3 + z^3) - 189*(x^2*y + x^2*z + x*y^2 + x*z^2 + y^2*z + y*z^2)"
    " + 54*x*y*z + 126*(x*y + x*z + y*z) - 9*(x^2 + y^2 + z^2) - 9*(x + y + z) + 1"
)


def curves7() -> PolySystem:
    """Two plane cubics meeting in seven real points, two of them rational."""
    names = ("x", "y")
    f = parse_poly("-7*x - 9*y - 10*x^2 + 17*x*y + 10*y^2 + 16*x^2*y - 17*x*y^2", names)
    g = parse_poly("2*x - 5*y + 5*x^2 + 5*x*y + 5*y^2 - 6*x^2*y - 6*x*y^2", names)
    return PolySystem((f, g), names)


def four_points() -> PolySystem:
    """x^2 + y^2 - 2 = 3x^2 - y^2 - 2 = 0, solved by (+-1, +-1)."""
    names = ("x", "y")
    return PolySystem((parse_poly("x^2 + y^2 - 2", names),
                       parse_poly("3*x^2 - y^2 - 2", names)), names)


def sparse_pair(a=(1, 2, 3), b=(1, -2, 3, 5)) -> PolySystem:
    """f = a0 + a1 x^3 y + a2 x y^3,  g = b0 + b1 x^2 + b2 y^2 + b3 x^2 y^2."""
    f = Polynomial(2, {(0, 0): a[0], (3, 1): a[1], (1, 3): a[2]})
    g = Polynomial(2, {(0, 0): b[0], (2, 0): b[1], (0, 2): b[2], (2, 2): b[3]})
    return PolySystem((f, g), ("x", "y"))


def robot_arm(L1=1, L2=1, a=1, b=1) -> PolySystem:
    """Elbow positions of a planar two-link arm whose hand touches (a, b)."""
    names = ("x", "y")
    x = Polynomial.variable(0, 2)
    y = Polynomial.variable(1, 2)
    L1, L2, a, b = (Fraction(v) for v in (L1, L2, a, b))
    return PolySystem((x * x + y * y - L1 * L1,
                       (x - a) ** 2 + (y - b) ** 2 - L2 * L2), names)


def wilkinson(d: int = 12) -> PolySystem:
    """(x - 1)(x - 2)...(x - d)."""
    x = Polynomial.variable(0, 1)
    f = Polynomial.constant(1, 1)
    for k in range(1, d + 1):
        f = f * (x - k)
    return PolySystem((f,), ("x",))


def clebsch_cubic() -> Polynomial:
    return parse_poly(CLEBSCH_CUBIC, ("x", "y", "z"))


def clebsch_lines() -> PolySystem:
    """Lines on the Clebsch surface as a square system in (a1, a2, b1, b2).

    The line ``a + t*b`` lies on the surface iff the four t-coefficients of
    the restricted cubic vanish.  The redundancy of the parametrization is
    removed with ``a3 = -(7 + a1 + 3*a2)/5`` and ``b3 = -(11 + 3*b1 + 5*b2)/7``.
    """
    coeffs = substitute_line(clebsch_cubic())
    names = ("a1", "a2", "b1", "b2")
    a1, a2, b1, b2 = (Polynomial.variable(i, 4) for i in range(4))
    a3 = (a1 + a2 * 3 + 7) * Fraction(-1, 5)
    b3 = (b1 * 3 + b2 * 5 + 11) * Fraction(-1, 7)
    images = [a1, a2, a3, b1, b2, b3]
    return PolySystem(tuple(c.compose(images) for c in coeffs), names)
