"""Cone geometry for a real quadratic field.

Field elements are ``a + b*sqrt(D)`` with rational a, b.  Lattice elements
are coordinate pairs in a fixed cone basis V = {v1, v2}.  A Cassou-Nogues
ideal is carried only through its quotient map phi: O -> Z/N.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path


class LatticeError(ValueError):
    pass


def _frac(v) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.replace(" ", ""))


@dataclass(frozen=True)
class QuadNumber:
    """a + b*sqrt(d)."""

    a: Fraction
    b: Fraction
    d: int

    def __add__(self, o):
        return QuadNumber(self.a + o.a, self.b + o.b, self.d)

    def __sub__(self, o):
        return QuadNumber(self.a - o.a, self.b - o.b, self.d)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return QuadNumber(self.a * o, self.b * o, self.d)
        return QuadNumber(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        c = self.conjugate()
        return QuadNumber(c.a / n, c.b / n, self.d)


@dataclass(frozen=True)
class LatticeElement:
    coords: tuple[Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coords", (Fraction(self.coords[0]), Fraction(self.coords[1])))

    @classmethod
    def of(cls, c1, c2) -> "LatticeElement":
        return cls((_frac(c1), _frac(c2)))

    def __add__(self, o):
        return LatticeElement((self.coords[0] + o.coords[0], self.coords[1] + o.coords[1]))

    def __sub__(self, o):
        return LatticeElement((self.coords[0] - o.coords[0], self.coords[1] - o.coords[1]))

    def scale(self, c) -> "LatticeElement":
        c = Fraction(c)
        return LatticeElement((self.coords[0] * c, self.coords[1] * c))

    def shift(self, l1: int, l2: int) -> "LatticeElement":
        return LatticeElement((self.coords[0] + l1, self.coords[1] + l2))

    def denominator(self) -> int:
        return math.lcm(self.coords[0].denominator, self.coords[1].denominator)

    def __str__(self):
        a, b = self.coords
        if b == 0:
            return str(a)
        tail = f"{b}*e"
        if a == 0:
            return tail
        return f"{a}{tail}" if b < 0 else f"{a}+{tail}"


def parse_lattice(text: str) -> LatticeElement:
    """Parse ``a+b*e`` (either part may be omitted, e.g. ``1/2*e`` or ``3``)."""
    s = text.replace(" ", "")
    if not s:
        raise LatticeError("empty lattice argument")
    terms = []
    start = 0
    for i in range(1, len(s) + 1):
        if i == len(s) or (s[i] in "+-" and s[i - 1] not in "*/"):
            terms.append(s[start:i])
            start = i
    c1 = c2 = Fraction(0)
    for t in terms:
        try:
            if t.endswith("e"):
                coef = t[:-1].rstrip("*")
                if coef in ("", "+"):
                    c2 += 1
                elif coef == "-":
                    c2 -= 1
                else:
                    c2 += Fraction(coef)
            else:
                c1 += Fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise LatticeError(f"cannot parse lattice argument {text!r}") from exc
    return LatticeElement((c1, c2))


@dataclass(frozen=True)
class IdealClass:
    label: str
    generator: QuadNumber
    genus_sign: int
    lattice_basis: tuple[LatticeElement, LatticeElement]
    points: tuple[LatticeElement, ...]


@dataclass(frozen=True)
class ConeData:
    label: str
    radicand: int
    discriminant: int
    basis: tuple[QuadNumber, QuadNumber]
    norm_form: tuple[int, int, int]
    face_flags: tuple[bool, bool] = (True, False)
    classes: tuple[IdealClass, ...] = ()

    @property
    def key(self) -> str:
        blob = json.dumps(
            {
                "d": self.radicand,
                "basis": [[str(v.a), str(v.b)] for v in self.basis],
                "form": list(self.norm_form),
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @property
    def symmetric(self) -> bool:
        return self.norm_form[0] == self.norm_form[2]

    def to_field(self, x: LatticeElement) -> QuadNumber:
        v1, v2 = self.basis
        return v1 * x.coords[0] + v2 * x.coords[1]

    def from_field(self, z: QuadNumber) -> LatticeElement:
        v1, v2 = self.basis
        det = v1.a * v2.b - v1.b * v2.a
        c1 = (z.a * v2.b - z.b * v2.a) / det
        c2 = (v1.a * z.b - v1.b * z.a) / det
        return LatticeElement((c1, c2))

    def basis_index(self) -> Fraction:
        """|det| of V against the integral basis of O."""
        v1, v2 = self.basis
        det = v1.a * v2.b - v1.b * v2.a
        # O has Z-basis {1, w}; w = sqrt(D) or (1+sqrt(D))/2
        if self.radicand % 4 == 1:
            det *= 2
        return abs(det)


def norm_form(cone: ConeData, a, b) -> Fraction:
    A, B, C = cone.norm_form
    a, b = Fraction(a), Fraction(b)
    return A * a * a + B * a * b + C * b * b


def _in_ring(z: QuadNumber) -> bool:
    if z.d % 4 == 1:
        # a + b sqrt(d) in Z[(1+sqrt d)/2]  <=>  2a, 2b integers of equal parity
        a2, b2 = 2 * z.a, 2 * z.b
        return a2.denominator == 1 and b2.denominator == 1 and (a2 - b2) % 2 == 0
    return z.a.denominator == 1 and z.b.denominator == 1


@dataclass(frozen=True)
class CNIdeal:
    """Cassou-Nogues ideal given by phi(a + b sqrt(D)) = a + b*root mod N."""

    N: int
    phi_images: tuple[int, int]
    root: int | None = None
    radicand: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.N <= 1:
            raise LatticeError("N must exceed 1")
        u1, u2 = (x % self.N for x in self.phi_images)
        object.__setattr__(self, "phi_images", (u1, u2))
        if math.gcd(u1, self.N) != 1 or math.gcd(u2, self.N) != 1:
            raise LatticeError(f"basis images {self.phi_images} are not units mod {self.N}")

    @classmethod
    def from_root(cls, cone: ConeData, N: int, root: int, label: str = "") -> "CNIdeal":
        if (root * root - cone.radicand) % N:
            raise LatticeError(f"{root}^2 is not {cone.radicand} mod {N}")
        images = tuple(_phi_field(v, N, root) for v in cone.basis)
        return cls(N, images, root, cone.radicand, label)

    def phi_field(self, z: QuadNumber) -> int:
        if self.root is None:
            raise LatticeError("ideal was built without a root; field residues unavailable")
        return _phi_field(z, self.N, self.root)


def _phi_field(z: QuadNumber, N: int, root: int) -> int:
    def red(c: Fraction) -> int:
        if math.gcd(c.denominator, N) != 1:
            raise LatticeError(f"{c} is not {N}-integral")
        return c.numerator * pow(c.denominator, -1, N)

    return (red(z.a) + red(z.b) * root) % N


def cn_residue(ideal: CNIdeal, x: LatticeElement) -> int:
    N = ideal.N
    total = 0
    for c, u in zip(x.coords, ideal.phi_images):
        if math.gcd(c.denominator, N) != 1:
            raise LatticeError(f"coordinate {c} is not invertible mod {N}")
        total += c.numerator * pow(c.denominator, -1, N) * u
    return total % N


def _in_lattice(x: LatticeElement, basis: tuple[LatticeElement, LatticeElement]) -> bool:
    (a, b), (c, d) = basis[0].coords, basis[1].coords
    det = a * d - b * c
    s = (x.coords[0] * d - x.coords[1] * c) / det
    t = (a * x.coords[1] - b * x.coords[0]) / det
    return s.denominator == 1 and t.denominator == 1


def lattice_index(basis: tuple[LatticeElement, LatticeElement]) -> Fraction:
    """[L : Z v1 + Z v2] for a lattice L containing Z v1 + Z v2."""
    (a, b), (c, d) = basis[0].coords, basis[1].coords
    det = a * d - b * c
    if det == 0:
        raise LatticeError("degenerate lattice basis")
    return 1 / abs(det)


def in_box(x: LatticeElement, face_flags=(True, False)) -> bool:
    for c, closed_top in zip(x.coords, face_flags):
        if closed_top and not 0 < c <= 1:
            return False
        if not closed_top and not 0 <= c < 1:
            return False
    return True


def reduce_to_box(x: LatticeElement, face_flags=(True, False)) -> LatticeElement:
    out = []
    for c, closed_top in zip(x.coords, face_flags):
        if closed_top:
            out.append(c - math.ceil(c) + 1)
        else:
            out.append(c - math.floor(c))
    return LatticeElement(tuple(out))


def enumerate_box(member, denominator: int, face_flags=(True, False)) -> list[LatticeElement]:
    """All points with coordinates in (1/denominator)Z inside the box satisfying ``member``."""
    ranges = []
    for closed_top in face_flags:
        ranges.append(range(1, denominator + 1) if closed_top else range(0, denominator))
    pts = []
    for i in ranges[0]:
        for j in ranges[1]:
            x = LatticeElement((Fraction(i, denominator), Fraction(j, denominator)))
            if member(x):
                pts.append(x)
    return pts


def parallelotope_points(cone: ConeData, class_index: int, face_flags=None) -> list[LatticeElement]:
    flags = cone.face_flags if face_flags is None else tuple(face_flags)
    basis = cone.classes[class_index].lattice_basis
    lattice_index(basis)
    den = math.lcm(*(v.denominator() for v in basis))
    return enumerate_box(lambda x: _in_lattice(x, basis), den, flags)


def tau_p_apply(points, p: int, direction: str = "forward", face_flags=(True, False)) -> dict:
    """The bijection of the point list induced by multiplication by p (or its inverse)."""
    points = list(points)
    exponent = math.lcm(1, *(x.denominator() for x in points))
    if math.gcd(p, exponent) != 1:
        raise LatticeError(f"{p} is not invertible on a quotient of exponent {exponent}")
    if direction == "forward":
        k = p
    elif direction == "inverse":
        k = pow(p, -1, exponent) if exponent > 1 else 1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    lookup = set(points)
    mapping = {}
    for x in points:
        y = reduce_to_box(x.scale(k), face_flags)
        if y not in lookup:
            raise LatticeError(f"{y} is not in the point list")
        mapping[x] = y
    if len(set(mapping.values())) != len(points):
        raise LatticeError("multiplication by p is not a bijection of the point list")
    return mapping


@dataclass(frozen=True)
class Config:
    cone: ConeData
    ideals: dict[int, CNIdeal] = field(default_factory=dict)
    genus: tuple[int, int] | None = None

    def ideal(self, N: int) -> CNIdeal:
        try:
            return self.ideals[N]
        except KeyError:
            raise LatticeError(f"no Cassou-Nogues ideal with N={N} configured") from None


def _quad(pair, d) -> QuadNumber:
    return QuadNumber(_frac(pair[0]), _frac(pair[1]), d)


def parse_config(doc: dict) -> Config:
    try:
        fld = doc["field"]
        d = int(fld["radicand"])
        basis = tuple(_quad(v, d) for v in doc["cone"]["basis"])
        form = tuple(int(c) for c in doc["cone"]["norm_form"])
        flags = tuple(bool(f) for f in doc["cone"].get("face_flags", [True, False]))
        cone = ConeData(fld["label"], d, int(fld["discriminant"]), basis, form, flags)
        _check_norm_form(cone)
        classes = []
        for c in doc["classes"]:
            gen = _quad(c["generator"], d)
            inv = gen.inverse()
            lb = tuple(cone.from_field(inv * v) for v in basis)
            pts = tuple(LatticeElement.of(*pt) for pt in c["points"])
            classes.append(IdealClass(c["label"], gen, int(c["genus_sign"]), lb, pts))
        cone = ConeData(cone.label, d, cone.discriminant, basis, form, flags, tuple(classes))
        for i, cl in enumerate(cone.classes):
            found = parallelotope_points(cone, i)
            if set(found) != set(cl.points):
                raise LatticeError(
                    f"class {cl.label}: configured points {[str(x) for x in cl.points]} "
                    f"differ from enumeration {[str(x) for x in found]}"
                )
        ideals = {}
        for item in doc.get("ideals", []):
            ideal = CNIdeal.from_root(cone, int(item["N"]), int(item["root"]), item.get("label", ""))
            ideals[ideal.N] = ideal
        genus = tuple(doc["genus"][k] for k in ("D1", "D2")) if "genus" in doc else None
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, LatticeError):
            raise
        raise LatticeError(f"malformed configuration: {exc}") from exc
    return Config(cone, ideals, genus)


def _check_norm_form(cone: ConeData) -> None:
    for a, b in [(1, 0), (0, 1), (1, 1), (2, -1), (3, 5)]:
        if cone.to_field(LatticeElement((Fraction(a), Fraction(b)))).norm() != norm_form(cone, a, b):
            raise LatticeError("norm form does not match the basis")
    if cone.basis_index() == 0:
        raise LatticeError("degenerate cone basis")


def load_config(path: str | Path | None = None) -> Config:
    if path is None:
        text = resources.files("shintani_padic").joinpath("data/qsqrt3.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatticeError(f"configuration is not valid JSON: {exc}") from exc
    return parse_config(doc)


@lru_cache(maxsize=1)
def default_config() -> Config:
    return load_config()
