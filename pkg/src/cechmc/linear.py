"""Sparse exact linear combinations.

Every vector in the package (ideal elements, Lie algebra elements, Tot and
Thom-Whitney elements, polynomial forms) is a :class:`LinComb`: a dict from
hashable keys to :class:`fractions.Fraction` coefficients with zeros dropped.
"""

from fractions import Fraction
from numbers import Rational


def frac(value):
    """Coerce ``value`` to a Fraction; strings are read as ``"p/q"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


class LinComb(dict):
    """Finitely supported map key -> Fraction, treated as immutable by convention."""

    __slots__ = ()

    def __init__(self, data=None):
        super().__init__()
        if data:
            items = data.items() if hasattr(data, "items") else data
            for key, c in items:
                c = frac(c)
                if c:
                    total = self.get(key, 0) + c
                    if total:
                        dict.__setitem__(self, key, total)
                    else:
                        dict.__delitem__(self, key)

    @classmethod
    def _raw(cls, d):
        # caller guarantees no zero values
        out = cls()
        dict.update(out, d)
        return out

    @classmethod
    def unit(cls, key):
        return cls._raw({key: Fraction(1)})

    def __add__(self, other):
        if not other:
            return self
        out = dict(self)
        for k, c in other.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return type(self)._raw(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)._raw({k: -c for k, c in self.items()})

    def scale(self, c):
        c = frac(c)
        if not c:
            return type(self)()
        return type(self)._raw({k: v * c for k, v in self.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.scale(1 / frac(c))

    def map_keys(self, fn):
        """Re-key every term; ``fn`` returns a new key or None to drop the term."""
        out = {}
        for k, c in self.items():
            nk = fn(k)
            if nk is None:
                continue
            v = out.get(nk, 0) + c
            if v:
                out[nk] = v
            else:
                out.pop(nk, None)
        return type(self)._raw(out)

    def filter(self, pred):
        return type(self)._raw({k: c for k, c in self.items() if pred(k)})

    def __hash__(self):
        return hash(frozenset(self.items()))

    def __repr__(self):
        if not self:
            return "0"
        parts = []
        for k in sorted(self, key=repr):
            parts.append(f"{self[k]}*{k!r}")
        return " + ".join(parts)


class Accumulator:
    """Mutable builder for a LinComb; avoids quadratic copying in hot loops."""

    __slots__ = ("data",)

    def __init__(self):
        self.data = {}

    def add(self, key, c):
        if not c:
            return
        v = self.data.get(key, 0) + c
        if v:
            self.data[key] = v
        else:
            del self.data[key]

    def add_comb(self, comb, c=1, rekey=None):
        for k, v in comb.items():
            self.add(k if rekey is None else rekey(k), v * c)

    def result(self, cls=LinComb):
        return cls._raw(self.data)


def fmt_rational(c):
    """Render as "p/q" (or "p" for integers) for reports."""
    c = frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
