"""Laurent polynomials in A with integer coefficients."""

from collections import Counter
from typing import Any, Literal, Self

import sympy as sp
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator

A = sp.Symbol("A")


def _exact_int(value: object, what: str) -> int:
    """Accept an int or a string of decimal digits; floats are never truncated."""
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str) and value.removeprefix("-").removeprefix("+").isdecimal():
        return int(value)
    msg = f"{what} must be an integer, got {value!r}"
    raise ValueError(msg)


class RingElem(BaseModel):
    """An exact Laurent polynomial in ``A``.

    ``terms`` holds ``(exponent, coefficient)`` pairs sorted by exponent with no
    zero coefficients, so equality of values is equality of models.
    Coefficients serialize as decimal strings.
    """

    var: Literal["A"] = "A"
    terms: tuple[tuple[int, int], ...] = ()
    model_config = ConfigDict(frozen=True)

    @field_validator("terms", mode="before")
    @classmethod
    def _parse_coefficients(cls, value: Any) -> Any:  # noqa: ANN401
        if isinstance(value, dict):
            value = list(value.items())
        if isinstance(value, list | tuple):
            return tuple(
                (_exact_int(exp, "exponent"), _exact_int(coeff, "coefficient"))
                for exp, coeff in value
            )
        return value

    @field_validator("terms")
    @classmethod
    def _canonical_terms(cls, terms: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
        combined: Counter[int] = Counter()
        for exp, coeff in terms:
            combined[exp] += coeff
        return tuple(sorted((exp, coeff) for exp, coeff in combined.items() if coeff))

    @field_serializer("terms")
    def _coefficients_as_strings(
        self, terms: tuple[tuple[int, int], ...]
    ) -> list[tuple[int, str]]:
        return [(exp, str(coeff)) for exp, coeff in terms]

    @classmethod
    def from_int(cls, value: int) -> Self:
        """Embed an integer."""
        return cls(terms=((0, value),))

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> Self:
        """Return ``coeff * A**exp``."""
        return cls(terms=((exp, coeff),))

    @classmethod
    def zero(cls) -> Self:
        """Return the additive identity."""
        return cls()

    @classmethod
    def one(cls) -> Self:
        """Return the multiplicative identity."""
        return cls.from_int(1)

    @classmethod
    def from_sympy(cls, expr: sp.Expr) -> Self:
        """Convert an expression that expands to a Laurent polynomial in ``A``.

        Raises
        ------
        ValueError
            If a term is not an integer multiple of a power of ``A``.
        """
        expanded = sp.expand(expr)
        if expanded == 0:
            return cls()
        terms = []
        for monomial, coeff in expanded.as_coefficients_dict().items():
            if monomial == 1:
                exp = 0
            else:
                base, exp = monomial.as_base_exp()
                if base != A or not exp.is_integer:
                    msg = f"Not a Laurent monomial in A: {monomial}"
                    raise ValueError(msg)
            if not coeff.is_integer:
                msg = f"Non-integer coefficient {coeff}"
                raise ValueError(msg)
            terms.append((int(exp), int(coeff)))
        return cls(terms=tuple(terms))

    def to_sympy(self) -> sp.Expr:
        """Return the value as a sympy expression."""
        return sp.Add(*(coeff * A**exp for exp, coeff in self.terms))

    @property
    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self.terms

    def coefficient(self, exp: int) -> int:
        """Coefficient of ``A**exp``."""
        return dict(self.terms).get(exp, 0)

    def __add__(self, other: "RingElem") -> "RingElem":
        """Sum of two values."""
        return RingElem(terms=self.terms + other.terms)

    def __neg__(self) -> "RingElem":
        """Additive inverse."""
        return RingElem(terms=tuple((exp, -coeff) for exp, coeff in self.terms))

    def __sub__(self, other: "RingElem") -> "RingElem":
        """Difference of two values."""
        return self + (-other)

    def __mul__(self, other: "RingElem") -> "RingElem":
        """Product of two values."""
        return RingElem.from_sympy(self.to_sympy() * other.to_sympy())

    def scale(self, factor: int) -> "RingElem":
        """Multiply by an integer."""
        return RingElem(terms=tuple((exp, factor * coeff) for exp, coeff in self.terms))

    def shift(self, exp: int) -> "RingElem":
        """Multiply by ``A**exp``."""
        return RingElem(terms=tuple((e + exp, coeff) for e, coeff in self.terms))

    def __str__(self) -> str:
        """Human-readable form."""
        return str(self.to_sympy())


def ring_sum(values: list[RingElem]) -> RingElem:
    """Sum a list of values."""
    return RingElem(terms=tuple(term for value in values for term in value.terms))
