"""
Label handling - parameter, action and observation names.

Numeric labels are stored as exact rationals so that comparisons such as
"strictly below the support" never depend on floating-point ties.
"""
import math
from fractions import Fraction
from typing import Any, List, Sequence, Union

Label = Union[Fraction, str]


def normalize_label(value: Any) -> Label:
    """
    Convert a raw label into its canonical form.

    Integers, floats and rational strings ("1/3", "0.25") become
    ``Fraction``; any other string is kept verbatim.

    Raises:
        ValueError: If the value is a boolean, a non-finite float or of an
            unsupported type.
    """
    if isinstance(value, bool):
        raise ValueError(f"Boolean is not a valid label: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Label must be finite, got {value!r}")
        # repr gives the shortest round-tripping decimal, so 0.1 -> 1/10
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            return value
    raise ValueError(f"Unsupported label type: {type(value).__name__}")


def normalize_labels(values: Sequence[Any]) -> List[Label]:
    return [normalize_label(v) for v in values]


def label_to_json(label: Label) -> Union[int, str]:
    """Integral rationals print as integers, other rationals as "p/q"."""
    if isinstance(label, Fraction):
        if label.denominator == 1:
            return label.numerator
        return f"{label.numerator}/{label.denominator}"
    return label


def find_duplicates(labels: Sequence[Label]) -> List[Label]:
    seen = set()
    duplicates = []
    for label in labels:
        if label in seen and label not in duplicates:
            duplicates.append(label)
        seen.add(label)
    return duplicates
