from abc import ABC
import math
from typing import Iterable, List, Optional

from prft.utils.exceptions.PolicyError import PolicyError


class BasePolicy(ABC):
    """
    BasePolicy: reusable validation helpers for decoded input documents.
    """

    def require_fields(self, data: dict, required_fields: list):
        missing = [f for f in required_fields if f not in data]
        if missing:
            raise PolicyError(f"Missing fields: {', '.join(missing)}")

    def validate_type(self, field_name: str, value, type_):
        if not isinstance(value, type_):
            raise PolicyError(
                f"Field '{field_name}' must be type {type_.__name__}"
            )

    def validate_string(self, value: str, field: str, min_len=1):
        if not isinstance(value, str) or len(value.strip()) < min_len:
            raise PolicyError(f"{field} must be at least {min_len} characters long")
        return value.strip()

    def unknown_fields(self, data, allowed: dict, path: str = "") -> List[str]:
        """
        Every key of a nested document that the schema does not declare.

        `allowed` maps field names to a nested map (sub-document or list of
        sub-documents) or None (leaf).
        """
        if not isinstance(data, dict):
            return []
        unknown = []
        for key, value in data.items():
            where = f"{path}.{key}" if path else key
            if key not in allowed:
                unknown.append(where)
                continue
            nested = allowed[key]
            if nested is None:
                continue
            if isinstance(value, list):
                for index, item in enumerate(value):
                    unknown.extend(self.unknown_fields(item, nested, f"{where}[{index}]"))
            else:
                unknown.extend(self.unknown_fields(value, nested, where))
        return unknown

    def validate_choice(self, value, field_name: str, choices: Iterable) -> str:
        choices = tuple(choices)
        if value not in choices:
            raise PolicyError(f"{field_name} must be one of {', '.join(map(str, choices))}, got '{value}'")
        return value

    def validate_numeric_values(
        self,
        value,
        field_name: str = "Value",
        *,
        allow_zero: bool = False,
        allow_negative: bool = False,
    ) -> float:
        if value is None:
            raise PolicyError(f"{field_name} is required")

        try:
            number = float(value)
        except (TypeError, ValueError):
            raise PolicyError(f"{field_name} must be a number")

        if not math.isfinite(number):
            raise PolicyError(f"{field_name} must be finite")
        if allow_negative:
            return number
        if allow_zero:
            if number < 0:
                raise PolicyError(f"{field_name} cannot be negative")
        else:
            if number <= 0:
                raise PolicyError(f"{field_name} must be greater than zero")

        return number

    def validate_integer(self, value, field_name: str, *, minimum: Optional[int] = None) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            try:
                as_float = float(value)
            except (TypeError, ValueError):
                raise PolicyError(f"{field_name} must be an integer")
            if not as_float.is_integer():
                raise PolicyError(f"{field_name} must be an integer")
            value = int(as_float)
        if minimum is not None and value < minimum:
            raise PolicyError(f"{field_name} must be >= {minimum}")
        return int(value)

    def collect(self, violations: list, check, *args, **kwargs):
        """Run a validator and record its PolicyError instead of raising."""
        try:
            return check(*args, **kwargs)
        except PolicyError as error:
            violations.append(str(error))
            return None
