"""
Published hydrogen-like level digits, used only for side-by-side comparison.

The generated table never reads from here; these values feed the
comparison column of the `table` command and the regression tests.
"""

from dataclasses import dataclass
from typing import Dict, List


@dataclass(frozen=True)
class PublishedRow:
    label: str
    epsilon: float
    epsilon_decimals: int
    delta_abs: float

    @property
    def epsilon_tolerance(self) -> float:
        """1 meV plus one unit in the last printed digit."""
        return 1e-3 + 10.0 ** (-self.epsilon_decimals)


PUBLISHED_TABLE: List[PublishedRow] = [
    PublishedRow("1s_{1/2}", -13.605, 3, 0.0),
    PublishedRow("2s_{1/2}", -3.40132, 5, 3.4150e-8),
    PublishedRow("2p_{1/2}", -3.40132, 5, 3.4150e-8),
    PublishedRow("2p_{3/2}", -3.40127, 5, 0.0),
    PublishedRow("3s_{1/2}", -1.51169, 5, 1.9405e-8),
    PublishedRow("3p_{1/2}", -1.51169, 5, 1.9405e-8),
    PublishedRow("3p_{3/2}", -1.51168, 5, 1.2128e-8),
    PublishedRow("3d_{3/2}", -1.51168, 5, 1.2128e-8),
    PublishedRow("3d_{5/2}", -1.51167, 5, 0.0),
]


def published_by_label() -> Dict[str, PublishedRow]:
    return {row.label: row for row in PUBLISHED_TABLE}
