"""No linealidades f(n̂) con nombre."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np


@dataclass(frozen=True)
class NonlinearFn:
    eval: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.broadcast_to(np.asarray(self.eval(n), dtype=float), n.shape)


UNIT = NonlinearFn(lambda n: np.ones_like(n), "unit")
# oscilador "armonioso": f(n) = 1/√(n+1)
INV_SQRT = NonlinearFn(lambda n: 1.0 / np.sqrt(n + 1.0), "inv-sqrt")

NAMED_NONLINEARITIES: Dict[str, NonlinearFn] = {f.label: f for f in (UNIT, INV_SQRT)}
