import numpy as np

from beltrami.lib.r3_fields.fields import R3Field


class Vortex(R3Field):
    """
    Unit drift along x_3 with rotation about a vertical axis at angular
    speed rate + twist r^2.
    """

    max_order = 0

    def __init__(
        self,
        rate: float = 1.0,
        twist: float = 0.0,
        axis: tuple[float, float] = (0.0, 0.0),
    ) -> None:
        self.rate = rate
        self.twist = twist
        self.axis = axis

    def _jets(self, points: np.ndarray, order: int) -> list[np.ndarray]:
        x = points[:, 0] - self.axis[0]
        y = points[:, 1] - self.axis[1]
        speed = self.rate + self.twist * (x**2 + y**2)
        return [np.stack([-speed * y, speed * x, np.ones_like(x)], -1)]
