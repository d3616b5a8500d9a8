"""Small ordered table used by sweeps, with CSV serialization."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["SweepTable"]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass
class SweepTable:
    """Columnar sweep result: one parameter column plus named metrics.

    Column order is the declaration order; CSV rows follow the grid
    order, the parameter always first.
    """

    param_name: str
    param_values: list[float] = field(default_factory=list)
    columns: dict[str, list[float]] = field(default_factory=dict)

    def add_row(self, param_value: float, **metrics: float) -> None:
        if not self.columns:
            for name in metrics:
                self.columns[name] = []
        elif set(metrics) != set(self.columns):
            raise ValueError("row metrics do not match existing columns")
        self.param_values.append(float(param_value))
        for name in self.columns:
            self.columns[name].append(float(metrics[name]))

    @property
    def n_rows(self) -> int:
        return len(self.param_values)

    def column(self, name: str) -> list[float]:
        if name == self.param_name:
            return list(self.param_values)
        return list(self.columns[name])

    def header(self) -> list[str]:
        return [self.param_name, *self.columns.keys()]

    def to_csv(self) -> str:
        lines = [",".join(self.header())]
        for i, p in enumerate(self.param_values):
            cells = [_fmt(p)] + [_fmt(col[i]) for col in self.columns.values()]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
