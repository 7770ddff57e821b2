"""Generator bookkeeping for systems built from two scalar operators."""

from dataclasses import dataclass


@dataclass(frozen=True)
class ModuleBasis:
    """Generators w[i, j] of the module spanned by the iterates of f.

    For a delta/sigma pair w[i, j] = sigma**j delta**i f with i < n, j < m; for two sigmas
    w[i, j] = sigma_1**i sigma_2**j f with i < m1, j < m2. Matrix index r = i * cols + j.
    """

    kind: str  # "dd" or "ss"
    rows: int
    cols: int

    @property
    def dimension(self) -> int:
        return self.rows * self.cols

    def index(self, i: int, j: int) -> int:
        return i * self.cols + j

    def label(self, r: int) -> tuple[int, int]:
        return divmod(r, self.cols)

    def labels(self) -> list[tuple[int, int]]:
        return [self.label(r) for r in range(self.dimension)]

    def describe(self, r: int) -> str:
        i, j = self.label(r)
        if self.kind == "dd":
            return f"sigma^{j} delta^{i} f"
        return f"sigma1^{i} sigma2^{j} f"

    def manifest(self) -> list[dict]:
        """Index-to-generator table written next to built systems."""
        return [
            {"index": r, "i": i, "j": j, "generator": self.describe(r)}
            for r, (i, j) in enumerate(self.labels())
        ]
