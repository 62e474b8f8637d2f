"""Minimal CPLEX LP-format writer for the covering models."""

from __future__ import annotations

from dataclasses import dataclass, field

Term = tuple[int, str]

# LP files cannot carry a bare constant in the objective; a variable fixed
# to 1 stands in for it.
CONST_VAR = "CONST_ONE"


def format_expr(terms: list[Term]) -> str:
    parts = []
    for coef, name in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        if not parts:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else f"0 {CONST_VAR}"


@dataclass
class LpModel:
    comments: list[str] = field(default_factory=list)
    objective: list[Term] = field(default_factory=list)
    constant: int = 0
    rows: list[tuple[str, list[Term], str, int]] = field(default_factory=list)
    generals: list[str] = field(default_factory=list)
    binaries: list[str] = field(default_factory=list)

    def add_row(self, name: str, terms: list[Term], sense: str, rhs: int) -> None:
        self.rows.append((name, terms, sense, rhs))

    def to_text(self) -> str:
        obj = list(self.objective)
        needs_const = self.constant != 0 or not any(c for c, _ in obj)
        if self.constant:
            obj.append((self.constant, CONST_VAR))
        lines = [f"\\ {c}" for c in self.comments]
        lines += ["Minimize", f" obj: {format_expr(obj)}", "Subject To"]
        for name, terms, sense, rhs in self.rows:
            lines.append(f" {name}: {format_expr(terms)} {sense} {rhs}")
        lines.append("Bounds")
        for v in self.generals:
            lines.append(f" {v} >= 0")
        if needs_const:
            lines.append(f" {CONST_VAR} = 1")
        if self.generals:
            lines.append("General")
            lines.extend(f" {v}" for v in self.generals)
        if self.binaries:
            lines.append("Binary")
            lines.extend(f" {v}" for v in self.binaries)
        lines.append("End")
        return "\n".join(lines) + "\n"
