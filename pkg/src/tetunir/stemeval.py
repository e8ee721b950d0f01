"""Intrinsic stemmer evaluation.

A ground-truth file groups words into concepts; a perfect stemmer
conflates exactly the members of each group.  From the groups we
compute the understemming index (UI: fraction of within-group word
pairs the stemmer fails to merge), the overstemming index (OI: fraction
of cross-group pairs it wrongly merges), the stemming weight SW =
OI/UI, and the error rate relative to truncation (ERRT): the distance
from the origin to the stemmer's (UI, OI) point divided by the distance
to the length-truncation baseline line along the same ray.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .stemmer import VARIANTS, make_stemmer

DEFAULT_TRUNCATION_LENGTHS = (7, 8, 9)


@dataclass(frozen=True)
class ConceptGroups:
    """Mapping root -> members; every word belongs to exactly one group."""

    groups: Mapping[str, Tuple[str, ...]]

    def __post_init__(self):
        if not self.groups:
            raise ValueError("concept groups are empty")
        seen: set = set()
        for root, members in self.groups.items():
            if not members:
                raise ValueError(f"group {root!r} has no members")
            for word in members:
                if word in seen:
                    raise ValueError(f"word {word!r} appears in more than one group")
                seen.add(word)

    @property
    def total_words(self) -> int:
        return sum(len(m) for m in self.groups.values())

    def words(self) -> List[str]:
        return [w for members in self.groups.values() for w in members]

    @classmethod
    def from_dict(cls, groups: Mapping[str, Iterable[str]]) -> "ConceptGroups":
        return cls({root: tuple(members) for root, members in groups.items()})

    @classmethod
    def parse(cls, text: str) -> "ConceptGroups":
        """Parse ``root: [member, member, ...]`` lines, lenient on quoting.

        Members may be wrapped in single quotes, double quotes, or
        backticks; internal apostrophes (glottal stops) survive because
        quotes are only stripped at the ends of each comma-separated
        piece.
        """
        groups: Dict[str, Tuple[str, ...]] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.match(r"^(.*?):\s*\[(.*)\]\s*,?$", line)
            if not m:
                raise ValueError(f"line {lineno}: expected `root: [members]`, got {line!r}")
            root = m.group(1).strip().strip("'\"`")
            members = tuple(
                piece.strip().strip("'\"`")
                for piece in m.group(2).split(",")
                if piece.strip().strip("'\"`")
            )
            if not root:
                raise ValueError(f"line {lineno}: empty group root")
            if root in groups:
                raise ValueError(f"line {lineno}: duplicate group root {root!r}")
            groups[root] = members
        return cls(groups)

    @classmethod
    def load(cls, path) -> "ConceptGroups":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())


@dataclass(frozen=True)
class PaiceReport:
    """UI/OI/SW plus the error rate relative to truncation."""

    ui: float
    oi: float
    sw: Optional[float]
    errt: Optional[float] = None


def paice_indices(
    groups: ConceptGroups, stem_fn: Callable[[str], str]
) -> Tuple[float, float, Optional[float]]:
    """Understemming/overstemming indices and the stemming weight.

    Degenerate cases: all groups singletons -> UI = 0; a single group ->
    OI = 0; SW is None when UI = 0.
    """
    if groups.total_words < 2:
        raise ValueError("need at least two words to evaluate a stemmer")

    total_words = groups.total_words
    gdmt = 0.0  # desired merges: within-group pairs
    gumt = 0.0  # unachieved merges: within-group pairs left unmerged
    gdnt = 0.0  # desired non-merges: cross-group pairs
    stem_members: Dict[str, Counter] = {}

    for root, members in groups.groups.items():
        n_g = len(members)
        gdmt += 0.5 * n_g * (n_g - 1)
        gdnt += 0.5 * n_g * (total_words - n_g)
        stem_counts = Counter(stem_fn(word) for word in members)
        gumt += 0.5 * sum(u * (n_g - u) for u in stem_counts.values())
        for stem, count in stem_counts.items():
            stem_members.setdefault(stem, Counter())[root] = count

    gwmt = 0.0  # wrongly merged: cross-group pairs sharing a stem
    for per_group in stem_members.values():
        n_s = sum(per_group.values())
        gwmt += 0.5 * sum(v * (n_s - v) for v in per_group.values())

    ui = gumt / gdmt if gdmt > 0 else 0.0
    oi = gwmt / gdnt if gdnt > 0 else 0.0
    sw = oi / ui if ui > 0 else None
    return ui, oi, sw


def truncation_baseline(groups: ConceptGroups, n: int) -> Tuple[float, float]:
    """UI/OI of the stemmer that keeps the first ``n`` letters only."""
    if n < 1:
        raise ValueError("truncation length must be >= 1")
    ui, oi, _ = paice_indices(groups, lambda word: word[:n])
    return ui, oi


def truncation_line(
    groups: ConceptGroups, lengths: Sequence[int] = DEFAULT_TRUNCATION_LENGTHS
) -> List[Tuple[float, float]]:
    return [truncation_baseline(groups, n) for n in lengths]


def errt(point: Tuple[float, float], line: Sequence[Tuple[float, float]]) -> float:
    """|O->P| / |O->T|, T = where the ray through P crosses the line.

    The truncation points form a polyline sorted by UI; its first and
    last segments are extended to infinity so shallow rays still
    intersect.  Raises when the ray misses entirely.
    """
    px, py = point
    if px == 0 and py == 0:
        raise ValueError("stemmer point is at the origin; ERRT is undefined")
    pts = sorted(set(line))
    if len(pts) < 2:
        raise ValueError("truncation line needs at least two distinct points")

    best_t: Optional[float] = None
    for i in range(len(pts) - 1):
        ax, ay = pts[i]
        bx, by = pts[i + 1]
        ex, ey = bx - ax, by - ay
        denom = px * ey - py * ex
        if abs(denom) < 1e-300:
            continue  # ray parallel to this segment
        t = (ax * ey - ay * ex) / denom
        s = (ax * py - ay * px) / denom
        s_min = -math.inf if i == 0 else 0.0
        s_max = math.inf if i == len(pts) - 2 else 1.0
        if t > 1e-12 and s_min <= s <= s_max:
            if best_t is None or t < best_t:
                best_t = t
    if best_t is None:
        raise ValueError(
            f"ray through ({px:.6g}, {py:.6g}) never crosses the truncation "
            f"line spanning {pts[0]}..{pts[-1]}"
        )
    return 1.0 / best_t


def evaluate_stemmers(
    groups: ConceptGroups,
    variants: Sequence[str] = VARIANTS,
    truncation_lengths: Sequence[int] = DEFAULT_TRUNCATION_LENGTHS,
) -> Dict[str, PaiceReport]:
    """UI/OI/SW/ERRT for each stemmer variant against one ground truth."""
    line = truncation_line(groups, truncation_lengths)
    reports = {}
    for variant in variants:
        ui, oi, sw = paice_indices(groups, make_stemmer(variant))
        point_errt = errt((ui, oi), line) if (ui, oi) != (0.0, 0.0) else 0.0
        reports[variant] = PaiceReport(ui, oi, sw, point_errt)
    return reports


def render_text(reports: Mapping[str, PaiceReport]) -> str:
    header = f"{'variant':<10}{'UI':>12}{'OI':>12}{'SW':>12}{'ERRT':>12}"
    lines = [header, "-" * len(header)]
    for variant, report in reports.items():
        sw = f"{report.sw:.6f}" if report.sw is not None else "-"
        errt_text = f"{report.errt:.6f}" if report.errt is not None else "-"
        lines.append(
            f"{variant:<10}{report.ui:>12.6f}{report.oi:>12.6f}{sw:>12}{errt_text:>12}"
        )
    return "\n".join(lines) + "\n"


def render_csv(reports: Mapping[str, PaiceReport]) -> str:
    lines = ["variant,ui,oi,sw,errt"]
    for variant, report in reports.items():
        sw = f"{report.sw:.6f}" if report.sw is not None else ""
        errt_text = f"{report.errt:.6f}" if report.errt is not None else ""
        lines.append(f"{variant},{report.ui:.6f},{report.oi:.6f},{sw},{errt_text}")
    return "\n".join(lines) + "\n"
