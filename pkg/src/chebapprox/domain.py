"""Finite domains: explicit point sets, box grids, polar disk grids, file I/O.

Continuous regions enter the library only through a discretization, so every
downstream guarantee (optimality, deviation sets, dimensions) is stated with
respect to the finite point set actually stored here.  Points are deduplicated
at construction: pairs closer than 1e-12 collapse to the first occurrence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "Domain",
    "DomainError",
    "make_domain",
    "box_grid",
    "disk_grid",
    "circle_boundary",
    "with_points",
    "load_domain",
    "save_domain",
    "domain_to_json",
    "domain_from_json",
    "find_index",
    "EXPLICIT",
    "BOX_GRID",
    "DISK_GRID",
    "CIRCLE_BOUNDARY",
    "UNION",
    "FILE_IMPORT",
]

EXPLICIT = "explicit"
BOX_GRID = "box_grid"
DISK_GRID = "disk_grid"
CIRCLE_BOUNDARY = "circle_boundary"
UNION = "union"
FILE_IMPORT = "file_import"

_DEDUP_TOL = 1e-12


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class Domain:
    n: int
    points: np.ndarray          # shape (k, n), read-only
    labels: tuple               # one entry per point, str or None
    provenance: str = EXPLICIT

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        pts = pts.reshape(-1, self.n)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        labels = tuple(self.labels) if self.labels else (None,) * pts.shape[0]
        if len(labels) != pts.shape[0]:
            raise DomainError("one label per point required")
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def label_of(self, index: int):
        return self.labels[index]


def _dedup(points: np.ndarray, labels: list) -> tuple[np.ndarray, list]:
    if points.shape[0] <= 1:
        return points, labels
    tree = cKDTree(points)
    drop = set()
    for i, j in sorted(tree.query_pairs(_DEDUP_TOL)):
        a, b = min(i, j), max(i, j)
        if a in drop:
            continue
        drop.add(b)
        if labels[a] is None and labels[b] is not None:
            labels[a] = labels[b]
    if not drop:
        return points, labels
    keep = [i for i in range(points.shape[0]) if i not in drop]
    return points[keep], [labels[i] for i in keep]


def make_domain(points, labels=None, provenance: str = EXPLICIT) -> Domain:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise DomainError("empty domain")
    lab = list(labels) if labels is not None else [None] * pts.shape[0]
    if len(lab) != pts.shape[0]:
        raise DomainError("one label per point required")
    pts, lab = _dedup(pts, lab)
    return Domain(n=pts.shape[1], points=pts, labels=tuple(lab), provenance=provenance)


def box_grid(lo, hi, per_axis: int) -> Domain:
    """Uniform tensor grid on the box [lo, hi], corners included, per_axis^n points."""
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != hi.shape:
        raise DomainError("lo and hi must have the same dimension")
    if per_axis < 2:
        raise DomainError("per_axis must be >= 2")
    if np.any(lo >= hi):
        raise DomainError("degenerate box: lo must be < hi componentwise")
    axes = [np.linspace(lo[i], hi[i], per_axis) for i in range(lo.size)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, lo.size)
    return make_domain(pts, provenance=BOX_GRID)


def disk_grid(center, radius: float, rings: int, per_ring: int) -> Domain:
    """Polar grid on a planar disk: center plus ``rings`` circles of ``per_ring`` points.

    Ring k has radius ``radius * k / rings``, so the boundary circle is always
    present; angles are ``2*pi*j / per_ring``.
    """
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.size != 2:
        raise DomainError("disk grids are planar; center must lie in R^2")
    if radius <= 0:
        raise DomainError("radius must be positive")
    if rings < 1 or per_ring < 3:
        raise DomainError("need rings >= 1 and per_ring >= 3")
    pts = [c]
    for k in range(1, rings + 1):
        r = radius * k / rings
        for j in range(per_ring):
            a = 2.0 * math.pi * j / per_ring
            pts.append(c + r * np.array([math.cos(a), math.sin(a)]))
    return make_domain(np.array(pts), provenance=DISK_GRID)


def circle_boundary(center, radius: float, count: int) -> Domain:
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.size != 2:
        raise DomainError("circles are planar; center must lie in R^2")
    if radius <= 0 or count < 3:
        raise DomainError("need radius > 0 and count >= 3")
    angles = 2.0 * math.pi * np.arange(count) / count
    pts = c + radius * np.column_stack([np.cos(angles), np.sin(angles)])
    return make_domain(pts, provenance=CIRCLE_BOUNDARY)


def with_points(base: Domain, extra, labels=None) -> Domain:
    """Union of ``base`` with extra points (deduplicated, labels preserved)."""
    extra = np.atleast_2d(np.asarray(extra, dtype=float))
    if extra.size and extra.shape[1] != base.n:
        raise DomainError(f"extra points have dimension {extra.shape[1]}, domain is R^{base.n}")
    lab = list(labels) if labels is not None else [None] * extra.shape[0]
    if len(lab) != extra.shape[0]:
        raise DomainError("one label per extra point required")
    pts = np.vstack([base.points, extra]) if extra.size else base.points
    return make_domain(pts, labels=list(base.labels) + lab, provenance=UNION)


def find_index(domain: Domain, point, tol: float = 1e-9) -> int:
    """Index of the domain point nearest to ``point``; error if beyond ``tol``."""
    p = np.asarray(point, dtype=float).reshape(-1)
    d = np.linalg.norm(domain.points - p, axis=1)
    i = int(np.argmin(d))
    if d[i] > tol:
        raise DomainError(f"no domain point within {tol} of {p.tolist()}")
    return i


# -- serialization ----------------------------------------------------------


def domain_to_json(domain: Domain) -> str:
    payload = {"n": domain.n, "points": [list(map(float, p)) for p in domain.points]}
    if any(l is not None for l in domain.labels):
        payload["labels"] = [l if l is not None else "" for l in domain.labels]
    return json.dumps(payload, sort_keys=True)


def domain_from_json(text: str) -> Domain:
    payload = json.loads(text)
    points = payload["points"]
    if not points:
        raise DomainError("empty domain")
    labels = payload.get("labels")
    if labels is not None:
        labels = [l if l else None for l in labels]
    dom = make_domain(points, labels=labels, provenance=EXPLICIT)
    if dom.n != int(payload["n"]):
        raise DomainError(f"points have dimension {dom.n}, header says {payload['n']}")
    return dom


def _parse_csv(lines) -> Domain:
    rows, labels = [], []
    width = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            float(cells[-1])
            coord_cells, label = cells, None
        except ValueError:
            coord_cells, label = cells[:-1], cells[-1]
        try:
            coords = [float(c) for c in coord_cells]
        except ValueError as exc:
            raise DomainError(f"non-numeric coordinate at line {lineno}: {line!r}") from exc
        if not coords:
            raise DomainError(f"no coordinates at line {lineno}")
        if width is None:
            width = len(coords)
        elif len(coords) != width:
            raise DomainError(f"ragged row at line {lineno}: expected {width} coordinates")
        rows.append(coords)
        labels.append(label)
    if not rows:
        raise DomainError("empty domain")
    return make_domain(rows, labels=labels, provenance=FILE_IMPORT)


def load_domain(source, fmt: str | None = None) -> Domain:
    """Load a Domain from a path or open stream (csv: coordinate columns with an
    optional trailing label column; json: the :func:`domain_to_json` schema)."""
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "")
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
        name = str(source)
    if fmt is None:
        fmt = "json" if name.endswith(".json") or text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        if not text.strip():
            raise DomainError("empty domain")
        return domain_from_json(text)
    if fmt == "csv":
        return _parse_csv(text.splitlines())
    raise DomainError(f"unknown domain format {fmt!r}")


def save_domain(domain: Domain, path, fmt: str = "json") -> None:
    if fmt == "json":
        text = domain_to_json(domain)
    elif fmt == "csv":
        lines = []
        for p, l in zip(domain.points, domain.labels):
            cells = [repr(float(v)) for v in p]
            if l is not None:
                cells.append(l)
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    else:
        raise DomainError(f"unknown domain format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
