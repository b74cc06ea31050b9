"""Exhaustive verification table for every desk-scale universe.

    python scripts/theorem_table.py --max-vertices 3000 > table.csv
"""
import argparse
import csv
import sys
from dataclasses import dataclass

from ekrlab.bounds import applicable_bound
from ekrlab.core import UniverseParams, count_subpartitions
from ekrlab.search import max_non_centered_family, verify_theorem


@dataclass
class TableConfig:
    k_values: tuple = (3, 4)
    ell_values: tuple = (2, 3)
    n_max: int = 12
    max_vertices: int = 3000
    non_centered_vertices: int = 3000
    budget: float = 300.0


def rows(cfg: TableConfig):
    for k in cfg.k_values:
        for ell in cfg.ell_values:
            for t in range(1, ell):
                for n in range(k * ell, cfg.n_max + 1):
                    size = count_subpartitions(n, ell, k)
                    if size > cfg.max_vertices:
                        continue
                    u = UniverseParams(n, k, ell, t)
                    r = verify_theorem(u, cfg.budget, all_maxima=True)
                    source, bound = applicable_bound(n, k, ell, t)
                    nc = None
                    if size <= cfg.non_centered_vertices:
                        nc = max_non_centered_family(u, budget=cfg.budget).size
                    yield dict(n=n, k=k, ell=ell, t=t, universe=size, canonical=r.canonical_size,
                               max=r.max_size, exhausted=r.exhausted,
                               all_maxima_canonical=r.all_maxima_canonical,
                               maxima=r.maxima_count, non_centered_max=nc,
                               bound_source=source, bound=bound)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-vertices", type=int, default=TableConfig.max_vertices)
    ap.add_argument("--n-max", type=int, default=TableConfig.n_max)
    ap.add_argument("--budget", type=float, default=TableConfig.budget)
    args = ap.parse_args()
    cfg = TableConfig(n_max=args.n_max, max_vertices=args.max_vertices, budget=args.budget)
    writer = None
    for row in rows(cfg):
        if writer is None:
            writer = csv.DictWriter(sys.stdout, list(row), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row)
        sys.stdout.flush()


if __name__ == "__main__":
    main()
