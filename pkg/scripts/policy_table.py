"""Error rate and pruned size of every threshold policy, on shared folds.

    python scripts/policy_table.py --datasets iris,synth:diabetes --repeats 10

The first policy is the baseline for win/draw/loss counts and ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

from _common import header, parse_config, write
from mdltree.datasets import resolve
from mdltree.experiments import CvParams, compare_policies
from mdltree.reports import report_csv, report_markdown


@dataclass(frozen=True)
class Config:
    datasets: tuple = ("iris", "synth:diabetes", "synth:mixed")
    policies: tuple = ("rel7", "7g", "7gs", "rel8")
    folds: int = 10
    repeats: int = 10
    seed: int = 1
    data_seed: int = 0
    out: str = "results/policies"


def run(cfg: Config):
    cv = CvParams(cfg.folds, cfg.repeats, cfg.seed)
    reports = []
    for name in cfg.datasets:
        D = resolve(name, seed=cfg.data_seed)
        reports.append(compare_policies(D, cfg.policies, cv, dataset=name))
        print(f"{name}: done")
    return reports


if __name__ == "__main__":
    cfg = parse_config(Config, __doc__)
    reports = run(cfg)
    h = header("policy_table.py", cfg)
    write(f"{cfg.out}.csv", report_csv(reports, h))
    write(f"{cfg.out}.md", md := report_markdown(reports, h))
    print(md)
