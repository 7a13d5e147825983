"""Effect of added irrelevant attributes on two policies.

Each dataset is run as given and again with ``n_cont`` uniform continuous
and ``n_disc`` ``card``-valued discrete noise attributes appended.
"""

from __future__ import annotations

from dataclasses import dataclass

from _common import header, parse_config, write
from mdltree.datasets import resolve
from mdltree.experiments import CvParams, augment_irrelevant, compare_policies
from mdltree.reports import report_csv, report_markdown


@dataclass(frozen=True)
class Config:
    datasets: tuple = ("synth:mixed", "synth:diabetes", "iris")
    policies: tuple = ("rel7", "rel8")
    n_cont: int = 10
    n_disc: int = 10
    card: int = 10
    folds: int = 10
    repeats: int = 10
    seed: int = 1
    data_seed: int = 0
    out: str = "results/irrelevant"


def run(cfg: Config):
    cv = CvParams(cfg.folds, cfg.repeats, cfg.seed)
    reports, summary = [], []
    for name in cfg.datasets:
        D = resolve(name, seed=cfg.data_seed)
        A = augment_irrelevant(D, cfg.n_cont, cfg.n_disc, cfg.card, seed=cfg.seed)
        note = f"{cfg.n_cont} continuous + {cfg.n_disc} discrete irrelevant attributes"
        plain = compare_policies(D, cfg.policies, cv, dataset=name)
        noisy = compare_policies(A, cfg.policies, cv, dataset=f"{name}+noise", notes=[note])
        reports += [plain, noisy]
        a, b = cfg.policies[0], cfg.policies[-1]
        summary.append(
            f"{name}: {b}/{a} size ratio {plain.comparison(b).size_ratio:.3f} -> "
            f"{noisy.comparison(b).size_ratio:.3f}; error rise {a} "
            f"{noisy.system(a).error_mean - plain.system(a).error_mean:+.2f}, {b} "
            f"{noisy.system(b).error_mean - plain.system(b).error_mean:+.2f}"
        )
        print(summary[-1])
    return reports, summary


if __name__ == "__main__":
    cfg = parse_config(Config, __doc__)
    reports, summary = run(cfg)
    h = header("irrelevant_table.py", cfg)
    write(f"{cfg.out}.csv", report_csv(reports, h))
    write(f"{cfg.out}.md", report_markdown(reports, h) + "\n" + "\n".join(f"- {s}" for s in summary) + "\n")
