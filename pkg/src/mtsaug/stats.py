"""Welch two-sample t-test and significance reporting over accuracy records.

The two-sided p-value comes from the Student-t distribution evaluated through
the regularized incomplete beta function (Lentz continued fraction), so the
engine has no runtime dependency on scipy. An accuracy group is "better" than
the baseline when p < alpha and its mean is higher, "worse" when p < alpha
and its mean is lower, otherwise not significant (alpha defaults to 0.05).

All accuracies are fractions in [0, 1]; reports render percentage points.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

ALPHA = 0.05

_BETACF_EPS = 1e-15
_BETACF_TINY = 1e-300
_BETACF_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETACF_TINY:
        d = _BETACF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETACF_TINY:
            d = _BETACF_TINY
        c = 1.0 + aa / c
        if abs(c) < _BETACF_TINY:
            c = _BETACF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETACF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1], absolute error well below 1e-10."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, dof: float) -> float:
    """P(|T| >= |t|) for T ~ Student-t with ``dof`` degrees of freedom."""
    if dof <= 0:
        raise ValueError(f"dof must be > 0, got {dof}")
    if t == 0.0:
        return 1.0
    x = dof / (dof + t * t)
    return regularized_incomplete_beta(dof / 2.0, 0.5, x)


@dataclass(frozen=True)
class WelchResult:
    t_stat: float
    dof: float
    p_value: float
    mean_diff: float
    verdict: str  # better | worse | not_significant


def _mean_var(xs: list[float]) -> tuple[float, float]:
    n = len(xs)
    mean = math.fsum(xs) / n
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1)
    return mean, var


def welch_ttest(a, b, alpha: float = ALPHA) -> WelchResult:
    """Welch's unequal-variance t-test of a against b (two-sided).

    Sample variances use the n-1 denominator; degrees of freedom follow
    Welch-Satterthwaite. When both groups have zero variance: equal means
    give p = 1 by convention, different means are an error (the statistic is
    undefined).
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if len(a) < 2 or len(b) < 2:
        raise ValueError(f"each group needs >= 2 values, got {len(a)} and {len(b)}")
    ma, va = _mean_var(a)
    mb, vb = _mean_var(b)
    mean_diff = ma - mb
    if va == 0.0 and vb == 0.0:
        if mean_diff == 0.0:
            return WelchResult(0.0, float(len(a) + len(b) - 2), 1.0, 0.0, "not_significant")
        raise ValueError("both groups have zero variance and different means; t is undefined")
    sa = va / len(a)
    sb = vb / len(b)
    t = mean_diff / math.sqrt(sa + sb)
    dof = (sa + sb) ** 2 / (
        (sa * sa) / (len(a) - 1) + (sb * sb) / (len(b) - 1)
    )
    p = student_t_two_sided_p(t, dof)
    if p < alpha and mean_diff > 0:
        verdict = "better"
    elif p < alpha and mean_diff < 0:
        verdict = "worse"
    else:
        verdict = "not_significant"
    return WelchResult(t, dof, p, mean_diff, verdict)


@dataclass(frozen=True)
class AccuracyRecord:
    dataset: str
    model: str
    aug_code: str
    fold: int
    accuracy: float

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(
                f"accuracy must be in [0, 1], got {self.accuracy} "
                f"({self.dataset}/{self.model}/{self.aug_code}/fold {self.fold})"
            )


def read_accuracy_csv(text: str) -> list[AccuracyRecord]:
    """Parse ``dataset,model,aug_code,fold,accuracy`` CSV (header required)."""
    reader = csv.DictReader(io.StringIO(text))
    required = {"dataset", "model", "aug_code", "fold", "accuracy"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise ValueError(f"records CSV needs columns {sorted(required)}, got {reader.fieldnames}")
    records = []
    seen = set()
    for row_no, row in enumerate(reader, start=2):
        try:
            rec = AccuracyRecord(
                row["dataset"], row["model"], row["aug_code"], int(row["fold"]), float(row["accuracy"])
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(f"records CSV row {row_no}: {exc}") from exc
        key = (rec.dataset, rec.model, rec.aug_code, rec.fold)
        if key in seen:
            raise ValueError(f"records CSV row {row_no}: duplicate key {key}")
        seen.add(key)
        records.append(rec)
    return records


@dataclass(frozen=True)
class SignificanceCell:
    aug_code: str
    mean_diff_pct: float
    welch: WelchResult


@dataclass(frozen=True)
class SignificanceRow:
    model: str
    dataset: str
    baseline_mean_pct: float
    cells: tuple[SignificanceCell, ...]


@dataclass(frozen=True)
class SignificanceReport:
    baseline_code: str
    aug_codes: tuple[str, ...]
    rows: tuple[SignificanceRow, ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(
            ["model", "dataset", "aug_code", "baseline_mean_pct", "delta_pct",
             "t_stat", "dof", "p_value", "verdict"]
        )
        for row in self.rows:
            for cell in row.cells:
                w.writerow(
                    [
                        row.model,
                        row.dataset,
                        cell.aug_code,
                        f"{row.baseline_mean_pct:.4f}",
                        f"{cell.mean_diff_pct:.4f}",
                        f"{cell.welch.t_stat:.6g}",
                        f"{cell.welch.dof:.6g}",
                        f"{cell.welch.p_value:.6g}",
                        cell.welch.verdict,
                    ]
                )
        return out.getvalue()

    def to_text(self) -> str:
        """Aligned table: baseline mean plus per-code deltas. Significantly
        better deltas are wrapped in ** **, significantly worse in * *."""
        headers = ["model", "dataset", self.baseline_code] + list(self.aug_codes)
        table = [headers]
        for row in self.rows:
            cells = {c.aug_code: c for c in row.cells}
            rendered = [row.model, row.dataset, f"{row.baseline_mean_pct:.2f}"]
            for code in self.aug_codes:
                cell = cells.get(code)
                if cell is None:
                    rendered.append("-")
                    continue
                text = f"{cell.mean_diff_pct:+.2f}"
                if cell.welch.verdict == "better":
                    text = f"**{text}**"
                elif cell.welch.verdict == "worse":
                    text = f"*{text}*"
                rendered.append(text)
            table.append(rendered)
        widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
        return "\n".join(lines) + "\n"


def _group_means(records: list[AccuracyRecord]):
    groups: dict[tuple[str, str], dict[str, list[float]]] = {}
    for rec in records:
        groups.setdefault((rec.model, rec.dataset), {}).setdefault(rec.aug_code, []).append(
            rec.accuracy
        )
    return groups


def significance_table(
    records, baseline_code: str, alpha: float = ALPHA
) -> SignificanceReport:
    """Welch-compare every aug code against the baseline per (model, dataset).

    Every group must contain the baseline code with >= 2 folds; missing
    baselines are an error naming the group.
    """
    records = list(records)
    groups = _group_means(records)
    if not groups:
        raise ValueError("no accuracy records supplied")
    codes = sorted({rec.aug_code for rec in records if rec.aug_code != baseline_code})
    rows = []
    for (model, dataset) in sorted(groups):
        by_code = groups[(model, dataset)]
        if baseline_code not in by_code:
            raise ValueError(f"baseline {baseline_code!r} missing for ({dataset}, {model})")
        base = by_code[baseline_code]
        base_mean = math.fsum(base) / len(base)
        cells = []
        for code in codes:
            if code not in by_code:
                continue
            result = welch_ttest(by_code[code], base, alpha=alpha)
            cells.append(SignificanceCell(code, result.mean_diff * 100.0, result))
        rows.append(SignificanceRow(model, dataset, base_mean * 100.0, tuple(cells)))
    return SignificanceReport(baseline_code, tuple(codes), tuple(rows))


@dataclass(frozen=True)
class BestRow:
    dataset: str
    best_code: str
    our_mean_pct: float
    reference_pct: float | None
    reference_algorithm: str | None
    better_or_equal: bool | None


@dataclass(frozen=True)
class BestReport:
    rows: tuple[BestRow, ...]

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["dataset", "best_code", "our_mean_pct", "reference_pct",
                    "reference_algorithm", "better_or_equal"])
        for r in self.rows:
            w.writerow([
                r.dataset,
                r.best_code,
                f"{r.our_mean_pct:.4f}",
                "" if r.reference_pct is None else f"{r.reference_pct:.4f}",
                r.reference_algorithm or "",
                "" if r.better_or_equal is None else str(r.better_or_equal).lower(),
            ])
        return out.getvalue()

    def to_text(self) -> str:
        lines = []
        for r in self.rows:
            if r.reference_pct is None:
                lines.append(f"{r.dataset}: best {r.best_code} {r.our_mean_pct:.2f}")
            else:
                mark = "better-or-equal" if r.better_or_equal else "below"
                lines.append(
                    f"{r.dataset}: best {r.best_code} {r.our_mean_pct:.2f} vs "
                    f"{r.reference_pct:.2f} ({r.reference_algorithm}) -> {mark}"
                )
        return "\n".join(lines) + "\n"


def best_vs_reference(records, reference: dict[str, tuple[float, str]]) -> BestReport:
    """Best mean accuracy per dataset (over aug codes and models) against a
    user-supplied reference map ``dataset -> (accuracy fraction, algorithm)``.

    A row is flagged better_or_equal when our best mean >= the reference.
    """
    records = list(records)
    per_dataset: dict[str, dict[str, list[float]]] = {}
    for rec in records:
        per_dataset.setdefault(rec.dataset, {}).setdefault(rec.aug_code, []).append(rec.accuracy)
    rows = []
    for dataset in sorted(per_dataset):
        means = {
            code: math.fsum(vals) / len(vals) for code, vals in per_dataset[dataset].items()
        }
        best_code = max(sorted(means), key=lambda c: means[c])
        our = means[best_code] * 100.0
        if dataset in reference:
            ref_acc, ref_alg = reference[dataset]
            rows.append(
                BestRow(dataset, best_code, our, ref_acc * 100.0, ref_alg, our >= ref_acc * 100.0)
            )
        else:
            rows.append(BestRow(dataset, best_code, our, None, None, None))
    return BestReport(tuple(rows))


def read_reference_csv(text: str) -> dict[str, tuple[float, str]]:
    """Parse ``dataset,accuracy,algorithm`` CSV; accuracy is a fraction in [0, 1]."""
    reader = csv.DictReader(io.StringIO(text))
    required = {"dataset", "accuracy", "algorithm"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise ValueError(f"reference CSV needs columns {sorted(required)}, got {reader.fieldnames}")
    out: dict[str, tuple[float, str]] = {}
    for row_no, row in enumerate(reader, start=2):
        try:
            acc = float(row["accuracy"])
        except (TypeError, ValueError) as exc:
            raise ValueError(f"reference CSV row {row_no}: {exc}") from exc
        if not 0.0 <= acc <= 1.0:
            raise ValueError(f"reference CSV row {row_no}: accuracy must be in [0, 1], got {acc}")
        out[row["dataset"]] = (acc, row["algorithm"])
    return out
