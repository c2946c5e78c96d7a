#!/usr/bin/env python3
"""Generate the synthetic stand-in datasets shipped under data/datasets/.

The original Banknote, Breast Cancer Coimbra, Fertility, Heart Disease and Qualitative
Bankruptcy files could not be vendored. Each stand-in keeps the original column
inventory, value ranges and exact per-class row counts, and draws features from
class-conditional distributions whose location and spread follow published summary
statistics of the original data. They are synthetic: model accuracies on them are not
comparable with results on the real files.

Usage: make_surrogates.py OUTPUT_DIR
"""
import csv
import os
import sys

import numpy as np

SEED = 20240611


def clip_round(x, lo, hi, digits):
    return np.round(np.clip(x, lo, hi), digits)


def write(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)


def fmt(v, digits):
    if digits == 0:
        return str(int(round(v)))
    return f"{v:.{digits}f}"


def interleave(rng, rows0, rows1):
    rows = rows0 + rows1
    order = rng.permutation(len(rows))
    return [rows[i] for i in order]


def banknote(rng):
    # variance, skewness, curtosis, entropy of the wavelet-transformed image.
    spec = {
        0: ([2.28, 4.26, 0.80, -1.15], [2.02, 5.14, 3.24, 2.13], 762),
        1: ([-1.87, -0.99, 2.15, -1.25], [1.88, 5.40, 5.26, 2.07], 610),
    }
    corr = np.array([[1.0, 0.26, -0.38, 0.28],
                     [0.26, 1.0, -0.79, -0.53],
                     [-0.38, -0.79, 1.0, 0.32],
                     [0.28, -0.53, 0.32, 1.0]])
    out = {}
    for label, (mu, sd, n) in spec.items():
        cov = np.outer(sd, sd) * corr
        x = rng.multivariate_normal(mu, cov, size=n)
        x[:, 0] = np.clip(x[:, 0], -7.04, 6.82)
        x[:, 1] = np.clip(x[:, 1], -13.77, 12.95)
        x[:, 2] = np.clip(x[:, 2], -5.29, 17.93)
        x[:, 3] = np.clip(x[:, 3], -8.55, 2.45)
        out[label] = [[fmt(v, 5) for v in row] + [str(label)] for row in x]
    header = ["Variance", "Skewness", "Curtosis", "Entropy", "Class"]
    return header, interleave(rng, out[0], out[1])


def coimbra(rng):
    # Age, BMI, Glucose, Insulin, HOMA, Leptin, Adiponectin, Resistin, MCP.1; 1 healthy, 2 patient.
    spec = {
        1: dict(n=52, age=(58.1, 19.0), bmi=(28.3, 5.4), glu=(88.2, 10.2), ins=(6.9, 4.9),
                lep=(26.6, 19.3), adi=(10.3, 7.6), res=(11.6, 11.4), mcp=(499.7, 292.2)),
        2: dict(n=64, age=(56.7, 13.5), bmi=(27.0, 4.6), glu=(105.6, 26.6), ins=(12.5, 12.3),
                lep=(26.6, 19.2), adi=(10.1, 6.2), res=(17.3, 12.6), mcp=(563.0, 384.0)),
    }

    def lognormal(mean, sd, size):
        s2 = np.log(1 + (sd / mean) ** 2)
        return rng.lognormal(np.log(mean) - s2 / 2, np.sqrt(s2), size)

    out = {}
    for label, s in spec.items():
        n = s["n"]
        age = clip_round(rng.normal(*s["age"], n), 24, 89, 0)
        bmi = clip_round(rng.normal(*s["bmi"], n), 18.37, 38.58, 4)
        glu = clip_round(lognormal(*s["glu"], n), 60, 201, 0)
        ins = clip_round(lognormal(*s["ins"], n), 2.43, 58.46, 3)
        homa = np.round(glu * ins / 405.0, 6)
        lep = clip_round(lognormal(*s["lep"], n), 4.31, 90.28, 4)
        adi = clip_round(lognormal(*s["adi"], n), 1.66, 38.04, 6)
        res = clip_round(lognormal(*s["res"], n), 3.21, 82.1, 5)
        mcp = clip_round(lognormal(*s["mcp"], n), 45.84, 1698.44, 3)
        cols = [(age, 0), (bmi, 4), (glu, 0), (ins, 3), (homa, 6), (lep, 4), (adi, 6), (res, 5), (mcp, 3)]
        out[label] = [[fmt(c[i], d) for c, d in cols] + [str(label)] for i in range(n)]
    header = ["Age", "BMI", "Glucose", "Insulin", "HOMA", "Leptin", "Adiponectin", "Resistin", "MCP.1",
              "Classification"]
    return header, interleave(rng, out[1], out[2])


def fertility(rng):
    # Diagnosis N = normal (88), O = altered (12).
    def rows(n, altered):
        season = rng.choice([-1.0, -0.33, 0.33, 1.0], n, p=[0.28, 0.24, 0.3, 0.18])
        age = np.round(rng.uniform(0.5, 1.0, n) if not altered else rng.uniform(0.53, 1.0, n), 2)
        childish = rng.binomial(1, 0.87 if not altered else 0.83, n)
        trauma = rng.binomial(1, 0.42 if not altered else 0.58, n)
        surgery = rng.binomial(1, 0.5 if not altered else 0.58, n)
        fever = rng.choice([-1, 0, 1], n, p=[0.08, 0.6, 0.32] if not altered else [0.25, 0.5, 0.25])
        alcohol = rng.choice([0.2, 0.4, 0.6, 0.8, 1.0], n,
                             p=[0.01, 0.13, 0.01, 0.37, 0.48] if not altered else [0.0, 0.17, 0.0, 0.33, 0.5])
        smoking = rng.choice([-1, 0, 1], n, p=[0.57, 0.22, 0.21] if not altered else [0.5, 0.25, 0.25])
        sitting = np.round(np.clip(rng.normal(0.39 if not altered else 0.48, 0.18, n), 0.06, 1.0), 2)
        out = []
        for i in range(n):
            out.append([f"{season[i]:.2f}", f"{age[i]:.2f}", str(childish[i]), str(trauma[i]), str(surgery[i]),
                        str(fever[i]), f"{alcohol[i]:.1f}", str(smoking[i]), f"{sitting[i]:.2f}",
                        "O" if altered else "N"])
        return out

    header = ["Season", "Age", "ChildishDiseases", "Trauma", "SurgicalIntervention", "HighFevers",
              "AlcoholFrequency", "Smoking", "HoursSitting", "Diagnosis"]
    return header, interleave(rng, rows(88, False), rows(12, True))


def heart(rng):
    # target 1 = no disease (165), 0 = disease (138); class-conditional statistics from Cleveland.
    spec = {
        0: dict(n=138, age=(56.6, 7.9, 35, 77), bps=(134.6, 18.8, 100, 200), chol=(251.5, 49.5, 131, 409),
                hr=(139.3, 22.6, 71, 195), old=(1.57, 1.30, 0, 6.2),
                sex=[25, 114], cp=[7, 9, 18, 105], fbs=[117, 22], ecg=[56, 3, 80], exang=[63, 76],
                slope=[36, 91, 12], ca=[46, 44, 31, 17], thal=[12, 37, 89]),
        1: dict(n=165, age=(52.6, 9.5, 29, 76), bps=(129.3, 16.2, 94, 180), chol=(242.6, 53.5, 126, 564),
                hr=(158.4, 19.2, 96, 202), old=(0.59, 0.78, 0, 4.2),
                sex=[72, 92], cp=[16, 41, 68, 39], fbs=[141, 23], ecg=[95, 1, 68], exang=[141, 23],
                slope=[106, 49, 9], ca=[130, 21, 7, 3], thal=[6, 129, 28]),
    }

    def cat(counts, n):
        p = np.array(counts, dtype=float)
        return rng.choice(len(counts), n, p=p / p.sum())

    out = {}
    for label, s in spec.items():
        n = s["n"]

        def normal(key, digits=0):
            mu, sd, lo, hi = s[key]
            return clip_round(rng.normal(mu, sd, n), lo, hi, digits)

        age, bps, chol, hr = normal("age"), normal("bps"), normal("chol"), normal("hr")
        old = clip_round(np.abs(rng.normal(0, 1, n)) * s["old"][0] * 1.25, 0, s["old"][3], 1)
        sex, cp, fbs, ecg = cat(s["sex"], n), cat(s["cp"], n), cat(s["fbs"], n), cat(s["ecg"], n)
        exang, slope, ca, thal = cat(s["exang"], n), cat(s["slope"], n), cat(s["ca"], n), cat(s["thal"], n) + 1
        rows = []
        for i in range(n):
            rows.append([fmt(age[i], 0), str(sex[i]), str(cp[i]), fmt(bps[i], 0), fmt(chol[i], 0), str(fbs[i]),
                         str(ecg[i]), fmt(hr[i], 0), str(exang[i]), f"{old[i]:.1f}", str(slope[i]), str(ca[i]),
                         str(thal[i]), str(label)])
        out[label] = rows
    header = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang", "oldpeak", "slope",
              "ca", "thal", "target"]
    return header, interleave(rng, out[0], out[1])


def bankruptcy(rng):
    # Levels P (positive), A (average), N (negative); class B bankrupt (107), NB non-bankrupt (143).
    probs = {
        "NB": [[0.34, 0.31, 0.35], [0.34, 0.32, 0.34], [0.42, 0.39, 0.19], [0.46, 0.37, 0.17],
               [0.64, 0.32, 0.04], [0.30, 0.33, 0.37]],
        "B": [[0.24, 0.32, 0.44], [0.12, 0.29, 0.59], [0.02, 0.21, 0.77], [0.03, 0.23, 0.74],
              [0.01, 0.05, 0.94], [0.22, 0.21, 0.57]],
    }
    counts = {"NB": 143, "B": 107}
    levels = ["P", "A", "N"]
    out = {}
    for label, ps in probs.items():
        n = counts[label]
        cols = [rng.choice(3, n, p=np.array(p) / sum(p)) for p in ps]
        out[label] = [[levels[c[i]] for c in cols] + [label] for i in range(n)]
    header = ["IndustrialRisk", "ManagementRisk", "FinancialFlexibility", "Credibility", "Competitiveness",
              "OperatingRisk", "Class"]
    return header, interleave(rng, out["NB"], out["B"])


GENERATORS = {
    "banknote.csv": banknote,
    "coimbra.csv": coimbra,
    "fertility.csv": fertility,
    "heart.csv": heart,
    "qualitative_bankruptcy.csv": bankruptcy,
}


def main(out_dir):
    for i, (name, gen) in enumerate(sorted(GENERATORS.items())):
        rng = np.random.default_rng(SEED + i)
        header, rows = gen(rng)
        write(os.path.join(out_dir, name), header, rows)
        print(f"{name}: {len(rows)} rows")


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    main(sys.argv[1])
