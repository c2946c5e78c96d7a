#!/usr/bin/env python3
"""Convert a KEEL-format .dat file (Haberman or Pima) into the repository CSV layout.

Usage: import_keel.py {haberman|diabetes} INPUT.dat OUTPUT.csv

Haberman rows become Age,Year,Nodes,Status with Status 1 = survived, 2 = died.
Pima rows become the eight clinical columns plus Outcome (1 = diabetic).
"""
import csv
import sys

HEADERS = {
    "haberman": ["Age", "Year", "Nodes", "Status"],
    "diabetes": ["Pregnancies", "Glucose", "BloodPressure", "SkinThickness", "Insulin", "BMI",
                 "DiabetesPedigreeFunction", "Age", "Outcome"],
}


def convert(kind, src, dst):
    rows = []
    in_data = False
    with open(src, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.lower().startswith("@data"):
                in_data = True
                continue
            if not in_data or line.startswith("@"):
                continue
            cells = [c.strip() for c in line.split(",")]
            label = cells[-1]
            values = cells[:-1]
            if kind == "haberman":
                status = "2" if label == "positive" else "1"
                rows.append(values + [status])
            else:
                outcome = "1" if label == "positive" else "0"
                rows.append(values + [outcome])
    with open(dst, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADERS[kind])
        writer.writerows(rows)
    return len(rows)


if __name__ == "__main__":
    if len(sys.argv) != 4 or sys.argv[1] not in HEADERS:
        sys.exit(__doc__)
    print(convert(sys.argv[1], sys.argv[2], sys.argv[3]), "rows written")
