#!/usr/bin/env python3
"""Convert UCI benchmark sources into the canonical CSV layout used by `dogc`.

Canonical layout: UTF-8, comma-delimited, one header row, numeric feature
columns, and the class label in the last column named `class`. Missing values
are imputed (column mean for continuous columns, mode for discrete ones) and
categorical attributes are integer coded in sorted category order.

Sources (pass whichever are available; missing ones are skipped):

  --sklearn-wine   sklearn/datasets/data/wine_data.csv (scikit-learn)
  --orange-zoo     Orange/datasets/zoo.tab              (Orange3 wheel)
  --orange-lenses  Orange/tests/datasets/lenses.tab     (Orange3 wheel)
  --orange-auto    Orange/tests/datasets/imports-85.tab (Orange3 wheel)
  --islr-auto      rdatasets/_data/ISLR/Auto.pkl.compress (rdatasets wheel)

The balance-scale data is a full factorial design and is regenerated exactly.
After writing, SHA256SUMS and manifest.json are refreshed in the output dir.
"""

import argparse
import csv
import hashlib
import json
import lzma
import pickle
from pathlib import Path
from statistics import mean


def fmt(v):
    if isinstance(v, int):
        return str(v)
    if float(v).is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(fmt(v) if not isinstance(v, str) else v for v in r) + "\n")


def read_tab(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    names = lines[0].split("\t")
    kinds = lines[1].split("\t")
    flags = lines[2].split("\t")
    rows = [ln.split("\t") for ln in lines[3:] if ln.strip()]
    return names, kinds, flags, rows


def encode_columns(names, cols, continuous):
    """Impute and encode columns; returns list of numeric columns."""
    out = []
    for name, col, cont in zip(names, cols, continuous):
        present = [v for v in col if v not in ("?", "")]
        if cont:
            vals = [float(v) for v in present]
            fill = mean(vals)
            out.append([float(v) if v not in ("?", "") else fill for v in col])
        else:
            try:
                cats = sorted(set(present), key=float)
                numeric = True
            except ValueError:
                cats = sorted(set(present))
                numeric = False
            if numeric:
                mode = max(cats, key=lambda c: (present.count(c), -float(c)))
                out.append([float(v) if v not in ("?", "") else float(mode) for v in col])
            else:
                mode = max(cats, key=lambda c: present.count(c))
                code = {c: i for i, c in enumerate(cats)}
                out.append([code[v] if v not in ("?", "") else code[mode] for v in col])
    return out


def convert_wine(src, dst):
    with open(src, encoding="utf-8") as fh:
        rdr = csv.reader(fh)
        next(rdr)  # "178,13,class_0,class_1,class_2"
        rows = [r for r in rdr if r]
    header = [f"f{i + 1}" for i in range(13)] + ["class"]
    out = [[float(v) for v in r[:13]] + [str(int(r[13]) + 1)] for r in rows]
    write_csv(dst, header, out)


def convert_zoo(src, dst):
    names, _, _, rows = read_tab(src)
    feat = names[1:-1]
    out = [[float(v) for v in r[1:-1]] + [r[-1]] for r in rows]
    write_csv(dst, [n.replace(" ", "_") for n in feat] + ["class"], out)


def convert_lenses(src, dst):
    levels = {
        "age": ["young", "pre-presbyopic", "presbyopic"],
        "prescription": ["myope", "hypermetrope"],
        "astigmatic": ["no", "yes"],
        "tear_rate": ["reduced", "normal"],
    }
    names, _, _, rows = read_tab(src)
    out = []
    for r in rows:
        feats = [levels[n].index(v) + 1 for n, v in zip(names[:4], r[:4])]
        out.append(feats + [r[4]])
    write_csv(dst, names[:4] + ["class"], out)


def convert_auto(src, dst):
    names, kinds, _, rows = read_tab(src)
    names = [n.strip() for n in names]
    label_idx = names.index("symboling")
    feat_idx = [i for i in range(len(names)) if i != label_idx]
    cols = [[r[i] for r in rows] for i in feat_idx]
    cont = [kinds[i].strip() == "c" for i in feat_idx]
    enc = encode_columns([names[i] for i in feat_idx], cols, cont)
    out = [[enc[j][i] for j in range(len(feat_idx))] + [rows[i][label_idx]] for i in range(len(rows))]
    write_csv(dst, [names[i] for i in feat_idx] + ["class"], out)


def convert_cars(src, dst):
    df = pickle.loads(lzma.decompress(Path(src).read_bytes()))
    feat = ["mpg", "cylinders", "displacement", "horsepower", "weight", "acceleration", "year"]
    out = [[float(row[f]) for f in feat] + [str(int(row["origin"]))] for _, row in df.iterrows()]
    write_csv(dst, feat + ["class"], out)


def generate_balance(dst):
    out = []
    for lw in range(1, 6):
        for ld in range(1, 6):
            for rw in range(1, 6):
                for rd in range(1, 6):
                    left, right = lw * ld, rw * rd
                    cls = "L" if left > right else ("R" if right > left else "B")
                    out.append([lw, ld, rw, rd, cls])
    write_csv(dst, ["left_weight", "left_distance", "right_weight", "right_distance", "class"], out)


def refresh_manifest(outdir):
    sums, entries = [], []
    for p in sorted(outdir.glob("*.csv")):
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        sums.append(f"{digest}  {p.name}")
        with open(p, encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        entries.append({
            "file": p.name,
            "n": len(rows) - 1,
            "d": len(rows[0]) - 1,
            "c": len({r[-1] for r in rows[1:]}),
            "sha256": digest,
        })
    (outdir / "SHA256SUMS").write_text("\n".join(sums) + "\n", encoding="utf-8")
    (outdir / "manifest.json").write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="data/uci")
    ap.add_argument("--sklearn-wine")
    ap.add_argument("--orange-zoo")
    ap.add_argument("--orange-lenses")
    ap.add_argument("--orange-auto")
    ap.add_argument("--islr-auto")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.sklearn_wine:
        convert_wine(args.sklearn_wine, out / "wine.csv")
    if args.orange_zoo:
        convert_zoo(args.orange_zoo, out / "zoo.csv")
    if args.orange_lenses:
        convert_lenses(args.orange_lenses, out / "lenses.csv")
    if args.orange_auto:
        convert_auto(args.orange_auto, out / "auto.csv")
    if args.islr_auto:
        convert_cars(args.islr_auto, out / "cars.csv")
    generate_balance(out / "balance.csv")
    refresh_manifest(out)


if __name__ == "__main__":
    main()
