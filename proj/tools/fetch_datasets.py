#!/usr/bin/env python3
"""Rebuild the benchmark files under data/ from wheels on the Python package index.

UCR splits are written as label-first TSV files; the MNIST subset is written as
IDX files (big-endian, magic 2051/2049) so it goes through the same loader as
the original distribution.

Sources:
  Coffee, ECG200      -> ucr-datasets (UCR 2018 archive TSVs)
  ItalyPowerDemand    -> sktime 0.13.4 (.ts files)
  MNIST 5k subset     -> mlxtend (mnist_5k.csv.gz, 500 images per digit)
"""
import argparse
import gzip
import io
import pathlib
import struct
import subprocess
import sys
import tempfile
import zipfile

WHEELS = {
    "ucr-datasets==0.0.6": "ucr_datasets",
    "sktime==0.13.4": "sktime",
    "mlxtend==0.24.0": "mlxtend",
}


def download(spec, dest):
    subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps", "-q",
                    spec, "-d", str(dest)], check=True)
    name = spec.split("==")[0].replace("-", "_")
    return next(dest.glob(f"{name}-*.whl"))


def write_ts_as_tsv(raw, out):
    rows = []
    in_data = False
    for line in raw.decode().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.lower().startswith("@data"):
            in_data = True
            continue
        if line.startswith("@") or not in_data:
            continue
        values, label = line.rsplit(":", 1)
        rows.append("\t".join([label] + values.split(",")))
    out.write_text("\n".join(rows) + "\n")


def write_idx(images, labels, prefix):
    n = len(labels)
    with open(f"{prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 2051, n, 28, 28))
        for img in images:
            f.write(bytes(img))
    with open(f"{prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 2049, n))
        f.write(bytes(labels))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--mnist-train", type=int, default=300,
                        help="images per digit placed in the training split; the rest go to test")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    (out / "ucr").mkdir(parents=True, exist_ok=True)
    (out / "mnist").mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        wheels = {spec: zipfile.ZipFile(download(spec, tmp)) for spec in WHEELS}

        ucr = wheels["ucr-datasets==0.0.6"]
        for name in ("Coffee", "ECG200"):
            for split in ("TRAIN", "TEST"):
                data = ucr.read(f"ucr_datasets/data/{name}_{split}.tsv")
                (out / "ucr" / f"{name}_{split}.tsv").write_bytes(data)

        sk = wheels["sktime==0.13.4"]
        for split in ("TRAIN", "TEST"):
            raw = sk.read(f"sktime/datasets/data/ItalyPowerDemand/ItalyPowerDemand_{split}.ts")
            write_ts_as_tsv(raw, out / "ucr" / f"ItalyPowerDemand_{split}.tsv")

        mx = wheels["mlxtend==0.24.0"]
        text = gzip.decompress(mx.read("mlxtend/data/data/mnist_5k.csv.gz")).decode()
        images, labels = [], []
        for line in io.StringIO(text):
            fields = line.strip().split(",")
            if len(fields) != 785:
                continue
            images.append([int(float(v)) for v in fields[:784]])
            labels.append(int(float(fields[784])))
        seen = {}
        train, test = ([], []), ([], [])
        for img, lab in zip(images, labels):
            seen[lab] = seen.get(lab, 0) + 1
            split = train if seen[lab] <= args.mnist_train else test
            split[0].append(img)
            split[1].append(lab)
        write_idx(*train, out / "mnist" / "train")
        write_idx(*test, out / "mnist" / "t10k")
    print(f"wrote datasets to {out}")


if __name__ == "__main__":
    main()
