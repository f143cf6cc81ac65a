"""Regenerate ``src/swipefusion/data/vocab.tsv`` from the wordfreq English list.

Requires the ``wordfreq`` wheel's data directory (no runtime dependency on
the package itself); pass its path as the first argument.

    python scripts/build_vocab.py /path/to/wordfreq/data 10000
"""
import gzip
import sys
from pathlib import Path

from pip._vendor import msgpack

OUT = Path(__file__).resolve().parents[1] / "src" / "swipefusion" / "data" / "vocab.tsv"


def main(data_dir, size=10000):
    blob = gzip.open(Path(data_dir) / "large_en.msgpack.gz").read()
    bins = msgpack.unpackb(blob, raw=False)[1:]
    rows = []
    for centibel, words in enumerate(bins):
        freq = 10 ** (-centibel / 100)
        for w in words:
            if not (w.isascii() and w.isalpha() and w.islower()):
                continue
            if len(w) == 1 and w not in ("a", "i"):
                continue
            rows.append((w, max(1, round(freq * 1e9))))
            if len(rows) == size:
                break
        if len(rows) == size:
            break
    with open(OUT, "w") as fh:
        for w, c in rows:
            fh.write(f"{w}\t{c}\n")
    print(f"wrote {len(rows)} words to {OUT}")


if __name__ == "__main__":
    main(sys.argv[1], int(sys.argv[2]) if len(sys.argv) > 2 else 10000)
