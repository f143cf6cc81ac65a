"""Regenerate the packaged phrase sets and n-gram training corpus.

    python scripts/build_corpus.py
"""
from pathlib import Path

from swipefusion.corpus import CORPUS_FILE, CORPUS_SEED, CORPUS_SIZE, PACKAGED, make_phrases, make_training_corpus, write_corpus
from swipefusion.lm import write_phrases

DATA = Path(__file__).resolve().parents[1] / "src" / "swipefusion" / "data"


def main():
    for name, n, seed in PACKAGED.values():
        write_phrases(make_phrases(n, seed), DATA / name)
    write_corpus(make_training_corpus(CORPUS_SIZE, CORPUS_SEED), DATA / CORPUS_FILE)


if __name__ == "__main__":
    main()
