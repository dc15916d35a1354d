"""Independent recount of the desk fixture.

Mirrors the loader contract: stopwords removed, then the N most frequent
remaining types by token count (ties by word) removed, vocabulary ids by first
occurrence, documents left empty are dropped. Also counts matched link ids and
the dictionary entries whose two words survive in the vocabularies.
"""

import json
import sys
from collections import Counter
from pathlib import Path


def load(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def build(records, stopwords, top_n):
    counts = Counter(t for r in records for t in r["tokens"] if t not in stopwords)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    removed = {w for w, _ in ranked[:top_n]}
    vocab, ids, docs = [], {}, []
    for r in records:
        kept = [t for t in r["tokens"] if t not in stopwords and t not in removed]
        if not kept:
            continue
        for t in kept:
            if t not in ids:
                ids[t] = len(vocab)
                vocab.append(t)
        docs.append({"id": r["id"], "length": len(kept), "link": r.get("link", "")})
    return vocab, docs, sorted(removed)


def main(datadir, out_path):
    d = Path(datadir)
    stop_en = {w.strip() for w in open(d / "stopwords_en.txt", encoding="utf-8") if w.strip()}
    en_vocab, en_docs, en_removed = build(load(d / "desk_en.jsonl"), stop_en, 100)
    de_vocab, de_docs, de_removed = build(load(d / "desk_de.jsonl"), set(), 100)

    en_links = {doc["link"] for doc in en_docs if doc["link"]}
    de_links = {doc["link"] for doc in de_docs if doc["link"]}

    en_set, de_set = set(en_vocab), set(de_vocab)
    pairs = set()
    lines = 0
    for line in open(d / "dictionary.tsv", encoding="utf-8"):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        lines += 1
        a, b = line.split("\t")
        if " " in a or " " in b:
            continue
        if a in en_set and b in de_set:
            pairs.add((a, b))

    expected = {
        "en": {"vocabulary": en_vocab, "lengths": [x["length"] for x in en_docs], "ids": [x["id"] for x in en_docs],
               "removed": en_removed},
        "de": {"vocabulary": de_vocab, "lengths": [x["length"] for x in de_docs], "ids": [x["id"] for x in de_docs],
               "removed": de_removed},
        "hard_links": len(en_links & de_links),
        "dictionary_lines": lines,
        "dictionary_retained": len(pairs),
    }
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(expected, f)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
