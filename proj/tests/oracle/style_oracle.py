#!/usr/bin/env python3
"""Straightforward recomputation of the style pipeline on a CSV corpus.

Independent of the C++ implementation: it reads the CSV with the Python csv
module, tokenizes with unicodedata/str.casefold, and computes every metric
with plain loops. Its outputs are frozen under tests/data/expected and
compared cell-by-cell (tolerance 1e-9) by the acceptance suite.

Usage: style_oracle.py CORPUS_CSV SWEAR_LEXICON STOPWORDS OUT_DIR
"""
import csv
import sys
import unicodedata
from collections import Counter, defaultdict
from pathlib import Path

VOWELS = set("aeiouy")


def read_wordlist(path):
    words = set()
    for line in open(path, encoding="utf-8"):
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return words


def unescape(text):
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\" and i + 1 < len(text):
            n = text[i + 1]
            if n == "n":
                out.append("\n")
                i += 2
                continue
            if n == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(c)
        i += 1
    return "".join(out)


def strip_edges(tok):
    b, e = 0, len(tok)
    while b < e and not tok[b].isalnum():
        b += 1
    while e > b and not tok[e - 1].isalnum():
        e -= 1
    return tok[b:e]


def tokenize(lyrics):
    lines = []
    for raw in lyrics.split("\n"):
        raw = raw.rstrip("\r")
        t = raw.strip()
        if t.startswith("[") and t.endswith("]"):
            continue
        norm = unicodedata.normalize("NFC", raw).casefold()
        norm = norm.replace("’", "'").replace("‘", "'")
        toks = [strip_edges(w) for w in norm.split()]
        toks = [w for w in toks if w]
        if toks:
            lines.append(toks)
    return lines


def syllables(word):
    groups = 0
    prev_vowel = False
    for ch in word:
        v = ch in VOWELS
        if v and not prev_vowel:
            groups += 1
        prev_vowel = v
    n = len(word)
    if n >= 2 and word[-1] == "e" and word[-2].isalpha() and word[-2] not in VOWELS:
        consonant_le = n >= 3 and word[-2] == "l" and word[-3].isalpha() and word[-3] not in VOWELS
        if not consonant_le:
            groups -= 1
    return max(groups, 1)


def metrics(song, lines, swears):
    tokens = [w for line in lines for w in line]
    length = len(tokens)
    dur = song["duration"]
    speed = length / dur if dur is not None else None
    joined = [" ".join(line) for line in lines]
    rep = (1.0 - len(set(joined)) / len(joined)) * 100.0
    syl = sum(syllables(w) for w in tokens)
    fk = 0.39 * (length / len(lines)) + 11.8 * (syl / length) - 15.59
    sc = sum(1 for w in tokens if w in swears)
    return {
        "song_id": song["id"], "year": song["year"], "cohort": song["cohort"],
        "length_words": length, "duration_seconds": dur, "speed_wps": speed,
        "repetitiveness_pct": rep, "fk_grade": fk, "swear_count": sc,
        "swear_rate": sc / length,
    }


def fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def mean(vals):
    return sum(vals) / len(vals) if vals else None


def ranked(counter):
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def main():
    corpus_csv, swear_path, stop_path, out = sys.argv[1:5]
    out = Path(out)
    swears = read_wordlist(swear_path)
    stops = read_wordlist(stop_path)
    songs = []
    with open(corpus_csv, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            d = row["duration_seconds"].strip()
            songs.append({
                "id": row["id"], "year": int(row["year"]), "cohort": row["cohort"],
                "duration": float(d) if d else None,
                "lines": tokenize(unescape(row["lyrics"])),
            })

    per_song = [metrics(s, s["lines"], swears) for s in songs]
    cols = ["song_id", "year", "cohort", "length_words", "duration_seconds", "speed_wps",
            "repetitiveness_pct", "fk_grade", "swear_count", "swear_rate"]
    with open(out / "song_metrics.csv", "w", encoding="utf-8") as f:
        f.write(",".join(cols) + "\n")
        for m in per_song:
            f.write(",".join(fmt(m[c]) for c in cols) + "\n")

    cells = defaultdict(list)
    for m in per_song:
        cells[(m["year"], m["cohort"])].append(m)
    cohort_order = {"popular": 0, "other": 1}
    acols = ["year", "cohort", "song_count", "mean_length_words", "mean_duration_seconds",
             "duration_coverage", "mean_speed_wps", "speed_coverage", "mean_repetitiveness_pct",
             "mean_fk_grade", "mean_swear_count", "mean_swear_rate"]
    with open(out / "aggregate.csv", "w", encoding="utf-8") as f:
        f.write(",".join(acols) + "\n")
        for key in sorted(cells, key=lambda k: (k[0], cohort_order[k[1]])):
            ms = cells[key]
            durs = [m["duration_seconds"] for m in ms if m["duration_seconds"] is not None]
            spds = [m["speed_wps"] for m in ms if m["speed_wps"] is not None]
            row = [key[0], key[1], len(ms),
                   mean([float(m["length_words"]) for m in ms]), mean(durs), len(durs),
                   mean(spds), len(spds),
                   mean([m["repetitiveness_pct"] for m in ms]),
                   mean([m["fk_grade"] for m in ms]),
                   mean([float(m["swear_count"]) for m in ms]),
                   mean([m["swear_rate"] for m in ms])]
            f.write(",".join(fmt(v) for v in row) + "\n")

    # Top words and rank series over popular songs.
    by_year = defaultdict(Counter)
    for s in songs:
        if s["cohort"] == "popular":
            for line in s["lines"]:
                by_year[s["year"]].update(line)
    with open(out / "top_words_1965_popular.csv", "w", encoding="utf-8") as f:
        f.write("year,cohort,rank,word,count\n")
        filtered = Counter({w: c for w, c in by_year[1965].items() if w not in stops})
        for rank, (w, c) in enumerate(ranked(filtered)[:100], start=1):
            f.write(f"1965,popular,{rank},{w},{c}\n")
    with open(out / "rank_series_rock_blues.csv", "w", encoding="utf-8") as f:
        f.write("word,year,cohort,rank,count\n")
        for word in ["rock", "blues"]:
            for year in sorted(by_year):
                order = [w for w, _ in ranked(by_year[year])]
                if word in by_year[year]:
                    f.write(f"{word},{year},popular,{order.index(word) + 1},{by_year[year][word]}\n")

    # Yearly swear-rate series (token-weighted) per cohort.
    with open(out / "swear_series.csv", "w", encoding="utf-8") as f:
        f.write("year,cohort,swear_tokens,total_tokens\n")
        tot = defaultdict(lambda: [0, 0])
        for m in per_song:
            tot[(m["year"], m["cohort"])][0] += m["swear_count"]
            tot[(m["year"], m["cohort"])][1] += m["length_words"]
        for key in sorted(tot, key=lambda k: (k[0], cohort_order[k[1]])):
            f.write(f"{key[0]},{key[1]},{tot[key][0]},{tot[key][1]}\n")


if __name__ == "__main__":
    main()
