#!/usr/bin/env python3
"""Author the 50-song synthetic mini-corpus used by the end-to-end tests.

Composition is fixed by construction: 10 popular songs and 40 other songs
spread over five years. The generator is seeded, so rerunning it rewrites
byte-identical files. Lyrics exercise the tokenizer's edge cases: section
annotations, punctuation, contractions, a curly apostrophe, a decomposed
accent, hyphenated words, punctuation-only lines and swear words.

Usage: make_minicorpus.py OUT_DIR   (writes minicorpus.csv and minicorpus.jsonl)
"""
import csv
import json
import random
import sys
from pathlib import Path

POOL = """
love heart baby night dance dream fire rain summer road river town city
light shadow window morning evening moon sun star sky ocean wave shore
sand train car highway radio guitar drum song music rhythm beat soul
blues rock roll jazz swing party money gold silver diamond ring kiss
touch hold hand eyes smile tears cry laugh lonely blue green red black
white wild sweet honey sugar candy cherry apple wine whiskey bottle glass
table chair door house home street corner bridge mountain valley field
flower rose garden tree leaf autumn winter spring snow storm thunder
lightning wind cloud shine glow burn freeze fall rise run walk talk sing
shout whisper call answer question secret truth lie promise forever
never always tonight today tomorrow yesterday time clock minute hour
season year young old forget remember believe trust faith hope pray angel
devil heaven paradise girl boy woman man mother father sister brother
friend lover stranger king queen prince crown throne castle palace
dollar nickel dime penny pocket shoes dress jacket coat hat boots sweater
velvet satin leather denim cotton silk paper letter phone telephone
message memory picture photograph frame mirror reflection
""".split()

FILLER = "i you me my the and it in on to we your oh yeah baby".split()
CONTRACTIONS = ["don't", "can't", "I'm", "won't", "lovin'", "it's", "you're"]
SWEARS = ["damn", "hell", "shit", "fuck", "bitch", "crap"]

YEARS = [1965, 1975, 1985, 1995, 2005]
POPULAR_YEARS = [1965] * 4 + [1985] * 3 + [2005] * 3
OTHER_YEARS = [y for y in YEARS for _ in range(8)]


def make_line(rng, n_words, swear_p, extra=()):
    words = []
    for _ in range(n_words):
        r = rng.random()
        if r < 0.25:
            words.append(rng.choice(FILLER))
        elif r < 0.30:
            words.append(rng.choice(CONTRACTIONS))
        elif r < 0.30 + swear_p:
            words.append(rng.choice(SWEARS))
        else:
            words.append(rng.choice(POOL))
    words.extend(extra)
    rng.shuffle(words)
    if rng.random() < 0.5:
        words[0] = words[0].capitalize()
    tail = rng.choice(["", "", ",", "!", "?", "...", ";"])
    return " ".join(words) + tail


def make_song(rng, idx, year, popular):
    swear_p = 0.01 + 0.01 * (year - 1965) / 10.0 + (0.0 if popular else 0.02)
    n_verse = rng.randint(10, 18) if popular else rng.randint(4, 12)
    chorus = [make_line(rng, rng.randint(3, 6), swear_p) for _ in range(2)]
    lines = []
    for v in range(n_verse):
        extra = []
        if rng.random() < 0.15:
            extra.append("rock" if year >= 1985 or rng.random() < 0.5 else "blues")
        if rng.random() < 0.10:
            extra.append("blues")
        lines.append(make_line(rng, rng.randint(3, 7), swear_p, extra))
        if v % 4 == 1:
            if rng.random() < 0.6:
                lines.append("[Chorus]")
            lines.extend(chorus)
    if idx % 7 == 0:
        lines.insert(1, "...")
    if idx % 9 == 0:
        lines.append("Cafe\u0301 au lait, don\u2019t go")
    if idx % 11 == 0:
        lines.append("rock-n-roll all-night long")
    if idx % 5 == 0:
        lines.append("")
    has_duration = not (idx % 6 == 3)
    duration = round(rng.uniform(150.0, 320.0), 1) if has_duration else None
    cohort = "popular" if popular else "other"
    return {
        "id": f"{cohort[:3]}-{year}-{idx:03d}",
        "title": f"Song {idx}",
        "artist": f"Artist {idx % 13}",
        "year": year,
        "duration_seconds": duration,
        "cohort": cohort,
        "lyrics": "\n".join(lines),
    }


def build():
    rng = random.Random(20190721)
    songs = []
    idx = 0
    for year in POPULAR_YEARS:
        songs.append(make_song(rng, idx, year, True))
        idx += 1
    for year in OTHER_YEARS:
        songs.append(make_song(rng, idx, year, False))
        idx += 1
    return songs


def escape_lyrics(text):
    return text.replace("\\", "\\\\").replace("\n", "\\n")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    songs = build()
    assert len(songs) == 50
    assert sum(s["cohort"] == "popular" for s in songs) == 10
    assert sum(s["cohort"] == "other" for s in songs) == 40
    cols = ["id", "title", "artist", "year", "duration_seconds", "cohort", "lyrics"]
    with open(out / "minicorpus.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(cols)
        for s in songs:
            row = dict(s)
            row["duration_seconds"] = "" if s["duration_seconds"] is None else repr(s["duration_seconds"])
            row["lyrics"] = escape_lyrics(s["lyrics"])
            w.writerow([row[c] for c in cols])
    with open(out / "minicorpus.jsonl", "w", encoding="utf-8") as f:
        for s in songs:
            f.write(json.dumps(s, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
