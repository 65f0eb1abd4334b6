#!/usr/bin/env python3
"""Generate the bundled synthetic mini-corpus and its companion files.

Writes into data/mini_corpus/ (or --out):
  mini_corpus.tsv        200 labeled synthetic tweets with user columns
  sentence_vectors.tsv   synthetic 16-dim sentence vectors, one per record
  word_vectors.txt       toy 8-dim word vectors for the corpus vocabulary

The output depends only on --seed.
"""

import argparse
import math
import random
from pathlib import Path

PLACES = ["riverside", "downtown", "harbor", "main street", "the bridge", "north county",
          "eastside", "the airport", "central station", "west valley"]
HAZARDS = ["flooding", "wildfire", "earthquake", "storm", "landslide", "outbreak"]
RESOURCES = ["water", "blankets", "food", "medical supplies", "shelter", "generators"]
NUMBERS = ["12", "35", "48", "120", "300", "1500"]

INFORMATIVE = [
    "Road closed near {place} due to {hazard}, avoid the area {tag}",
    "Officials confirm {num} people evacuated from {place} after the {hazard} {url}",
    "{num} new cases reported in {place} today, health authority update {url}",
    "Shelter open at {place} school, bring {resource} if you can {tag}",
    "Power outage across {place} after {hazard}, crews expected by tonight",
    "@{user} emergency line for {place} residents is now open {url}",
    "Volunteers needed at {place} to distribute {resource} {tag} {url}",
    "RT @{user}: {hazard} warning issued for {place} until midnight {tag}",
    "Death toll from {hazard} in {place} rises to {num} according to officials",
    "Bridge at {place} damaged by {hazard}, detour via route {num}",
]
NOT_INFORMATIVE = [
    "omg I cannot believe this {hazard} lol",
    "praying for everyone tonight, stay safe {tag}",
    "ugh this weather is ruining my weekend plans smh",
    "wow thats crazy @{user} tbh",
    "so bored at home, anyone wanna watch a movie",
    "hmm not sure what to think about all this news",
    "my cat is scared of the thunder aww",
    "lol my boss says work as usual tomorrow {tag}",
    "yay finally some sunshine after the {hazard}",
    "idk why people keep panicking, gonna be fine",
]
HASHTAGS = ["#flood", "#wildfire", "#covid19", "#staysafe", "#breaking", "#help", "#news"]
USERS = ["cityalerts", "redcross", "localnews", "weatherdesk", "mayoroffice", "jenny", "mike_22"]


def fill(template, rng):
    return template.format(
        place=rng.choice(PLACES),
        hazard=rng.choice(HAZARDS),
        resource=rng.choice(RESOURCES),
        num=rng.choice(NUMBERS),
        tag=rng.choice(HASHTAGS),
        user=rng.choice(USERS),
        url="http://t.co/" + "".join(rng.choice("abcdefghijkmnpqrstuvwxyz0123456789") for _ in range(8)),
    )


def make_records(rng, count):
    records = []
    for i in range(count):
        informative = i % 2 == 0
        template = rng.choice(INFORMATIVE if informative else NOT_INFORMATIVE)
        text = fill(template, rng)
        # A few flipped labels keep the task from being trivially separable.
        label_informative = informative if rng.random() > 0.08 else not informative
        if informative:
            verified = 1 if rng.random() < 0.6 else 0
            followers = int(10 ** rng.uniform(2.5, 5.5))
        else:
            verified = 1 if rng.random() < 0.1 else 0
            followers = int(10 ** rng.uniform(0.5, 3.5))
        followees = int(10 ** rng.uniform(1.0, 3.5))
        tweets = int(10 ** rng.uniform(1.5, 4.5))
        records.append({
            "id": "mc%03d" % (i + 1),
            "text": text,
            "label": "Informative" if label_informative else "NotInformative",
            "user_verified": verified,
            "user_followers": followers,
            "user_followees": followees,
            "user_tweets": tweets,
            "informative": label_informative,
        })
    rng.shuffle(records)
    return records


def write_corpus(records, path):
    cols = ["id", "text", "label", "user_verified", "user_followers", "user_followees", "user_tweets"]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\t".join(cols) + "\n")
        for r in records:
            f.write("\t".join(str(r[c]) for c in cols) + "\n")


def fmt(value):
    return "%.6g" % value


def write_sentence_vectors(records, rng, path, dim=16):
    direction = [rng.gauss(0.0, 1.0) for _ in range(dim)]
    norm = math.sqrt(sum(v * v for v in direction))
    direction = [v / norm for v in direction]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("#dim=%d count=%d\n" % (dim, len(records)))
        f.write("# synthetic vectors with a class signal along one direction\n")
        for r in records:
            sign = 1.0 if r["informative"] else -1.0
            vec = [sign * 1.5 * d + rng.gauss(0.0, 1.0) for d in direction]
            f.write(r["id"] + "\t" + " ".join(fmt(v) for v in vec) + "\n")


def write_word_vectors(records, rng, path, dim=8):
    words = set()
    for r in records:
        cleaned = "".join(c.lower() if c.isascii() and c.isalnum() else " " for c in r["text"])
        words.update(cleaned.split())
    words = sorted(words)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("%d %d\n" % (len(words), dim))
        for w in words:
            f.write(w + " " + " ".join(fmt(rng.uniform(-1.0, 1.0)) for _ in range(dim)) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20201)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--out", type=Path,
                        default=Path(__file__).resolve().parent.parent / "data" / "mini_corpus")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    records = make_records(rng, args.count)
    write_corpus(records, args.out / "mini_corpus.tsv")
    write_sentence_vectors(records, random.Random(args.seed + 1), args.out / "sentence_vectors.tsv")
    write_word_vectors(records, random.Random(args.seed + 2), args.out / "word_vectors.txt")


if __name__ == "__main__":
    main()
