#!/usr/bin/env python3
"""Independent recomputation of the 16 handcrafted features for the curated
20-tweet fixture.

Writes tests/data/feature_tweets.tsv (the dataset file), fixture lexicons,
and tests/data/feature_expected.tsv (one row per tweet, t_lex as an exact
fraction "distinct/total", log slots with 17 significant digits). With
--check, compares against the frozen files.
"""

import csv
import io
import math
import re
import sys
from pathlib import Path

SLANG = ["lol", "omg", "smh", "gonna", "u"]
INTERJECTIONS = ["wow", "ugh", "oh", "yay"]

# (id, text, verified, followers, followees, tweets)
TWEETS = [
    ("t01", "RT @a: #flood http://x.co now", 0, 0, 0, 0),
    ("t02", "fire fire help", 1, 9, 99, 0),
    ("t03", "", 0, 999, 999, 999),
    ("t04", "omg the river is rising lol", 0, 12, 40, 300),
    ("t05", "Wow. Just wow!!! #storm #storm", 1, 150000, 20, 4521),
    ("t06", "Evacuation centre open at http://gov.example/shelters and https://t.co/Ab1", 1, 88213, 412, 10234),
    ("t07", "@user1 @user2 need water at main st", 0, 3, 5, 17),
    ("t08", "ugh, power out again... smh", 0, 201, 199, 8000),
    ("t09", "ça va? #ok 🔥🔥", 0, 1, 1, 1),
    ("t10", "Road closed: I-95 north, exit 12", 1, 1000000, 10, 99999),
    ("t11", "gonna be a long night u know", 0, 45, 450, 4500),
    ("t12", "oh oh oh", 0, 7, 7, 7),
    ("t13", "donation link https://give.example/x?id=5 please share", 0, 64, 64, 64),
    ("t14", "\"Stay home\" says the mayor, \"stay safe\"", 1, 25000, 300, 1200),
    ("t15", "yay rescue teams arrived rt @news", 0, 19, 19, 19),
    ("t16", "art @gallery closed today", 0, 500, 60, 700),
    ("t17", "lolol not funny", 0, 2, 2, 2),
    ("t18", "!!! ??? ...", 0, 0, 10, 100),
    ("t19", "http://only.a/link", 0, 99, 9, 999),
    ("t20", "Help needed: 3 families trapped near bridge #help @redcross RT pls", 1, 3141, 592, 6535),
]

URL = re.compile(r"(?i)https?://[^ \t\n\r\f\v]*")


def tokens(text):
    without_urls = URL.sub(" ", text)
    ascii_only = "".join(c for c in without_urls if ord(c) < 128).lower()
    cleaned = "".join(c if c.isalnum() else " " for c in ascii_only)
    return cleaned.split()


def text_block(text):
    raw = text.encode("utf-8")
    hashtags = len(re.findall(rb"#[A-Za-z0-9]", raw))
    mentions = len(re.findall(rb"@[A-Za-z0-9]", raw))
    urls = len(re.findall(rb"(?i)https?://", raw))
    retweet = bool(re.match(rb"(?i)\s*rt ?@", raw)) or bool(
        re.search(rb"(?i)(?<![A-Za-z0-9])rt\s*@[A-Za-z0-9]", raw))
    toks = tokens(text)
    t_lex = "%d/%d" % (len(set(toks)), len(toks)) if toks else "0/1"
    return [
        str(len(text)),
        str(len(toks)),
        str(hashtags),
        str(urls),
        str(mentions),
        str(int(hashtags > 0)),
        str(int(mentions > 0)),
        str(int(retweet)),
        str(int(any(t in SLANG for t in toks))),
        str(int(urls > 0)),
        t_lex,
        str(int(any(t in INTERJECTIONS for t in toks))),
    ]


def log_slot(n):
    return "%.17g" % math.log10(n + 1)


def render():
    data = io.StringIO()
    writer = csv.writer(data, delimiter="\t", lineterminator="\n")
    writer.writerow(["id", "text", "label", "user_verified", "user_followers", "user_followees",
                     "user_tweets"])
    for i, (tid, text, verified, followers, followees, tweets) in enumerate(TWEETS):
        label = "Informative" if i % 2 == 0 else "NotInformative"
        writer.writerow([tid, text, label, verified, followers, followees, tweets])

    expected = ["id\t" + "\t".join([
        "n_chars", "n_words", "n_hashtags", "n_url", "n_at", "b_hashtag", "b_at", "b_rt", "b_slang",
        "b_url", "t_lex", "b_interj", "b_usr", "n_followers_log", "n_followees_log",
        "n_tweets_log"])]
    for tid, text, verified, followers, followees, tweets in TWEETS:
        row = text_block(text) + [str(verified), log_slot(followers), log_slot(followees),
                                  log_slot(tweets)]
        expected.append(tid + "\t" + "\t".join(row))
    return {
        "feature_tweets.tsv": data.getvalue(),
        "feature_expected.tsv": "\n".join(expected) + "\n",
        "fixture_slang.txt": "# fixture slang\n" + "\n".join(SLANG) + "\n",
        "fixture_interjections.txt": "# fixture interjections\n" + "\n".join(INTERJECTIONS) + "\n",
    }


def main():
    out_dir = Path(__file__).resolve().parent.parent / "data"
    files = render()
    if "--check" in sys.argv:
        bad = [name for name, text in files.items()
               if (out_dir / name).read_text(encoding="utf-8") != text]
        for name in bad:
            print(name + " differs from the oracle output", file=sys.stderr)
        return 1 if bad else 0
    for name, text in files.items():
        with (out_dir / name).open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
