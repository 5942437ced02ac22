#!/usr/bin/env python3
"""Writes the synthetic sample data in data/sample (fixed seed, stable output)."""
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "sample"
rng = random.Random(20180601)

POS = ["love", "happy", "great", "amazing", "wonderful", "awesome", "beautiful", "excited", "glad", "perfect"]
NEG = ["hate", "awful", "terrible", "horrible", "worst", "miserable", "disgusting", "angry", "sad", "ugly"]
NEU = ["meeting", "bus", "today", "schedule", "report", "tuesday", "coffee", "office", "train", "weather"]
EMO = {
    "anger": ["furious", "rage", "angry", "outraged", "mad"],
    "fear": ["scared", "terrified", "afraid", "panic", "nervous"],
    "joy": ["delighted", "happy", "cheerful", "joyful", "glad"],
    "sadness": ["sad", "grief", "miserable", "heartbroken", "lonely"],
}
FILL = ["the", "my", "this", "so", "really", "just", "at", "with", "again", "now"]
DECOR = ["", "", "", " #mondays", " @friend", " :)", " :(", " http://t.co/x1", " !!!", " 😂"]
LABELS = ["anger", "anticipation", "disgust", "fear", "joy", "love", "optimism", "pessimism", "sadness", "surprise", "trust"]


def tweet(words):
    words = words + rng.sample(FILL, 3)
    rng.shuffle(words)
    text = " ".join(words)
    return text[0].upper() + text[1:] + rng.choice(DECOR)


def valence_rows(n):
    rows = []
    for i in range(n):
        p, q = rng.randint(0, 3), rng.randint(0, 3)
        words = rng.sample(POS, p) + rng.sample(NEG, q) + rng.sample(NEU, 2)
        score = min(1.0, max(0.0, 0.5 + 0.15 * (p - q) + rng.uniform(-0.04, 0.04)))
        rows.append((tweet(words), score))
    return rows


def emotion_rows(emotion, n):
    rows = []
    for i in range(n):
        k = rng.randint(0, 3)
        words = rng.sample(EMO[emotion], k) + rng.sample(NEU, 2) + rng.sample(POS + NEG, 1)
        score = min(1.0, max(0.0, 0.1 + 0.27 * k + rng.uniform(-0.05, 0.05)))
        rows.append((tweet(words), score))
    return rows


def write(name, lines):
    (OUT / name).write_text("".join(l + "\n" for l in lines), encoding="utf-8")


def semeval(name, prefix, rows, dim, classes=None):
    lines = ["ID\tTweet\tAffect Dimension\t" + ("Intensity Class" if classes else "Intensity Score")]
    for i, (text, score) in enumerate(rows):
        if classes:
            lo, hi = classes
            c = lo + min(hi - lo, int(score * (hi - lo + 1)))
            label = f"{c}: class {c}"
        else:
            label = f"{score:.3f}"
        lines.append(f"{prefix}-{i:04d}\t{text}\t{dim}\t{label}")
    write(name, lines)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    corpus = []
    for i in range(90):
        cls = (1, 0, -1)[i % 3]
        pool = POS if cls == 1 else NEG if cls == -1 else NEU
        words = rng.sample(pool, 2) + rng.sample(NEU, 1)
        # Emotion words give each keyword split both sides.
        if cls != 0 and rng.random() < 0.5:
            words.append(rng.choice(EMO["joy"] if cls == 1 else EMO[rng.choice(["anger", "fear", "sadness"])]))
        corpus.append(f"c{i:04d}\t{tweet(words)}\t{cls}")
    write("corpus_3class.tsv", corpus)

    for split, n in (("train", 80), ("dev", 40)):
        v = valence_rows(n)
        semeval(f"V-reg_{split}.txt", f"v{split}", v, "valence")
        semeval(f"V-oc_{split}.txt", f"v{split}", v, "valence", (-3, 3))
        for emotion in EMO:
            e = emotion_rows(emotion, n)
            semeval(f"EI-reg_{emotion}_{split}.txt", f"{emotion[:2]}{split}", e, emotion)
            semeval(f"EI-oc_{emotion}_{split}.txt", f"{emotion[:2]}{split}", e, emotion, (0, 3))
        lines = ["ID\tTweet\t" + "\t".join(LABELS)]
        for i in range(n):
            present = rng.sample(list(EMO), rng.randint(1, 2))
            words = [rng.choice(EMO[e]) for e in present] + rng.sample(NEU, 2)
            flags = ["1" if l in present else "0" for l in LABELS]
            if "joy" in present:
                flags[LABELS.index("optimism")] = "1"
            if "sadness" in present:
                flags[LABELS.index("pessimism")] = "1"
            lines.append(f"e{split}-{i:04d}\t{tweet(words)}\t" + "\t".join(flags))
        write(f"E-c_{split}.txt", lines)


if __name__ == "__main__":
    main()
