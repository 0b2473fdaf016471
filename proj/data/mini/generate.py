#!/usr/bin/env python3
"""Regenerates the mini study in this directory.

Vectors are toy values: each word sits near the centre of its topic, and
synonyms sit close together. Run from anywhere; files land next to this script.
"""
import json
import random
import re
from pathlib import Path

HERE = Path(__file__).resolve().parent
DIM = 8

PARAPHRASE = [
    ("The cat sat on the mat.", "A cat was sitting on the mat.", [5, 5, 4]),
    ("The dog barked at the mailman.", "The mailman was barked at by the dog.", [5, 4, 5]),
    ("It rained all day in the city.", "The city had rain for the whole day.", [5, 4, 4]),
    ("She cooked pasta for dinner.", "She made pasta for her evening meal.", [4, 4, 5]),
    ("The train to Paris was late.", "The Paris train arrived late.", [4, 5, 4]),
    ("He fixed the old bicycle.", "He repaired the old bike.", [5, 5, 5]),
    ("The children played in the park.", "Kids were playing in the park.", [5, 4, 4]),
    ("The meeting starts at noon.", "The meeting begins at midday.", [5, 5, 4]),
    ("They bought fresh bread at the bakery.", "They purchased fresh bread from the bakery.", [5, 4, 5]),
    ("The storm knocked down a tree.", "A tree fell during the storm.", [4, 4, 3]),
    ("My phone battery died.", "The battery of my phone ran out.", [4, 5, 4]),
    ("The river flooded the village.", "The village was flooded by the river.", [5, 5, 5]),
]

STYLE = [
    ("give me the report now", "Could you please send me the report?", [4, 3, 4]),
    ("this food is awful", "I am afraid the meal was not to my taste.", [3, 3, 4]),
    ("the train was super late lol", "The train was considerably delayed.", [4, 4, 3]),
    ("fix the bike already", "Would you kindly repair the bicycle?", [4, 3, 3]),
    ("the meeting is at noon, be there", "Please attend the meeting at noon.", [4, 4, 5]),
    ("that dog never shuts up", "The dog barks rather frequently.", [3, 3, 3]),
    ("it's raining like crazy", "There is heavy rain today.", [4, 4, 4]),
    ("the kids trashed the park", "The children left the park untidy.", [3, 4, 3]),
    ("bread here is the best", "The bakery offers excellent bread.", [4, 3, 4]),
    ("my phone is dead again", "My phone has run out of battery once more.", [4, 4, 5]),
    ("the storm wrecked everything", "The storm caused considerable damage.", [4, 3, 4]),
    ("dinner was pasta, whatever", "We had pasta for dinner.", [4, 4, 4]),
]

TOPICS = {
    "animal": "cat cats dog dogs kids children barked barks mailman mat sitting sat shuts",
    "weather": "rain rained raining storm tree fell river flooded village heavy crazy wrecked damage",
    "food": "pasta dinner meal cooked made bread bakery fresh bought purchased food awful taste evening best excellent",
    "travel": "train paris late delayed arrived bicycle bike fixed repaired fix repair old",
    "work": "meeting noon midday starts begins report send attend phone battery died dead ran",
    "function": "the a an on at in of for to by was were is it he she they my we you me i this that there "
    "be had has have her his their please could would kindly am not as here once more out again down "
    "all day whole city during during lol super like never up always rather frequently considerably left "
    "untidy park played playing trashed caused everything offers whatever afraid already now give with "
    "from time today",
}

SYNONYMS = [
    ("bike", "bicycle"), ("fix", "repair"), ("fixed", "repaired"), ("kids", "children"),
    ("noon", "midday"), ("starts", "begins"), ("bought", "purchased"), ("late", "delayed"),
    ("meal", "dinner"), ("awful", "bad"),
]

NOUNS = ("cat cats dog dogs mat mailman city day pasta dinner meal train paris bicycle bike children kids "
         "park meeting noon midday bread bakery storm tree phone battery river village report food taste "
         "rain time damage everything")


def tokens(text):
    return re.findall(r"[a-z0-9]+(?:'[a-z0-9]+)?|[^\sa-z0-9]", text.lower())


def build_vectors(rng, jitter):
    centres = {t: [rng.gauss(0, 1) for _ in range(DIM)] for t in TOPICS}
    vecs = {}
    for topic, words in TOPICS.items():
        for w in words.split():
            if w not in vecs:
                vecs[w] = [c + rng.gauss(0, jitter) for c in centres[topic]]
    for a, b in SYNONYMS:
        if a in vecs:
            vecs[b] = [x + rng.gauss(0, 0.05) for x in vecs[a]]
    return vecs


def write_table(path, vecs, skip=()):
    with open(path, "w") as f:
        for w in sorted(vecs):
            if w in skip:
                continue
            f.write(w + " " + " ".join(f"{x:.4f}" for x in vecs[w]) + "\n")


def write_pairs(path, prefix, rows):
    with open(path, "w") as f:
        for k, (a, b, scores) in enumerate(rows, 1):
            f.write(json.dumps({"id": f"{prefix}-{k}", "a": a, "b": b, "scores": scores}) + "\n")


def random_rows(rng, rows, n):
    out, seen = [], set()
    while len(out) < n:
        i, j = rng.randrange(len(rows)), rng.randrange(len(rows))
        if i == j or (i, j) in seen:
            continue
        seen.add((i, j))
        out.append((rows[i][rng.randrange(2)], rows[j][rng.randrange(2)], [rng.choice([1, 1, 2]) for _ in range(3)]))
    return out


def main():
    rng = random.Random(20240101)
    w2v = build_vectors(rng, 0.35)
    fasttext = build_vectors(rng, 0.5)
    write_table(HERE / "w2v.txt", w2v, skip={"lol", "whatever"})
    write_table(HERE / "fasttext.txt", fasttext)

    para_rand = random_rows(rng, PARAPHRASE, 10)
    style_rand = random_rows(rng, STYLE, 10)
    write_pairs(HERE / "paraphrase.jsonl", "para", PARAPHRASE)
    write_pairs(HERE / "style.jsonl", "style", STYLE)
    write_pairs(HERE / "paraphrase_random.jsonl", "para_rand", para_rand)
    write_pairs(HERE / "style_random.jsonl", "style_rand", style_rand)

    with open(HERE / "nouns.txt", "w") as f:
        f.write("# toy noun list for the mini study\n")
        for w in sorted(set(NOUNS.split())):
            f.write(w + "\n")
    with open(HERE / "synonyms.jsonl", "w") as f:
        for a, b in SYNONYMS:
            f.write(json.dumps({"word": a, "synonyms": [b]}) + "\n")

    # Contextual vectors: the static vector shifted toward its sentence mean.
    with open(HERE / "contextual.jsonl", "w") as f:
        for ds, rows in (("para", PARAPHRASE), ("style", STYLE), ("para_rand", para_rand), ("style_rand", style_rand)):
            for k, (a, b, _) in enumerate(rows, 1):
                rec = {"id": f"{ds}/{ds}-{k}"}
                for side, text in (("a", a), ("b", b)):
                    toks = [t for t in tokens(text) if t in fasttext]
                    base = [fasttext[t] for t in toks]
                    mean = [sum(col) / len(base) for col in zip(*base)]
                    vecs = [[round(x + 0.3 * m + rng.gauss(0, 0.05), 4) for x, m in zip(v, mean)] for v in base]
                    rec["tokens_" + side] = toks
                    rec["vecs_" + side] = vecs
                    rec["sent_" + side] = [round(sum(col) / len(vecs), 4) for col in zip(*vecs)]
                f.write(json.dumps(rec) + "\n")

    manifest = {
        "datasets": [
            {"dataset_id": "para", "kind": "paraphrase", "path": "paraphrase.jsonl"},
            {"dataset_id": "style", "kind": "style_transfer", "path": "style.jsonl"},
            {"dataset_id": "para_rand", "kind": "random", "path": "paraphrase_random.jsonl", "source_dataset_id": "para"},
            {"dataset_id": "style_rand", "kind": "random", "path": "style_random.jsonl", "source_dataset_id": "style"},
        ],
        "metadata": {"name": "mini study", "note": "toy vectors, synthetic annotations"},
    }
    (HERE / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
