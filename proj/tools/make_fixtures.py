#!/usr/bin/env python3
"""Regenerates the small seeded corpora under data/fixtures/.

The fixtures are synthetic: two toy "languages" sharing one character
inventory, with a few characters used both as nouns and as verbs.
"""
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "fixtures"

NOUNS = list("人山水君子民國家天道心馬車")
VERBS = list("見行言食知問來去立生")
FLEX = list("王事名")  # used as both nouns and verbs

CLASSICAL_FW = {"也": "PART", "之": "PART", "而": "CCONJ", "者": "PART", "于": "ADP"}
MODERN_FW = {"的": "PART", "在": "ADP", "是": "AUX", "和": "CCONJ", "了": "AUX"}


def noun(rng):
    if rng.random() < 0.05:
        return (rng.choice(VERBS), "NOUN")
    if rng.random() < 0.2:
        return (rng.choice(FLEX), "NOUN")
    return (rng.choice(NOUNS), "NOUN")


def verb(rng):
    if rng.random() < 0.15:
        return (rng.choice(FLEX), "VERB")
    return (rng.choice(VERBS), "VERB")


def classical_sentence(rng):
    t = rng.randrange(7)
    if t == 6:
        s = [noun(rng), ("也", "PART"), verb(rng), noun(rng)]
    elif t == 0:
        s = [noun(rng), ("之", "PART"), noun(rng), verb(rng), ("也", "PART")]
    elif t == 1:
        s = [noun(rng), verb(rng), ("者", "PART"), noun(rng), ("也", "PART")]
    elif t == 2:
        s = [verb(rng), ("而", "CCONJ"), verb(rng), ("，", "PUNCT"), noun(rng), verb(rng)]
    elif t == 3:
        s = [noun(rng), verb(rng), ("于", "ADP"), noun(rng)]
    elif t == 4:
        s = [noun(rng), ("之", "PART"), noun(rng), ("也", "PART")]
    else:
        s = [("曰", "VERB"), ("，", "PUNCT"), noun(rng), verb(rng), noun(rng), ("也", "PART")]
    return s + [("。", "PUNCT")]


def modern_word(rng, tag):
    pool = NOUNS if tag == "NOUN" else VERBS
    a = rng.choice(pool + FLEX)
    b = rng.choice(pool)
    return (a + b, tag)


def modern_sentence(rng):
    n = lambda: modern_word(rng, "NOUN")
    v = lambda: modern_word(rng, "VERB")
    t = rng.randrange(6)
    if t == 0:
        s = [n(), ("的", "PART"), n(), v(), ("了", "AUX")]
    elif t == 1:
        s = [n(), ("在", "ADP"), n(), v()]
    elif t == 2:
        s = [n(), ("是", "AUX"), n(), ("的", "PART"), n()]
    elif t == 3:
        s = [n(), ("和", "CCONJ"), n(), v(), n()]
    elif t == 4:
        s = [("我", "PRON"), v(), ("了", "AUX"), n(), ("，", "PUNCT"), n(), v()]
    else:
        s = [n(), v(), n(), ("的", "PART"), n()]
    return s + [("。", "PUNCT")]


def conllu(sentences, prefix):
    lines = []
    for i, sent in enumerate(sentences, 1):
        lines.append(f"# sent_id = {prefix}-{i}")
        lines.append("# text = " + "".join(f for f, _ in sent))
        for j, (form, upos) in enumerate(sent, 1):
            head = "0" if j == 1 else "1"
            rel = "root" if j == 1 else "dep"
            lines.append(f"{j}\t{form}\t{form}\t{upos}\t_\t_\t{head}\t{rel}\t_\t_")
        lines.append("")
    return "\n".join(lines) + "\n"


def raw(rng, make, lines, per_line):
    out = []
    for _ in range(lines):
        out.append("".join(f for _ in range(per_line) for f, _ in make(rng)))
    return "\n".join(out) + "\n"


def norms(rng):
    rows = ["word,valence,arousal,concreteness,imageability,context_availability,familiarity"]
    seen = set()
    for _ in range(120):
        tag = rng.choice(["NOUN", "VERB"])
        w, _ = modern_word(rng, tag)
        if w in seen:
            continue
        seen.add(w)
        base = 5.5 if tag == "NOUN" else 3.5
        vals = [rng.uniform(1, 7), rng.uniform(1, 7), base + rng.gauss(0, 0.8),
                base + rng.gauss(0, 1.0), rng.uniform(1, 7), rng.uniform(1, 7)]
        rows.append(w + "," + ",".join(f"{min(7.0, max(1.0, v)):.2f}" for v in vals))
    rows.append("壞,not-a-number,1,1,1,1,1")  # exercises skipped-row accounting
    return "\n".join(rows) + "\n"


def tiny():
    # 30 tokens covering every position for both languages.
    c = [
        [("人", "NOUN"), ("之", "PART"), ("心", "NOUN"), ("也", "PART"), ("君", "NOUN"), ("見", "VERB"),
         ("者", "PART"), ("民", "NOUN"), ("。", "PUNCT")],
        [("行", "VERB"), ("而", "CCONJ"), ("言", "VERB"), ("于", "ADP"), ("國", "NOUN"), ("。", "PUNCT")],
    ]
    m = [
        [("人民", "NOUN"), ("的", "PART"), ("國家", "NOUN"), ("在", "ADP"), ("山水", "NOUN"), ("。", "PUNCT")],
        [("王事", "NOUN"), ("是", "AUX"), ("天道", "NOUN"), ("和", "CCONJ"), ("心事", "NOUN"), ("見", "VERB"),
         ("了", "AUX"), ("馬", "NOUN"), ("。", "PUNCT")],
    ]
    return c, m


def main():
    rng = random.Random(20240611)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "classical.conllu").write_text(conllu([classical_sentence(rng) for _ in range(400)], "c"), encoding="utf-8")
    (OUT / "modern.conllu").write_text(conllu([modern_sentence(rng) for _ in range(400)], "m"), encoding="utf-8")
    (OUT / "classical_raw.txt").write_text(raw(rng, classical_sentence, 300, 6), encoding="utf-8")
    (OUT / "modern_raw.txt").write_text(raw(rng, modern_sentence, 300, 4), encoding="utf-8")
    (OUT / "norms.csv").write_text(norms(rng), encoding="utf-8")
    c, m = tiny()
    (OUT / "tiny_classical.conllu").write_text(conllu(c, "tc"), encoding="utf-8")
    (OUT / "tiny_modern.conllu").write_text(conllu(m, "tm"), encoding="utf-8")


if __name__ == "__main__":
    main()
