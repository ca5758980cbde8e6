#!/usr/bin/env python3
"""Convert Brown-corpus word/tag files into Penn-tagged CoNLL (token<TAB>tag).

Usage: brown_to_penn.py BROWN_DIR OUT.conll [--every N] [--limit N]

Sentences with tags that have no Penn counterpart are dropped.
"""

import argparse
import os
import re
import sys

SIMPLE = {
    "nn": "NN", "nns": "NNS", "np": "NNP", "nps": "NNPS", "nr": "NN", "nrs": "NNS",
    "in": "IN", "at": "DT", "jj": "JJ", "jjr": "JJR", "jjs": "JJS", "jjt": "JJS",
    "cc": "CC", "rb": "RB", "rbr": "RBR", "rbt": "RBS", "rn": "RB", "rp": "RP",
    "vbn": "VBN", "vbd": "VBD", "vbg": "VBG", "vbz": "VBZ", "cs": "IN",
    "pps": "PRP", "ppss": "PRP", "ppo": "PRP", "ppl": "PRP", "ppls": "PRP",
    "pp$": "PRP$", "pp$$": "PRP", "to": "TO", "cd": "CD", "od": "JJ", "md": "MD",
    "be": "VB", "bed": "VBD", "bedz": "VBD", "beg": "VBG", "bem": "VBP",
    "ben": "VBN", "ber": "VBP", "bez": "VBZ", "hvd": "VBD", "hvg": "VBG",
    "hvn": "VBN", "hvz": "VBZ", "dod": "VBD", "doz": "VBZ", "ap": "JJ",
    "dt": "DT", "dti": "DT", "dts": "DT", "dtx": "CC", "abn": "DT", "abl": "PDT",
    "abx": "DT", "ex": "EX", "wdt": "WDT", "wps": "WP", "wpo": "WP", "wp$": "WP$",
    "wrb": "WRB", "wql": "WRB", "ql": "RB", "qlp": "RB", "pn": "NN", "uh": "UH",
    "*": "RB", ".": ".", ",": ",", ":": ":", "--": ":", "(": "-LRB-",
    ")": "-RRB-", "``": "``", "''": "''", "'": "''",
}
# Base forms whose Penn tag depends on context (VB after a modal, to or do).
BASE_VERBS = {"vb", "hv", "do"}
AP_WORDS = {"more": "JJR", "less": "JJR", "most": "JJS", "least": "JJS"}
DO_FORMS = {"do", "does", "did", "don't", "doesn't", "didn't"}


class Unmappable(Exception):
    pass


def normalize(tag):
    tag = re.sub(r"-(tl|hl|nc)$", "", tag)
    tag = re.sub(r"-(tl|hl|nc)$", "", tag)
    return tag


def map_simple(word, tag, prev_tag, prev_word):
    if tag in BASE_VERBS:
        if prev_tag in ("MD", "TO") or prev_word is None or prev_word.lower() in DO_FORMS:
            return "VB"
        return "VBP"
    if tag == "ap" and word.lower() in AP_WORDS:
        return AP_WORDS[word.lower()]
    if tag in SIMPLE:
        return SIMPLE[tag]
    raise Unmappable(tag)


def split_negation(word, tag, prev_tag, prev_word):
    """Splits md* / do* / be* style forms such as can't, don't, isn't."""
    base = tag[:-1]
    lower = word.lower()
    if lower.endswith("n't"):
        head, tail = word[:-3], word[-3:]
    elif lower == "cannot":
        head, tail = word[:3], word[3:]
    elif lower.endswith("not"):
        head, tail = word[:-3], word[-3:]
    else:
        raise Unmappable(tag)
    if not head:
        raise Unmappable(tag)
    return [(head, map_simple(head, base, prev_tag, prev_word)), (tail, "RB")]


def convert_token(word, tag, prev_tag, prev_word):
    if tag.startswith("fw-"):
        return [(word, "FW")]
    if tag == "nil":
        raise Unmappable(tag)
    if "+" in tag:
        parts = tag.split("+")
        if len(parts) != 2:
            raise Unmappable(tag)
        cut = word.rfind("'")
        if cut <= 0:
            raise Unmappable(tag)
        if word[cut - 1:].lower().startswith("n'"):
            cut -= 1
        head, tail = word[:cut], word[cut:]
        first = convert_token(head, parts[0], prev_tag, prev_word)
        second = convert_token(tail, parts[1], first[-1][1], head)
        return first + second
    if tag.endswith("*") and tag != "*":
        return split_negation(word, tag, prev_tag, prev_word)
    if tag.endswith("$") and tag not in ("pp$", "pp$$", "wp$"):
        base = tag[:-1]
        if word.endswith("'s"):
            head, tail = word[:-2], word[-2:]
        elif word.endswith("'"):
            head, tail = word[:-1], word[-1:]
        else:
            raise Unmappable(tag)
        if not head:
            raise Unmappable(tag)
        return [(head, map_simple(head, base, prev_tag, prev_word)), (tail, "POS")]
    return [(word, map_simple(word, tag, prev_tag, prev_word))]


def convert_sentence(line):
    out = []
    prev_tag, prev_word = None, None
    for item in line.split():
        word, sep, tag = item.rpartition("/")
        if not sep or not word:
            raise Unmappable(item)
        for w, t in convert_token(word, normalize(tag.lower()), prev_tag, prev_word):
            out.append((w, t))
            prev_tag, prev_word = t, w
    return out


def brown_files(root):
    for name in sorted(os.listdir(root)):
        if re.fullmatch(r"c[a-r]\d\d", name):
            yield os.path.join(root, name)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("brown_dir")
    ap.add_argument("out")
    ap.add_argument("--every", type=int, default=1, help="keep every Nth sentence")
    ap.add_argument("--limit", type=int, default=0, help="stop after N sentences")
    args = ap.parse_args()

    seen = kept = dropped = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as out:
        for path in brown_files(args.brown_dir):
            with open(path, encoding="latin-1") as f:
                for line in f:
                    if not line.strip():
                        continue
                    seen += 1
                    if (seen - 1) % args.every:
                        continue
                    try:
                        sentence = convert_sentence(line)
                    except Unmappable:
                        dropped += 1
                        continue
                    for w, t in sentence:
                        out.write(f"{w}\t{t}\n")
                    out.write("\n")
                    kept += 1
                    if args.limit and kept >= args.limit:
                        break
            if args.limit and kept >= args.limit:
                break
    print(f"sentences read={seen} kept={kept} dropped={dropped}", file=sys.stderr)


if __name__ == "__main__":
    main()
