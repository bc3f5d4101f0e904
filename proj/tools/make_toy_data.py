# Copyright 2026 The Biopipe Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled toy corpora under data/.

Output is deterministic for a given seed:
  data/general/{train,dev,test}.{conllu,txt}   general English treebank
  data/bio/{train,dev,test}.{conllu,txt}       biomedical treebank
  data/ner/{train,dev}.bioes                   clinical NER corpus
  data/charlm/clinical.txt                     raw text for character LMs
  data/notes/note_XX.txt                       clinical notes for silver data
"""

import argparse
import pathlib
import random

# (form, lemma, upos, xpos)
PRONOUNS = [("She", "she", "PRON", "PRP"), ("He", "he", "PRON", "PRP"), ("They", "they", "PRON", "PRP"),
            ("We", "we", "PRON", "PRP"), ("I", "I", "PRON", "PRP")]
GEN_NOUNS = ["dog", "cat", "car", "house", "book", "garden", "letter", "movie", "song", "river", "friend",
             "teacher", "window", "bicycle", "neighbor", "kitchen", "picture", "ticket"]
GEN_VERBS = [("liked", "like"), ("saw", "see"), ("wanted", "want"), ("found", "find"), ("opened", "open"),
             ("washed", "wash"), ("painted", "paint"), ("bought", "buy"), ("visited", "visit"),
             ("cleaned", "clean"), ("sold", "sell"), ("borrowed", "borrow")]
GEN_ADJS = ["old", "small", "red", "happy", "quiet", "cold", "warm", "tall", "well-known", "old-fashioned",
            "part-time", "long-term"]
GEN_ADVS = ["today", "yesterday", "quickly", "slowly", "again"]
GEN_PLACES = ["near", "behind", "beside"]
NEG_AUX = [("did", "do", "VBD"), ("could", "could", "MD"), ("does", "do", "VBZ"), ("would", "would", "MD")]

BIO_NOUNS = ["apoptosis", "proliferation", "differentiation", "transcription", "phosphorylation", "migration",
             "angiogenesis", "senescence", "methylation", "secretion"]
BIO_SUBJ = [("cells", "cell"), ("mice", "mouse"), ("embryos", "embryo"), ("neurons", "neuron"),
            ("fibroblasts", "fibroblast"), ("tumors", "tumor")]
GENES = ["TP53", "BRCA1", "EGFR", "MYC", "KRAS", "Sox9", "Pax6", "Shh", "Wnt3a", "Notch1"]
BIO_VERBS = [("induced", "induce"), ("reduced", "reduce"), ("increased", "increase"), ("inhibited", "inhibit"),
             ("activated", "activate"), ("promoted", "promote"), ("blocked", "block"), ("enhanced", "enhance")]
# hyphenated nominals split as prefix, hyphen, head
BIO_PREFIXED = [("up", "ADV", "RB", "regulation"), ("down", "ADV", "RB", "regulation"),
                ("co", "NOUN", "NN", "expression"), ("over", "ADV", "RB", "expression"),
                ("re", "NOUN", "NN", "activation"), ("cross", "NOUN", "NN", "talk")]
BIO_SUFFIXED = ["dependent", "mediated", "induced", "deficient", "positive"]
BIO_MODS = [("wild", "ADJ", "JJ", "type"), ("non", "ADJ", "JJ", "coding"), ("cell", "NOUN", "NN", "free")]


def cap(form):
    return form[0].upper() + form[1:]


class Sentence:
    def __init__(self):
        self.rows = []  # [form, lemma, upos, xpos, head, deprel, space_after]

    def add(self, form, lemma, upos, xpos, head, deprel, space=True):
        self.rows.append([form, lemma, upos, xpos, head, deprel, space])
        return len(self.rows)

    def glue(self):
        self.rows[-1][6] = False


def plural(noun):
    return noun + "s"


def gen_negated(r):
    s = Sentence()
    subj = r.choice(PRONOUNS)
    aux = r.choice(NEG_AUX)
    form, lemma = r.choice(GEN_VERBS)
    s.add(subj[0], subj[1], subj[2], subj[3], 4, "nsubj")
    s.add(aux[0], aux[1], "AUX", aux[2], 4, "aux", False)
    s.add("n't", "not", "PART", "RB", 4, "advmod")
    s.add(lemma, lemma, "VERB", "VB", 0, "root")
    s.add("the", "the", "DET", "DT", 6, "det")
    s.add(r.choice(GEN_NOUNS), None, "NOUN", "NN", 4, "obj", False)
    s.add(".", ".", "PUNCT", ".", 4, "punct")
    return s


def gen_transitive(r):
    s = Sentence()
    adj = r.choice(GEN_ADJS)
    form, lemma = r.choice(GEN_VERBS)
    s.add("The", "the", "DET", "DT", 3, "det")
    s.add(adj, adj, "ADJ", "JJ", 3, "amod")
    s.add(r.choice(GEN_NOUNS), None, "NOUN", "NN", 4, "nsubj")
    s.add(form, lemma, "VERB", "VBD", 0, "root")
    s.add("a", "a", "DET", "DT", 6, "det")
    s.add(r.choice(GEN_NOUNS), None, "NOUN", "NN", 4, "obj")
    adv = r.choice(GEN_ADVS)
    s.add(adv, adv, "ADV", "RB", 4, "advmod", False)
    s.add(".", ".", "PUNCT", ".", 4, "punct")
    return s


def gen_copula(r):
    s = Sentence()
    subj = r.choice(PRONOUNS[:4])
    aux = ("was", "be", "VBD") if subj[0] in ("She", "He") else ("were", "be", "VBD")
    adj = r.choice(GEN_ADJS)
    s.add(subj[0], subj[1], subj[2], subj[3], 4, "nsubj")
    s.add(aux[0], aux[1], "AUX", aux[2], 4, "cop", False)
    s.add("n't", "not", "PART", "RB", 4, "advmod")
    s.add(adj, adj, "ADJ", "JJ", 0, "root", False)
    s.add(".", ".", "PUNCT", ".", 4, "punct")
    return s


def gen_locative(r):
    s = Sentence()
    subj = r.choice(PRONOUNS)
    form, lemma = r.choice(GEN_VERBS)
    owner = r.choice(GEN_NOUNS)
    s.add(subj[0], subj[1], subj[2], subj[3], 2, "nsubj")
    s.add(form, lemma, "VERB", "VBD", 0, "root")
    s.add("the", "the", "DET", "DT", 4, "det")
    s.add(owner, owner, "NOUN", "NN", 6, "nmod:poss", False)
    s.add("'s", "'s", "PART", "POS", 4, "case")
    s.add(r.choice(GEN_NOUNS), None, "NOUN", "NN", 2, "obj")
    prep = r.choice(GEN_PLACES)
    s.add(prep, prep, "ADP", "IN", 9, "case")
    s.add("the", "the", "DET", "DT", 9, "det")
    s.add(r.choice(GEN_NOUNS), None, "NOUN", "NN", 2, "obl", False)
    s.add(".", ".", "PUNCT", ".", 2, "punct")
    return s


def gen_bio_prefixed(r):
    s = Sentence()
    pre, upos, xpos, head = r.choice(BIO_PREFIXED)
    vform, vlemma = r.choice(BIO_VERBS)
    s.add("The", "the", "DET", "DT", 4, "det")
    s.add(pre, pre, upos, xpos, 4, "compound", False)
    s.add("-", "-", "PUNCT", "HYPH", 4, "punct", False)
    s.add(head, head, "NOUN", "NN", 7, "nsubj")
    s.add("of", "of", "ADP", "IN", 6, "case")
    s.add(r.choice(GENES), None, "PROPN", "NNP", 4, "nmod")
    s.add(vform, vlemma, "VERB", "VBD", 0, "root")
    s.add(r.choice(BIO_NOUNS), None, "NOUN", "NN", 7, "obj", False)
    s.add(".", ".", "PUNCT", ".", 7, "punct")
    return s


def gen_bio_suffixed(r):
    s = Sentence()
    gene = r.choice(GENES)
    suf = r.choice(BIO_SUFFIXED)
    vform, vlemma = r.choice(BIO_VERBS)
    s.add(gene, gene, "PROPN", "NNP", 3, "obl:npmod", False)
    s.add("-", "-", "PUNCT", "HYPH", 3, "punct", False)
    s.add(suf, suf, "ADJ", "JJ", 4, "amod")
    s.add(r.choice(BIO_NOUNS), None, "NOUN", "NN", 5, "nsubj")
    s.add(vform, vlemma, "VERB", "VBD", 0, "root")
    s.add("in", "in", "ADP", "IN", 7, "case")
    subj = r.choice(BIO_SUBJ)
    s.add(subj[0], subj[1], "NOUN", "NNS", 5, "obl", False)
    s.add(".", ".", "PUNCT", ".", 5, "punct")
    return s


def gen_bio_modified(r):
    s = Sentence()
    subj = r.choice(BIO_SUBJ)
    vform, vlemma = r.choice(BIO_VERBS)
    mod, upos, xpos, head = r.choice(BIO_MODS)
    s.add(cap(subj[0]), subj[1], "NOUN", "NNS", 2, "nsubj")
    s.add(vform, vlemma, "VERB", "VBD", 0, "root")
    s.add(r.choice(GENES), None, "PROPN", "NNP", 4, "compound")
    s.add(r.choice(BIO_NOUNS), None, "NOUN", "NN", 2, "obj")
    s.add("in", "in", "ADP", "IN", 9, "case")
    s.add(mod, mod, upos, xpos, 8, "compound", False)
    s.add("-", "-", "PUNCT", "HYPH", 8, "punct", False)
    s.add(head, head, "ADJ", "JJ", 9, "amod")
    s.add(r.choice(["tissue", "samples", "cultures"]), None, "NOUN", "NN", 2, "obl", False)
    s.add(".", ".", "PUNCT", ".", 2, "punct")
    return s


def finish(s):
    for row in s.rows:
        if row[1] is None:
            form = row[0]
            row[1] = form if row[2] == "PROPN" else (form[:-1] if form in ("samples", "cultures") else form)
            if form in ("samples", "cultures"):
                row[3] = "NNS"
    return s


def general_sentence(r):
    s = r.choice([gen_negated, gen_negated, gen_transitive, gen_copula, gen_locative])(r)
    for row in s.rows:
        if row[1] is None:
            row[1] = row[0].lower()
    return s


def bio_sentence(r):
    return finish(r.choice([gen_bio_prefixed, gen_bio_suffixed, gen_bio_modified])(r))


def render(sentences, per_paragraph, r):
    """Lays sentences out as paragraphs and returns (text, conllu)."""
    text = ""
    blocks = []
    for i, s in enumerate(sentences):
        if i:
            text += "\n\n" if i % per_paragraph == 0 else " "
        start_sentence = len(text)
        lines = []
        for wid, (form, lemma, upos, xpos, head, deprel, space) in enumerate(s.rows, 1):
            start = len(text)
            text += form
            misc = f"start_char={start}|end_char={len(text)}"
            if not space:
                misc = "SpaceAfter=No|" + misc
            lines.append("\t".join([str(wid), form, lemma, upos, xpos, "_", str(head), deprel, "_", misc]))
            if space and wid < len(s.rows):
                text += " "
        header = [f"# sent_id = s{i + 1}", f"# text = {text[start_sentence:]}"]
        blocks.append("\n".join(header + lines) + "\n")
    return text + "\n", "\n".join(blocks) + "\n"


PROBLEMS = ["sore throat", "chest pain", "fever", "cough", "shortness of breath", "nausea", "headache",
            "pneumonia", "hypertension", "abdominal pain", "rash", "back pain", "dizziness", "vomiting"]
TREATMENTS = ["Cepacol lozenges", "aspirin", "ibuprofen", "amoxicillin", "acetaminophen", "insulin",
              "lisinopril", "albuterol inhaler", "ceftriaxone", "metformin"]
TESTS = ["chest radiograph", "CT scan", "blood culture", "ECG", "urinalysis", "CBC", "MRI", "troponin level"]
# held out of the NER training data; they occur only in the raw LM text and dev
DEV_PROBLEMS = ["sinusitis", "joint swelling", "bronchitis", "leg cramps", "palpitations", "insomnia"]
DEV_TREATMENTS = ["naproxen", "prednisone", "azithromycin", "saline spray", "warfarin"]
DEV_TESTS = ["echocardiogram", "lipid panel", "throat swab", "stress test"]

NER_TEMPLATES = [
    "The patient had a {p} and was treated with {t} .",
    "A {x} showed {p} .",
    "She was given {t} for {p} .",
    "He denies {p} .",
    "No {p} was noted on {x} .",
    "{T} was started for {p} .",
    "The {x} was normal .",
    "Patient reports {p} after taking {t} .",
]


def fill(template, r, problems, treatments, tests):
    """Returns (tokens, tags) for a template."""
    tokens, tags = [], []
    for piece in template.split():
        kind = {"{p}": ("problem", problems), "{t}": ("treatment", treatments), "{T}": ("treatment", treatments),
                "{x}": ("test", tests)}.get(piece)
        if kind is None:
            tokens.append(piece)
            tags.append("O")
            continue
        words = r.choice(kind[1]).split()
        if piece == "{T}":
            words[0] = cap(words[0])
        tokens += words
        if len(words) == 1:
            tags.append("S-" + kind[0])
        else:
            tags += ["B-" + kind[0]] + ["I-" + kind[0]] * (len(words) - 2) + ["E-" + kind[0]]
    return tokens, tags


def write_bioes(path, sentences):
    out = []
    for tokens, tags in sentences:
        out.append("".join(f"{a}\t{b}\n" for a, b in zip(tokens, tags)))
    path.write_text("\n".join(out), encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=13)
    args = ap.parse_args()
    root = pathlib.Path(args.out)
    r = random.Random(args.seed)

    for name, make, sizes in (("general", general_sentence, (100, 30, 30)), ("bio", bio_sentence, (100, 30, 30))):
        (root / name).mkdir(parents=True, exist_ok=True)
        for split, n in zip(("train", "dev", "test"), sizes):
            text, conllu = render([make(r) for _ in range(n)], 4, r)
            (root / name / f"{split}.txt").write_text(text, encoding="utf-8")
            (root / name / f"{split}.conllu").write_text(conllu, encoding="utf-8")

    (root / "ner").mkdir(parents=True, exist_ok=True)
    train = [fill(NER_TEMPLATES[0], r, ["sore throat"], ["Cepacol lozenges"], [])]
    while len(train) < 100:
        train.append(fill(r.choice(NER_TEMPLATES), r, PROBLEMS, TREATMENTS, TESTS))
    dev = [fill(r.choice(NER_TEMPLATES), r, DEV_PROBLEMS, DEV_TREATMENTS, DEV_TESTS) for _ in range(40)]
    write_bioes(root / "ner" / "train.bioes", train)
    write_bioes(root / "ner" / "dev.bioes", dev)

    (root / "charlm").mkdir(parents=True, exist_ok=True)
    lines = []
    all_p, all_t, all_x = PROBLEMS + DEV_PROBLEMS, TREATMENTS + DEV_TREATMENTS, TESTS + DEV_TESTS
    for i in range(600):
        tokens, _ = fill(r.choice(NER_TEMPLATES), r, all_p, all_t, all_x)
        line = " ".join(tokens)
        if i % 25 == 0:
            line = f"Seen by Dr. [**Name {i}**] on [**2101-3-{i % 28 + 1}**] for {r.choice(all_p)} ."
        lines.append(line)
    (root / "charlm" / "clinical.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    (root / "notes").mkdir(parents=True, exist_ok=True)
    for k in range(8):
        sentences = []
        for _ in range(r.randint(3, 5)):
            tokens, _ = fill(r.choice(NER_TEMPLATES), r, PROBLEMS, TREATMENTS, TESTS)
            sentences.append(" ".join(tokens).replace(" .", "."))
        (root / "notes" / f"note_{k + 1:02d}.txt").write_text(" ".join(sentences) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
