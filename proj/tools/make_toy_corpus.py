#!/usr/bin/env python3
"""Regenerates the bundled corpora under data/corpus/.

Deterministic: fixed seed, stable iteration order. The Singlish evaluation
slice uses sentiment phrases that never appear in the training corpus, so
lexicon correction has something real to fix.
"""

import json
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"

# Phrases reserved for singlish_eval.jsonl; the training corpus must not
# contain any of these tokens.
HELD_OUT = {
    "hari", "hodai", "niyamai", "supiri", "godak", "lag", "wenawa",
    "patta", "waste", "prashnayak", "machan", "ela",
}

EN_TERMS = {
    "CustomerSupport": [
        "customer service", "the branch staff", "the helpline", "the call center",
        "the support agent", "complaint handling", "the customer care team",
    ],
    "DigitalBanking": [
        "the mobile app", "online banking", "the website", "the login flow",
        "internet banking", "the digital wallet", "the otp screen",
    ],
    "LoanCredit": [
        "the loan approval", "the interest rates", "my credit card",
        "the mortgage process", "the leasing plan", "loan processing",
    ],
    "TransactionsPayments": [
        "the fund transfer", "bill payment", "the atm withdrawal", "my deposit",
        "the transaction history", "the remittance process",
    ],
    "TrustSecurity": [
        "account security", "fraud monitoring", "the privacy controls",
        "data protection", "the security checks", "scam alerts",
    ],
}

SI_TERMS = {
    "CustomerSupport": "සේවාව",
    "DigitalBanking": "යෙදුම",
    "LoanCredit": "ණය",
    "TransactionsPayments": "තැන්පතු",
    "TrustSecurity": "ආරක්ෂාව",
}

POS = ["excellent", "smooth", "fast", "helpful", "friendly", "reliable", "impressive", "painless"]
NEG = ["terrible", "slow", "rude", "delayed", "frustrating", "confusing", "unreliable", "awful"]
NEU = ["average", "standard", "typical", "unremarkable", "ordinary", "routine"]

SI_ADJ = {
    "Positive": ["විශිෂ්ටයි", "ඉතා හොඳයි", "කාර්යක්ෂමයි"],
    "Negative": ["නරකයි", "අසාර්ථකයි", "ප්‍රමාද වෙනවා"],
    "Neutral": ["සාමාන්‍යයි", "වෙනසක් නැහැ"],
}

EN_TEMPLATES = {
    "Positive": [
        "The experience with {t} was {a} and {b}.",
        "I found {t} {a}, honestly {b}.",
        "{T} has been {a} this month, really {b}.",
        "Very {a} experience with {t}, overall {b}.",
    ],
    "Negative": [
        "The experience with {t} was {a} and {b}.",
        "I found {t} {a}, honestly {b}.",
        "{T} has been {a} this month, really {b}.",
        "Dealing with {t} felt {a}, simply {b}.",
    ],
    "Neutral": [
        "The experience with {t} was {a}.",
        "{T} seems {a} as usual.",
        "Nothing special about {t}, just {a}.",
    ],
}

ADJ = {"Positive": POS, "Negative": NEG, "Neutral": NEU}


def en_review(rng, aspect, sentiment):
    term = rng.choice(EN_TERMS[aspect])
    pool = ADJ[sentiment]
    a = rng.choice(pool)
    b = rng.choice([x for x in pool if x != a])
    template = rng.choice(EN_TEMPLATES[sentiment])
    return template.format(t=term, T=term[0].upper() + term[1:], a=a, b=b)


def si_review(rng, aspect, sentiment):
    adj = rng.choice(SI_ADJ[sentiment])
    return f"{SI_TERMS[aspect]} {adj}."


def sg_review(rng, aspect, sentiment):
    term = rng.choice(EN_TERMS[aspect]).replace("the ", "").replace("my ", "")
    adj = rng.choice(ADJ[sentiment])
    form = rng.choice([
        "mage bank eke {t} eka {a} wage.",
        "bank eke {t} eka {a} kiyala hithenawa.",
    ])
    return form.format(t=term, a=adj)


def cm_review(rng, aspect, sentiment):
    term = rng.choice(EN_TERMS[aspect])
    adj = rng.choice(SI_ADJ[sentiment])
    return f"{term[0].upper() + term[1:]} ගොඩක් {adj}."


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def banking_600():
    rng = random.Random(20240811)
    rows = []
    n = 0
    for aspect in EN_TERMS:
        for sentiment in ("Positive", "Neutral", "Negative"):
            cell = []
            for _ in range(28):
                cell.append(("English", en_review(rng, aspect, sentiment)))
            for _ in range(4):
                cell.append(("Sinhala", si_review(rng, aspect, sentiment)))
            for _ in range(4):
                cell.append(("Singlish", sg_review(rng, aspect, sentiment)))
            for _ in range(4):
                cell.append(("CodeMixed", cm_review(rng, aspect, sentiment)))
            for variant, text in cell:
                n += 1
                rows.append({
                    "id": f"bank-{n:04d}",
                    "text": text,
                    "variant": variant,
                    "aspect": aspect,
                    "sentiment": sentiment,
                    "source": "synthetic",
                })
    for row in rows:
        tokens = {w.strip(".,").lower() for w in row["text"].split()}
        leaked = tokens & HELD_OUT
        assert not leaked, f"held-out token {leaked} in {row['id']}"
    return rows


def singlish_eval():
    rng = random.Random(20240812)
    positive = [
        "me bank eke {t} eka hari hodai.",
        "{t} eka niyamai machan.",
        "bank eke {t} eka supiri.",
        "{t} eka godak hodai, ela.",
    ]
    negative = [
        "app eka lag wenawa godak.",
        "{t} eka godak slow.",
        "{t} eka patta waste.",
        "{t} eke loku prashnayak thiyenawa.",
    ]
    neutral = [
        "mama branch ekata gihin {t} eka ahuwa.",
        "{t} eka gana thawa details na.",
        "bank eken {t} eka gana call ekak awa.",
    ]
    terms = ["service", "app", "loan", "transfer", "account"]
    rows = []
    n = 0
    for sentiment, forms in (("Positive", positive), ("Negative", negative),
                             ("Neutral", neutral)):
        for i in range(20):
            form = forms[i % len(forms)]
            text = form.format(t=rng.choice(terms))
            n += 1
            rows.append({
                "id": f"sg-{n:03d}",
                "text": text,
                "variant": "Singlish",
                "sentiment": sentiment,
                "source": "synthetic",
            })
    return rows


def toy_en_100():
    rng = random.Random(20240813)
    aspects = list(EN_TERMS)
    rows = []
    n = 0
    for sentiment, count in (("Positive", 37), ("Neutral", 33), ("Negative", 30)):
        for _ in range(count):
            aspect = aspects[n % len(aspects)]
            n += 1
            rows.append({
                "id": f"en-{n:03d}",
                "text": en_review(rng, aspect, sentiment),
                "variant": "English",
                "aspect": aspect,
                "sentiment": sentiment,
                "source": "synthetic",
            })
    return rows


def roundtrip_lines(banking_rows):
    # Lowercase normalization fixpoints built from the same character pool
    # as the training corpus, so a coverage-1.0 vocabulary has no unknowns.
    rng = random.Random(20240814)
    lines = []
    pool = [r["text"].lower() for r in banking_rows]
    while len(lines) < 1000:
        base = rng.choice(pool)
        extra = rng.choice(pool)
        line = base if rng.random() < 0.5 else f"{base[:-1]} saha {extra}"
        lines.append(" ".join(line.split()))
    return lines


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    banking = banking_600()
    write_jsonl(OUT / "banking_600.jsonl", banking)
    write_jsonl(OUT / "singlish_eval.jsonl", singlish_eval())
    write_jsonl(OUT / "toy_en_100.jsonl", toy_en_100())
    with open(OUT / "roundtrip_lines.txt", "w", encoding="utf-8") as f:
        for line in roundtrip_lines(banking):
            f.write(line + "\n")
    print(f"wrote corpora to {OUT}")


if __name__ == "__main__":
    main()
