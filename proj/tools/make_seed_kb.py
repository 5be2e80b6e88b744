#!/usr/bin/env python3
"""Generates data/kb/seed_kb.json from hand-assigned emotion attributes.

Each emotion gets a y/n/m (yes/no/mixed) judgement per question. Counts are
simulated annotator answers drawn around that judgement with a fixed seed, so
the output is reproducible.
"""

import json
import random
import sys

QUESTIONS = [
    ("valence.positive", "is it a positive emotion?",
     ["is it a good feeling", "is it pleasant", "does it feel good"]),
    ("valence.negative", "is it a negative emotion?",
     ["is it a bad feeling", "is it unpleasant", "does it feel bad"]),
    ("social.directed", "is it an emotion that is directed at another person?",
     ["is it directed at someone", "is it aimed at another person", "do you feel it toward someone"]),
    ("duration.long", "is it an emotion that lasts a long time?",
     ["does it last long", "is it long lasting", "does it stay with you for a long time"]),
    ("arousal.high", "is it a high energy emotion?",
     ["is it energetic", "does it get your heart racing", "is it an intense high arousal feeling"]),
    ("social.involves_others", "does it involve other people?",
     ["is it social", "do you need other people to feel it"]),
    ("time.future", "is it about the future?",
     ["is it about something that has not happened yet", "is it forward looking"]),
    ("time.past", "is it about the past?",
     ["is it about something that already happened", "is it backward looking"]),
    ("self.evaluation", "is it about how you see yourself?",
     ["is it about yourself", "is it a self conscious emotion"]),
    ("threat.response", "is it a response to danger?",
     ["is it caused by a threat", "do you feel it when you are in danger"]),
    ("basic.universal", "is it a basic emotion?",
     ["is it one of the basic emotions", "is it universal"]),
    ("loss.related", "is it related to loss?",
     ["is it about losing something", "do you feel it after a loss"]),
    ("event.unexpected", "is it a reaction to something unexpected?",
     ["is it caused by a surprise", "does it come from something unexpected"]),
    ("desire.wanting", "does it involve wanting something?",
     ["is it about desire", "do you want something when you feel it"]),
    ("moral.judgement", "is it related to morality?",
     ["is it a moral emotion", "is it about right and wrong"]),
    ("intensity.strong", "is it a very strong emotion?",
     ["is it strong", "is it overwhelming"]),
    ("expression.smile", "does it make you smile?",
     ["would you smile", "does it show on your face as a smile"]),
    ("expression.cry", "can it make you cry?",
     ["would you cry", "does it bring tears"]),
    ("arousal.low", "is it a calm or quiet feeling?",
     ["is it peaceful", "is it low energy"]),
    ("social.bonding", "does it bring people closer together?",
     ["does it strengthen relationships", "does it connect people"]),
    ("cognition.uncertainty", "does it involve uncertainty?",
     ["is it about not knowing", "does it come from being unsure"]),
    ("blame.others", "do you blame someone else when you feel it?",
     ["is someone else at fault", "is it about someone wronging you"]),
]

# Column order matches QUESTIONS.
#                   pos neg dir lng hie soc fut pst slf thr bas los unx des mor str smi cry low bnd unc blm
EMOTIONS = {
    "happiness":     "y n n m y m n n n n y n n n n m y n n m n n",
    "sadness":       "n y n m n n n m n n y y n n n m n y y n n n",
    "anger":         "n y y n y y n m n n y n m n m y n n n n n y",
    "fear":          "n y n n y n y n n y y n m n n y n m n n y n",
    "surprise":      "m m n n y n n n n n y n y n n m m n n n y n",
    "disgust":       "n y y n m m n n n m y n n n y m n n n n n m",
    "love":          "y n y y m y n n n n m n n y n y y m n y n n",
    "hate":          "n y y y y y n m n n n n n n y y n n n n n y",
    "jealousy":      "n y y m m y n n m n n m n y n y n n n n m y",
    "envy":          "n y y m n y n n m n n n n y n m n n n n n m",
    "pride":         "y n n m m m n y y n n n n n m m y n n n n n",
    "shame":         "n y n m n m n y y n n n n n y y n m n n n n",
    "guilt":         "n y n y n m n y y n n n n n y m n m n n n n",
    "embarrassment": "n y n n y y n y y n n n y n n m n n n n n n",
    "anxiety":       "n y n y y n y n m m n n n n n m n m n n y n",
    "boredom":       "n y n m n n n n n n n n n m n n n n y n n n",
    "contentment":   "y n n y n n n n n n n n n n n n y n y n n n",
    "excitement":    "y n n n y m y n n n n n m y n y y n n n m n",
    "gratitude":     "y n y m n y n y n n n n n n m m y m y y n n",
    "hope":          "y n n m n n y n n n n n n y n m y n m n y n",
    "loneliness":    "n y n y n m n n n n n m n y n m n y y n n n",
    "nostalgia":     "m m n n n m n y n n n m n m n n y m y m n n",
    "regret":        "n y n y n n n y y n n m n m m m n m y n n n",
    "relief":        "y n n n n n n y n n n n n n n m y m y n n n",
    "frustration":   "n y m n y m n n n n n n n y n m n m n n n m",
    "confusion":     "n m n n m n n n n n n n y n n n n n n n y n",
    "curiosity":     "y n n n m n y n n n n n m y n n m n n n y n",
    "awe":           "y n n n m n n n n n n n y n n y m m m n n n",
    "amusement":     "y n n n y m n n n n n n y n n n y n n y n n",
    "calmness":      "y n n m n n n n n n n n n n n n m n y n n n",
    "compassion":    "y m y m n y n n n n n n n m y m n m y y n n",
    "contempt":      "n y y y n y n n n n m n n n y m n n y n n y",
    "despair":       "n y n y n n y m n n n y n n n y n y m n m n",
    "disappointment":"n y m n n m n y n n n m y m n m n m y n n m",
    "enthusiasm":    "y n n m y m y n n n n n n y n m y n n m n n",
    "grief":         "n y n y n m n y n n n y n n n y n y m m n n",
    "joy":           "y n n n y m n n n n y n m n n y y m n y n n",
    "panic":         "n y n n y n y n n y n n y n n y n m n n y n",
    "pity":          "n y y m n y n n n n n m n n m n n m y n n n",
    "resentment":    "n y y y n y n y n n n n n n y m n n y n n y",
    "satisfaction":  "y n n m n n n y m n n n n n n n y n y n n n",
    "serenity":      "y n n y n n n n n n n n n n n n m n y n n n",
    "sympathy":      "m m y m n y n n n n n m n n m n n m y y n n",
    "terror":        "n y n n y n m n n y n n y n n y n y n n y n",
    "worry":         "n y n y m n y n n m n n n n n n n m n n y n",
    "annoyance":     "n y y n m y n n n n n n m n n n n n n n n y",
    "admiration":    "y n y m n y n n m n n n n m y n y n y y n n",
    "trust":         "y n y y n y y n n n n n n n m n m n y y n n",
}


def simulate(rng, judgement):
    if judgement == "y":
        return {"yes": rng.randint(4, 8), "no": rng.randint(0, 1), "other": rng.randint(0, 1)}
    if judgement == "n":
        return {"yes": rng.randint(0, 1), "no": rng.randint(4, 8), "other": rng.randint(0, 1)}
    split = rng.randint(1, 3)
    return {"yes": split, "no": rng.randint(1, 3), "other": rng.randint(1, 4)}


def main(out_path):
    rng = random.Random(20)
    counts = []
    for emotion, row in EMOTIONS.items():
        marks = row.split()
        assert len(marks) == len(QUESTIONS), emotion
        for (qid, _, _), mark in zip(QUESTIONS, marks):
            for answer, n in simulate(rng, mark).items():
                if n:
                    counts.append({"emotion": emotion, "question": qid, "answer": answer, "count": n})
    doc = {
        "version": 1,
        "alpha": 1.0,
        "emotions": list(EMOTIONS),
        "questions": [{"id": q, "gloss": g, "paraphrases": p} for q, g, p in QUESTIONS],
        "counts": counts,
    }
    with open(out_path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/kb/seed_kb.json")
