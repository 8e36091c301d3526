#!/usr/bin/env python3
#
# Copyright 2026 The unlearnaudit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Writes the bundled synthetic corpus (data/corpus.txt).

Sentences come from a small phrase grammar; words inside each slot are drawn
with 1/rank weights. Output is deterministic for a given --seed.
"""

import argparse
import random

DET = ["the", "a", "every", "this", "that", "one", "some", "no"]
ADJ = ["old", "small", "quiet", "red", "bright", "young", "tired", "green",
       "happy", "cold", "tall", "strange", "gentle", "busy", "dark", "warm"]
NOUN = ["dog", "cat", "man", "woman", "child", "bird", "farmer", "teacher",
        "river", "house", "garden", "city", "boat", "horse", "doctor",
        "window", "letter", "song", "king", "market", "forest", "student",
        "road", "baker", "train", "lamp", "friend", "sailor", "village",
        "painter", "table", "storm", "island", "mountain", "clock", "book"]
VERB_T = ["saw", "found", "painted", "carried", "watched", "followed",
          "built", "opened", "sold", "visited", "heard", "cleaned", "wrote",
          "lost", "helped", "called", "fixed", "kept", "liked", "met"]
VERB_I = ["slept", "laughed", "waited", "sang", "ran", "smiled", "arrived",
          "left", "cried", "danced", "rested", "worked", "listened",
          "shouted", "stayed"]
PREP = ["near", "behind", "under", "across", "beside", "inside", "toward",
        "past", "around", "with"]
ADV = ["quickly", "slowly", "again", "today", "yesterday", "softly",
       "early", "late", "alone", "outside"]
CONJ = ["and", "but", "while", "because"]


def pick(rng, words):
  weights = [1.0 / (r + 1) for r in range(len(words))]
  return rng.choices(words, weights=weights, k=1)[0]


def noun_phrase(rng):
  words = [pick(rng, DET)]
  if rng.random() < 0.45:
    words.append(pick(rng, ADJ))
  words.append(pick(rng, NOUN))
  return words


def clause(rng):
  words = noun_phrase(rng)
  if rng.random() < 0.6:
    words.append(pick(rng, VERB_T))
    words += noun_phrase(rng)
  else:
    words.append(pick(rng, VERB_I))
  r = rng.random()
  if r < 0.35:
    words.append(pick(rng, PREP))
    words += noun_phrase(rng)
  elif r < 0.55:
    words.append(pick(rng, ADV))
  return words


def sentence(rng):
  while True:
    words = clause(rng)
    if rng.random() < 0.25:
      words.append(pick(rng, CONJ))
      words += clause(rng)
    if 4 <= len(words) <= 12:
      return " ".join(words)


def main():
  parser = argparse.ArgumentParser(description=__doc__)
  parser.add_argument("--seed", type=int, default=2026)
  parser.add_argument("--sentences", type=int, default=250)
  parser.add_argument("--output", default="data/corpus.txt")
  args = parser.parse_args()
  rng = random.Random(args.seed)
  lines = [sentence(rng) for _ in range(args.sentences)]
  with open(args.output, "w") as f:
    f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
  main()
