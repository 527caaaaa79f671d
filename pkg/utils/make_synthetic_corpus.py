# Copyright (c) 2026, Topigen contributors
#
# Licensed under the BSD 3-Clause License. You may not use this file except
# in compliance with this License. See the LICENSE file at the root of this
# repository.

import logging
import sys

from topigen.synthetic import DEFAULT_SEED, generate_corpus

"""
This script writes the deterministic synthetic corpus: a category graph with a few
cycles (subject.tsv, broader.tsv, labels.tsv) and annotated documents of six users
(docs.jsonl) whose profiles hold between 5 and 94 topics.

Usage: python make_synthetic_corpus.py [target_dir] [seed]
Parameters:
  target_dir: The directory to write the corpus to. It is created when missing.
  seed: Optional. The seed of the random generator. Equal seeds give equal files.
Return: None

Example: python make_synthetic_corpus.py ~/Downloads/topigen_synthetic 2016
"""

# Check if the correct number of arguments were provided
if len(sys.argv) not in (2, 3):
    print(f"Usage: python {sys.argv[0]} target_dir [seed]")
    print(f"Example: python {sys.argv[0]} ~/Downloads/topigen_synthetic {DEFAULT_SEED}")
    sys.exit(1)

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

# Parse the input arguments
target_dir = sys.argv[1]
seed = int(sys.argv[2]) if len(sys.argv) == 3 else DEFAULT_SEED

paths = generate_corpus(target_dir, seed=seed)
for name, path in paths.items():
    print(f"The {name} file is: ", path)
