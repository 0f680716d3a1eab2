#!/usr/bin/env python3
"""Embedding backend for the storyeval CLI.

Reads a JSON array of texts and writes {"vectors": [[...], ...]} using a
sentence-transformers model. STORYEVAL_MODEL_PATH, when set, points at a
local copy of the model and takes precedence over --model.

Exit status 2 signals a configuration problem (missing package or model).
"""
import argparse
import json
import os
import sys


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--model", required=True)
    parser.add_argument("--input", required=True)
    parser.add_argument("--output", required=True)
    parser.add_argument("--batch-size", type=int, default=32)
    args = parser.parse_args()

    try:
        from sentence_transformers import SentenceTransformer
    except ImportError as exc:
        print(f"sentence-transformers unavailable: {exc}", file=sys.stderr)
        return 2

    source = os.environ.get("STORYEVAL_MODEL_PATH") or args.model
    try:
        model = SentenceTransformer(source, device="cpu")
    except Exception as exc:  # noqa: BLE001 - any load failure is a config error
        print(f"cannot load model {source!r}: {exc}", file=sys.stderr)
        return 2

    with open(args.input, encoding="utf-8") as fh:
        texts = json.load(fh)
    vectors = model.encode(texts, batch_size=args.batch_size, convert_to_numpy=True, show_progress_bar=False)
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump({"model": args.model, "vectors": vectors.astype(float).tolist()}, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main())
