#!/usr/bin/env python3
"""Start a judgment service on a synthetic fixture for frontend tests.

Builds a 100-document pool for topic 1 and a 10-document pool for
topic 2 in a fresh state directory, then serves the HTTP API. Assessor
tokens are tok0..tok4 for assessors a0..a4; a0/a1/a2 form the second
round.
"""

import argparse
import sys
import tempfile
from pathlib import Path

import uvicorn

from tetunir.corpus import Document, Topic
from tetunir.judge import JudgmentStore
from tetunir.judgeapp import JudgeConfig, JudgeService, create_app
from tetunir.pool import Pool


def build_service(state_dir: Path) -> JudgeService:
    topics = [
        Topic(1, "eleisaun prezidensiál", "Informasaun kona-ba eleisaun.",
              "Relevante se koalia kona-ba eleisaun prezidensiál."),
        Topic(2, "moras dengue Dili", "Kazu dengue iha Dili.",
              "Relevante se koalia kona-ba dengue."),
    ]
    pool1 = [f"d{i:03d}" for i in range(100)]
    pool2 = [f"x{i:02d}" for i in range(10)]
    documents = {}
    for i, docno in enumerate(pool1):
        documents[docno] = Document(
            docno,
            title=f"Notísia {i} kona-ba eleisaun",
            content=("Parágrafu naruk kona-ba eleisaun prezidensiál. " * 8).strip(),
            url=f"http://example.tl/{docno}",
        )
    for i, docno in enumerate(pool2):
        documents[docno] = Document(
            docno,
            title=f"Notísia {i} kona-ba dengue",
            content="Kazu moras dengue iha Dili.",
            url=f"http://example.tl/{docno}",
        )
    config = JudgeConfig(
        tokens={f"tok{i}": f"a{i}" for i in range(5)},
        second_round_assessors=("a0", "a1", "a2"),
        expected_votes=5,
    )
    store = JudgmentStore(state_dir)
    return JudgeService(
        topics, [Pool(1, pool1, {}), Pool(2, pool2, {})], store, config, documents
    )


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--port", type=int, default=8475)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--state-dir", default=None)
    args = parser.parse_args()

    state_dir = Path(args.state_dir) if args.state_dir else Path(
        tempfile.mkdtemp(prefix="assess-ui-fixture-")
    )
    service = build_service(state_dir)
    print(f"fixture service: state={state_dir} port={args.port}", flush=True)
    uvicorn.run(create_app(service), host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
