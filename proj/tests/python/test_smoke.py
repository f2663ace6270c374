import math

import numpy as np
import pytest

import spanmine


def test_tokenize_offsets():
    toks = spanmine.tokenize("Hello, World!")
    assert toks == [("hello", 0, 5), ("world", 7, 12)]


def test_span_enumeration():
    assert spanmine.span_count(3, 1, 3) == 6
    assert spanmine.enumerate_spans(3, 1, 2) == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    with pytest.raises(spanmine.Error):
        spanmine.span_count(3, 2, 1)


def test_mean_pool():
    rows = np.array([[1.0, 1.0], [3.0, 3.0], [5.0, 0.0]])
    assert spanmine.mean_pool(rows, 0, 2) == pytest.approx([2.0, 2.0])


def test_toy_encoder_and_best_span():
    enc = spanmine.ToyEncoder(dim=16, window=0, seed=3, mix=0.0)
    toks, vecs = enc.encode("the quick brown fox jumps")
    assert vecs.shape == (5, 16)
    assert vecs.dtype == np.float32
    assert np.allclose(np.linalg.norm(vecs, axis=1), 1.0, atol=1e-6)
    best = spanmine.best_span(vecs[1:3], vecs, 1, 4)
    assert (best.start, best.end) == (1, 3)
    assert best.score == pytest.approx(1.0, abs=1e-6)


def test_slice_loss():
    q = np.array([[1.0, 0.0]])
    out = spanmine.slice_forward(q, q, q)
    assert out.loss == pytest.approx(math.log(2.0), abs=1e-12)
    g = spanmine.slice_gradient(q, np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([[-1.0, 0.0]]))
    assert g.d_true.shape == (2, 2)
    assert spanmine.softplus(0.0) == pytest.approx(math.log(2.0))


def test_statistics():
    assert spanmine.pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(9 / (2 * math.sqrt(21)), abs=1e-12)
    assert spanmine.spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(3 / math.sqrt(10), abs=1e-12)
    w = spanmine.williams_test(0.7, 0.5, 0.6, 100)
    assert w.t == pytest.approx(3.060965822542296, abs=1e-9)
    assert w.p == pytest.approx(0.0028539767160140716, abs=1e-9)


def test_bm25():
    docs = ["The cat sat on the mat.", "The dog sat on the log.", "Cats and dogs!"]
    assert spanmine.bm25_scores("the cat", docs) == pytest.approx(
        [0.53721455907414084, 0.068567197820938355, 0.0], abs=1e-9)


def test_synth_and_cli(tmp_path):
    records, triples = spanmine.synth_generate(count=10, seed=2, noise_rates=[0.0])
    assert len(records) == 10 and len(triples) == 10
    assert all(r["gold"] == 5.0 for r in records)
    r = records[0]
    docs = tmp_path / "docs.tsv"
    docs.write_text(f"{r['id']}\t{r['context']}\n")
    index = tmp_path / "i.saix"
    toy = ["--toy-window", "0", "--toy-mix", "0"]
    code, out, err = spanmine.run_cli(toy + ["index", "--input", str(docs), "--out", str(index)])
    assert code == 0, err
    code, out, err = spanmine.run_cli(toy + ["search", "--index", str(index), "--query", r["origin_phrase"]])
    assert code == 0, err
    doc_id, score, start, end, _ = out.splitlines()[0].split("\t")
    assert doc_id == r["id"]
    assert (int(start), int(end)) == (r["char_start"], r["char_end"])
    assert float(score) == pytest.approx(1.0, abs=1e-6)
    code, _, err = spanmine.run_cli(["search"])
    assert code != 0
