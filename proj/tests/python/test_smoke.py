"""End-to-end smoke tests for the Python module and the CLI."""

import json
import math
import os
import subprocess

import pytest

tc = pytest.importorskip("ticketclass")

SENTENCE = 'See "3.7.1 Canonicalization and Text Defaults" at\nRFC 2616'
TOKENS = ["see", "371", "canonicalization", "text", "defaults", "rfc", "2616"]


def test_tokenize_golden():
    assert tc.tokenize(SENTENCE) == TOKENS


def test_ngram_golden():
    assert tc.ngrams(TOKENS, 2, 2)[:2] == ["see 371", "371 canonicalization"]
    assert tc.ngrams(TOKENS, 3, 3)[-1] == "defaults rfc 2616"


def test_build_document_repeats_summary():
    assert tc.build_document("a b", "c", 3) == "a b a b a b c"


def test_crossover_worked_example():
    child = tc.crossover(
        tc.Individual(21912, [12, 23, 8, 4]),
        tc.Individual(30023, [4, 23, 5, 13, 27]),
        tc.GaBounds(),
    )
    assert child.n_features == 25967
    assert child.layers == [12, 23, 5, 13, 27]


def test_mutation_operators():
    base = tc.Individual(21912, [12, 23, 45])
    assert tc.mutate_addition(base, 18).layers == [12, 23, 45, 18]
    assert tc.mutate_deletion(base, 1).layers == [12, 45]
    assert tc.mutate_substitution(base, 0, 7).layers == [7, 23, 45]


def test_metrics_identity():
    m = tc.compute_metrics([1, 0, 1, 1, 0], [1, 1, 1, 0, 0])
    p, r = m.precision, m.recall
    assert math.isclose(m.f1, 2 * p * r / (p + r), rel_tol=0, abs_tol=1e-12)
    assert math.isclose(tc.f1_from_pr(0.913, 0.881), 0.8967, abs_tol=5e-4)


def test_stratified_kfold_partitions():
    y = [1, 0] * 15
    folds = tc.stratified_kfold(y, 5, 0)
    seen = sorted(i for _, test in folds for i in test)
    assert seen == list(range(30))


def test_mlp_learns_xor():
    X = tc.SparseMatrix.from_dense([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    y = [0, 1, 1, 0]
    for seed in (0, 1, 2):
        params = tc.MlpParams()
        params.hidden_layers = [8]
        params.max_iter = 100
        params.initial_lr = 0.5
        params.batch_size = 4
        params.seed = seed
        model = tc.train_mlp(X, y, params)
        if tc.predict(model, X) == y:
            return
    pytest.fail("no seed solved xor")


def test_tfidf_pipeline_roundtrip():
    corpus_cfg = tc.SyntheticConfig()
    corpus_cfg.n_tickets = 40
    corpus_cfg.seed = 5
    corpus = tc.make_synthetic_corpus(corpus_cfg)
    cfg = tc.PipelineConfig()
    cfg.min_df_docs = 1
    docs = tc.corpus_documents(corpus, cfg)
    vocab = tc.fit_vocabulary(docs, cfg)
    counts = tc.count_matrix(docs, vocab, cfg)
    model = tc.fit_tfidf(counts, vocab, cfg)
    X = tc.transform_tfidf(model, counts)
    assert X.rows == len(docs)
    assert X.cols == len(vocab)
    for row in X.to_dense():
        norm = math.sqrt(sum(v * v for v in row))
        if norm > 0:
            assert math.isclose(norm, 1.0, abs_tol=1e-9)


@pytest.mark.skipif(
    pytest.importorskip("sklearn", reason="sklearn not installed") is None,
    reason="sklearn not installed",
)
def test_tfidf_matches_sklearn_reference():
    from sklearn.feature_extraction.text import TfidfVectorizer

    docs = [
        "crash handler crash logger crash",
        "feature request crash handler logger",
        "request feature request feature logger",
        "merge deploy merge deploy",
    ]
    cfg = tc.PipelineConfig()
    cfg.ngram_min, cfg.ngram_max = 1, 2
    cfg.min_df_docs, cfg.max_df_ratio = 1, 1.0
    cfg.sublinear_tf = True
    vocab = tc.fit_vocabulary(docs, cfg)
    counts = tc.count_matrix(docs, vocab, cfg)
    ours = tc.transform_tfidf(tc.fit_tfidf(counts, vocab, cfg), counts).to_dense()

    reference = TfidfVectorizer(
        analyzer=lambda doc: tc.ngrams(doc.split(), 1, 2),
        sublinear_tf=True,
        smooth_idf=True,
        norm="l2",
    )
    dense = reference.fit_transform(docs).toarray()
    names = list(reference.get_feature_names_out())
    assert sorted(names) == list(vocab.terms)
    for our_row, ref_row in zip(ours, dense):
        for term_index, term in enumerate(vocab.terms):
            assert math.isclose(
                our_row[term_index], ref_row[names.index(term)], abs_tol=1e-10
            )


@pytest.mark.skipif(
    pytest.importorskip("sklearn", reason="sklearn not installed") is None,
    reason="sklearn not installed",
)
def test_chi2_matches_sklearn_reference():
    import numpy as np
    from sklearn.feature_selection import chi2 as sk_chi2

    rng = [[0.5, 0.0, 1.0], [0.0, 1.5, 1.0], [2.0, 0.0, 1.0], [0.0, 0.5, 1.0]]
    y = [1, 0, 1, 0]
    ours = tc.chi2_scores(tc.SparseMatrix.from_dense(rng), y)
    expected = sk_chi2(np.array(rng), np.array(y))[0]
    for a, b in zip(ours, expected):
        assert math.isclose(a, b, rel_tol=1e-10, abs_tol=1e-12)


def test_evaluate_setting_reports_json():
    corpus_cfg = tc.SyntheticConfig()
    corpus_cfg.n_tickets = 80
    corpus_cfg.seed = 3
    corpus = tc.make_synthetic_corpus(corpus_cfg)
    setting = tc.SettingConfig.preset(3)
    setting.mlp.max_iter = 20
    setting.mlp.initial_lr = 0.3
    report = json.loads(tc.evaluate_setting(corpus, setting, 3, 0))
    scopes = [entry["scope"] for entry in report["reports"]]
    assert "cross-project" in scopes
    assert report["config"]["setting"] == 3


def _cli():
    path = os.environ.get("TICKETCLASS_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("TICKETCLASS_CLI not set")
    return path


def test_cli_synth_train_classify_roundtrip(tmp_path):
    cli = _cli()
    corpus = tmp_path / "corpus.json"
    bundle = tmp_path / "model.tcb"
    subprocess.run(
        [cli, "synth", "--tickets", "120", "--seed", "0", "--out", str(corpus)],
        check=True,
        capture_output=True,
    )
    subprocess.run(
        [cli, "train", "--corpus", str(corpus), "--select-k", "200", "--layers", "12",
         "--mlp-max-iter", "40", "--mlp-lr", "0.3", "--min-df", "1", "--out", str(bundle)],
        check=True,
        capture_output=True,
    )
    queries = tmp_path / "queries.json"
    queries.write_text(
        json.dumps(
            [
                {"key": "Q-1", "summary": "crash segfault exception",
                 "description": "stacktrace overflow deadlock"},
                {"key": "Q-2", "summary": "feature request documentation",
                 "description": "improvement cleanup refactor"},
            ]
        )
    )
    result = subprocess.run(
        [cli, "classify", "--model", str(bundle), "--tickets", str(queries)],
        check=True,
        capture_output=True,
        text=True,
    )
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "key\tlabel\tprobability"
    predictions = {line.split("\t")[0]: line.split("\t")[1] for line in lines[1:]}
    assert predictions == {"Q-1": "BUG", "Q-2": "NBUG"}


def test_cli_exit_codes(tmp_path):
    cli = _cli()
    # Usage error: unknown subcommand.
    usage = subprocess.run([cli, "frobnicate"], capture_output=True)
    assert usage.returncode == 1
    # Data error: corpus file that is not valid JSON.
    broken = tmp_path / "broken.json"
    broken.write_text("[{not json")
    data = subprocess.run(
        [cli, "evaluate", "--corpus", str(broken), "--setting", "3"], capture_output=True
    )
    assert data.returncode == 2
    # Usage error: single-fold evaluation is rejected.
    corpus = tmp_path / "tiny.json"
    subprocess.run(
        [cli, "synth", "--tickets", "30", "--out", str(corpus)],
        check=True,
        capture_output=True,
    )
    folds = subprocess.run(
        [cli, "evaluate", "--corpus", str(corpus), "--setting", "3", "--folds", "1"],
        capture_output=True,
    )
    assert folds.returncode == 1


def test_cli_config_file(tmp_path):
    cli = _cli()
    corpus = tmp_path / "corpus.json"
    config = tmp_path / "synth.toml"
    config.write_text(f'[synth]\ntickets = 44\nseed = 9\nout = "{corpus}"\n')
    subprocess.run(
        [cli, "synth", "--config", str(config)], check=True, capture_output=True
    )
    assert len(json.loads(corpus.read_text())) == 44
    # Flags override config-file values.
    subprocess.run(
        [cli, "synth", "--config", str(config), "--tickets", "20"],
        check=True,
        capture_output=True,
    )
    assert len(json.loads(corpus.read_text())) == 20


def test_bundle_service_from_python(tmp_path):
    cli = _cli()
    corpus = tmp_path / "corpus.json"
    bundle = tmp_path / "model.tcb"
    subprocess.run(
        [cli, "synth", "--tickets", "100", "--seed", "1", "--out", str(corpus)],
        check=True,
        capture_output=True,
    )
    subprocess.run(
        [cli, "train", "--corpus", str(corpus), "--select-k", "150", "--layers", "10",
         "--mlp-max-iter", "40", "--mlp-lr", "0.3", "--min-df", "1", "--out", str(bundle)],
        check=True,
        capture_output=True,
    )
    service = tc.ClassificationService(str(bundle))
    label, probability = service.classify("crash segfault", "stacktrace overflow deadlock")
    assert label in ("BUG", "NBUG")
    assert 0.0 <= probability <= 1.0
    assert service.model_version == "ticketclass-bundle/1"
