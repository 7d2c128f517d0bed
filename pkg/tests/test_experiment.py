import json

import numpy as np
import pytest

from stylosig.config import build_config
from stylosig.experiment import (
    build_feature_model,
    chimeric_manifest,
    run_chimeric,
    run_rolling,
    signature_matrix_from_dir,
)

from .conftest import write_svc_dir, write_text_corpus


def disjoint_corpus(tmp_path, n_subjects=3, docs=4, words=6, tokens=30):
    """Every subject writes from a private vocabulary, so attribution is easy."""
    subjects = {}
    for s in range(n_subjects):
        vocab = [f"s{s}w{j}" for j in range(words)]
        docs_text = []
        for d in range(docs):
            seq = [vocab[(d + i) % words] for i in range(tokens)]
            docs_text.append(" ".join(seq))
        subjects[f"subj{s}"] = docs_text
    return write_text_corpus(tmp_path / "texts", subjects)


def test_build_feature_model_variants():
    ngram = build_feature_model(build_config({"feature_family": "ngram", "ngram_orders": "1,2"}))
    assert ngram.family == "ngram" and ngram.orders == (1, 2)
    sngram = build_feature_model(
        build_config({"feature_family": "sngram", "sngram_order": "3", "sngram_element": "upos"})
    )
    assert sngram.family == "sngram" and sngram.orders == (3,) and sngram.element == "upos"


def test_run_rolling_separable(tmp_path):
    corpus_dir = disjoint_corpus(tmp_path)
    config = build_config(
        {
            "corpus_dir": str(corpus_dir),
            "protocol": "rolling",
            "train_window": "3",
            "test_window": "1",
            "profile_size": "100",
            "output_dir": str(tmp_path / "out"),
        }
    )
    result = run_rolling(config)
    summary = result["summaries"]["mnb"]
    assert summary["accuracy"]["value"] == 1.0
    assert summary["fold_accuracy"]["per_fold"] == [1.0, 1.0, 1.0, 1.0]
    assert summary["fold_accuracy"]["mean"] == 1.0
    assert summary["cmc_rank1"] == 1.0
    assert result["run"]["counts"]["folds"] == 4
    assert result["run"]["counts"]["test_items"] == 12
    out = tmp_path / "out" / "mnb"
    for name in ("fscore.csv", "recall.csv", "det.csv", "cmc.csv", "msh.csv", "summary.json"):
        assert (out / name).is_file()


def test_run_rolling_csvs_are_reproducible(tmp_path):
    corpus_dir = disjoint_corpus(tmp_path)
    outputs = []
    for run in ("one", "two"):
        config = build_config(
            {
                "corpus_dir": str(corpus_dir),
                "train_window": "3",
                "test_window": "1",
                "output_dir": str(tmp_path / run),
            }
        )
        run_rolling(config)
        outputs.append(
            {
                name: (tmp_path / run / "mnb" / name).read_bytes()
                for name in ("fscore.csv", "recall.csv", "det.csv", "cmc.csv", "msh.csv", "summary.json")
            }
        )
    assert outputs[0] == outputs[1]


def chimeric_setup(tmp_path, n=3):
    corpus_dir = disjoint_corpus(tmp_path, n_subjects=n, docs=4)
    sig_dir = write_svc_dir(tmp_path / "sigs", n_writers=n, n_samples=4)
    return build_config(
        {
            "corpus_dir": str(corpus_dir),
            "signature_dir": str(sig_dir),
            "protocol": "chimeric",
            "train_docs": "2",
            "test_docs": "2",
            "profile_size": "200",
            "output_dir": str(tmp_path / "out"),
        }
    )


def test_run_chimeric_systems_and_counts(tmp_path):
    config = chimeric_setup(tmp_path)
    result = run_chimeric(config)
    assert sorted(result["summaries"]) == ["mnb", "mnb+signature", "signature"]
    counts = result["run"]["counts"]
    assert counts == {
        "subjects": 3,
        "test_items": 6,
        "claims": 18,
        "genuine": 6,
        "imposter": 12,
    }
    stylome = result["summaries"]["mnb"]
    assert stylome["n_claims"] == 18
    assert stylome["accuracy"]["value"] == 1.0  # disjoint vocabularies are trivial
    ttests = result["run"]["ttests"]
    assert set(ttests) == {"mnb+signature_vs_mnb", "mnb+signature_vs_signature"}
    for name in ("mnb", "signature", "mnb+signature"):
        assert (tmp_path / "out" / name / "summary.json").is_file()


def test_run_chimeric_with_external_matrix(tmp_path):
    config = chimeric_setup(tmp_path)
    # simulate another classifier's already-fuzzy scores: perfect oracle
    from stylosig.signature import ScoreMatrix, save_score_matrix

    ids = tuple(f"s{s:02d}i{j:02d}" for s in range(3) for j in range(2))
    scores = np.full((6, 3), 0.1)
    for k, sid in enumerate([0, 0, 1, 1, 2, 2]):
        scores[k, sid] = 1.0
    path = tmp_path / "external.csv"
    save_score_matrix(ScoreMatrix(ids, ("a", "b", "c"), scores), path)
    config.external_matrix = path
    result = run_chimeric(config)
    assert "external" in result["summaries"]
    assert "external+signature" in result["summaries"]
    assert result["summaries"]["external"]["accuracy"]["value"] == 1.0
    assert "external+signature_vs_external" in result["run"]["ttests"]


def test_run_chimeric_external_shape_mismatch(tmp_path):
    config = chimeric_setup(tmp_path)
    from stylosig.errors import DataError
    from stylosig.signature import ScoreMatrix, save_score_matrix

    path = tmp_path / "external.csv"
    save_score_matrix(ScoreMatrix(("x",), ("a",), np.array([[0.5]])), path)
    config.external_matrix = path
    with pytest.raises(DataError, match="expected 6x3"):
        run_chimeric(config)


def test_signature_matrix_from_dir(tmp_path):
    sig_dir = write_svc_dir(tmp_path / "sigs", n_writers=3, n_samples=5)
    config = build_config(
        {"signature_dir": str(sig_dir), "train_docs": "2", "test_docs": "3"}
    )
    matrix = signature_matrix_from_dir(config)
    assert matrix.scores.shape == (9, 3)
    assert matrix.subject_labels == ("w1", "w2", "w3")
    assert matrix.item_ids[:3] == ("U1S3", "U1S4", "U1S5")


def test_signature_matrix_short_writer_rejected(tmp_path):
    from stylosig.errors import DataError

    sig_dir = write_svc_dir(tmp_path / "sigs", n_writers=2, n_samples=3)
    config = build_config({"signature_dir": str(sig_dir), "train_docs": "2", "test_docs": "3"})
    with pytest.raises(DataError, match="fewer than 5"):
        signature_matrix_from_dir(config)


def test_chimeric_manifest_contents(tmp_path):
    config = chimeric_setup(tmp_path)
    manifest = chimeric_manifest(config)
    assert manifest["counts"]["subjects"] == 3
    assert manifest["subjects"][0]["author"] == "subj0"
    assert manifest["subjects"][0]["writer"] == 1
    assert manifest["subjects"][0]["train_docs"] == ["subj0/doc00.txt", "subj0/doc01.txt"]
    assert manifest["subjects"][0]["test_sigs"] == ["U1S3", "U1S4"]
    assert json.dumps(manifest)  # JSON-serializable as written
