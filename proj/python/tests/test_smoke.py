from pathlib import Path

import pytest

import xlex

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


@pytest.fixture(scope="module")
def res():
    return xlex.load_resources()


@pytest.fixture(scope="module")
def lexicon(res):
    records = xlex.read_attributions(FIXTURES / "attributions_demo.csv")
    xl = xlex.build_xlex(records, res)
    lm = xlex.prepare_lm(["gain", "strong"], ["loss", "weak"], res)
    return xlex.combine(xl, lm)


def test_lemmatize_and_tokenize(res):
    assert res.lemmatize("acquired") == "acquire"
    assert not res.is_valid_word("of")
    assert xlex.tokenize("Profit rose 22%.") == ["Profit", "rose", "22"]


def test_build_option_resolution(res):
    records = [(0, "option", 0.2), (0, "Option", 0.19), (1, "option", -0.01)]
    (entry,) = xlex.build_xlex(records, res)
    assert entry.word == "option"
    assert entry.category == "positive"
    assert entry.opposite["count"] == 1
    assert entry.shap_ratio + entry.shap_ratio_opp == pytest.approx(1.0)


def test_combine_and_normalize(lexicon, tmp_path):
    assert "loss" in lexicon
    row = lexicon.row("weak")
    assert row["lm"]["category"] == "negative"
    norm = xlex.normalize(lexicon)
    assert norm.normalized
    with pytest.raises(xlex.AlreadyNormalized):
        xlex.normalize(norm)
    path = tmp_path / "lex.norm.csv"
    xlex.save_lexicon(norm, path, name="demo")
    back = xlex.load_lexicon(path)
    assert back.normalized and back.name == "demo" and len(back) == len(norm)


def test_classify_and_evaluate(lexicon, res):
    model = xlex.SentimentModel(lexicon, res, selector="lm")
    assert model.classify("A weak quarter") == (pytest.approx(-0.1), "negative", 1)
    assert model.classify("nothing here")[1] == "neutral"
    rows = [("Strong gains", "positive"), ("Heavy losses", "negative")]
    report = xlex.evaluate(rows, lexicon, res, selector="lm")
    assert report["accuracy"] == 1.0 and report["mcc"] == 1.0
    with pytest.raises(xlex.InvalidConfig):
        xlex.SentimentModel(lexicon, res, coeffs=[0.3, 0.1, 0.1])


def test_grid_shape(lexicon, res):
    data = [("d", [("Strong gains", "positive"), ("Heavy losses", "negative")])]
    result = xlex.grid_search([("demo", [lexicon])], data, res)
    assert len(result["table"]) == 125
    assert result["best"][3] == 0.5


def test_missing_file_raises():
    with pytest.raises(xlex.FileNotFound):
        xlex.read_attributions("/nonexistent/attributions.csv")
