import json

import pytest

import mereo


def test_normalize_round_trip():
    text = mereo.normalize("E x.(sub(x,c)&card(x)>=2)")
    assert text == mereo.normalize(text)
    assert mereo.free_variables(text) == ["c"]


def test_parse_error_is_value_error():
    with pytest.raises(mereo.ParseError):
        mereo.normalize("sub(x y)")
    with pytest.raises(ValueError):
        mereo.normalize("card(x) >=")


def test_decide():
    assert mereo.decide("A x. sub(0, x)") is True
    assert mereo.decide("E x. card(x) >= 3 & card(x) = 2") is False
    with pytest.raises(mereo.NotASentence):
        mereo.decide("sub(c, d)")


def test_eliminate_goldens():
    assert mereo.eliminate("E x. (card(x*c)>=3 & card(x*c)>=7 & card(c-x)=2)") == "card(c) >= 9"
    assert mereo.eliminate("E x. (card(x*c)>=5 & card(x*c)=3)") == "card(0) >= 1"
    assert (mereo.eliminate_exists("x", "card(c*x) >= 5 & card(c-x) = 6 & card(d*x) >= 7")
            == "card(c) >= 11 & card(d) >= 7")


def test_budget():
    with pytest.raises(mereo.BudgetExceeded):
        mereo.eliminate("E x. E y. (card(x*c)>=3 & card(y-x)=2 & sub(y, d))", budget=1)


def test_eval_and_equivalence():
    assert mereo.eval_formula("sub(c, d)", {"c": [1], "d": [1, 2]}) is True
    assert mereo.eval_formula("E x. (sub(x, c) & card(x) = 2)", {"c": [1, 2, 3]}) is True
    f = "E x. (sub(x, c) & card(x) >= 2)"
    assert mereo.check_equivalence(f, mereo.eliminate(f), samples=20, universe_size=8, seed=3) is None
    ce = mereo.check_equivalence("card(c) >= 1", "card(c) >= 2", samples=50, universe_size=4, seed=1)
    assert ce is not None and ce["lhs"] != ce["rhs"]


def test_hf():
    assert mereo.hf_tau("{}") == "{}"
    assert mereo.hf_tau("{{}}") == "{{{}}}"
    assert mereo.hf_mem_star("{{{}}}", "{{},{{}}}") is True
    assert mereo.hf_mem_star("{{}}", "{{},{{}}}") is False
    report = mereo.hf_verify(max_rank=3)
    assert report["schema"] == "mereo/1"
    assert report["verdict"] == "pass"
    with pytest.raises(ValueError):
        mereo.hf_verify(max_rank=3, z="{{{}}}")


def test_run_matches_cli_contract():
    code, out, err = mereo.run("decide", "A x. sub(x, x)", format="json")
    assert code == 0 and json.loads(out)["verdict"] is True
    code, _, err = mereo.run("decide", "sub(x y)")
    assert code == 2 and "syntax error" in err
    report = mereo.oracle_compare(count=50, seed=9)
    assert report["verdict"] == "pass"
