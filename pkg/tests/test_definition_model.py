import json
import random

import pytest
from hypothesis import given, strategies as st

from defigraph.definition_model import (
    DBPEDIA_RESOURCE_NS,
    EmptyKeyword,
    InvalidCharacters,
    MultiWordKeyword,
    RelationKind,
    ResourceNotFound,
    ShapingConfig,
    count_sentences,
    label_for_iri,
    normalize_keyword,
    resolve_resource,
    shape_results,
    truncate_abstract,
)
from defigraph.fixtures import load_fixture
from defigraph.sparql_client import BindingValue, SparqlResultSet, parse_results
from support import (
    DOG_FIXTURE_PATH,
    group_fixture_targets,
    make_keyword,
    oracle_boundaries,
    oracle_sentence_count,
    raw_fixture_abstract,
)


class TestNormalizeKeyword:
    def test_trims_and_uppercases_first_letter(self):
        assert normalize_keyword("  dog ").normalized == "Dog"

    def test_keeps_inner_capitals(self):
        assert normalize_keyword("iPhone").normalized == "IPhone"

    def test_underscores_allowed(self):
        assert normalize_keyword("ada_lovelace").normalized == "Ada_lovelace"

    def test_multi_word_rejected(self):
        with pytest.raises(MultiWordKeyword):
            normalize_keyword("New York")

    @pytest.mark.parametrize("raw", ["", "   ", "\t", "\n"])
    def test_empty_rejected(self, raw):
        with pytest.raises(EmptyKeyword):
            normalize_keyword(raw)

    @pytest.mark.parametrize("raw", ['do"g', "do<g", "do>g", "do{g", "do}g", "do|g", "do^g", "do`g", "do\\g", "do%67", "d\x00og", "d\x1bog"])
    def test_forbidden_characters_rejected(self, raw):
        with pytest.raises(InvalidCharacters):
            normalize_keyword(raw)

    @pytest.mark.parametrize("raw", ["new\tyork", "new\nyork", "new york", "a b"])
    def test_interior_whitespace_is_multi_word(self, raw):
        with pytest.raises(MultiWordKeyword):
            normalize_keyword(raw)

    def test_unicode_keywords_survive(self):
        assert normalize_keyword("étoile").normalized == "Étoile"

    def test_idempotent_on_generated_keywords(self):
        rng = random.Random(3)
        for _ in range(300):
            normalized = normalize_keyword(make_keyword(rng)).normalized
            assert normalize_keyword(normalized).normalized == normalized


class TestResolveResource:
    def test_dog_resolves_into_the_recorded_namespace(self):
        resource = resolve_resource(normalize_keyword("Dog"))
        assert resource.iri == "http://dbpedia.org/resource/Dog"
        # the recorded fixture was produced by querying exactly this IRI
        fixture = load_fixture(DOG_FIXTURE_PATH)
        assert f"<{resource.iri}>" in fixture.request_query

    def test_concatenation_contract(self):
        resource = resolve_resource(normalize_keyword("X"), "http://kb.example/r/")
        assert resource.iri == "http://kb.example/r/X"

    def test_underscores_become_spaces_in_label(self):
        resource = resolve_resource(normalize_keyword("Ada_Lovelace"))
        assert resource.label == "Ada Lovelace"


class TestLabelForIri:
    @pytest.mark.parametrize(
        "iri,label",
        [
            ("http://dbpedia.org/resource/Canis_lupus", "Canis lupus"),
            ("http://www.wikidata.org/entity/Q144", "Q144"),
            ("http://example.org/a/b/Caf%C3%A9", "Café"),
            ("http://example.org/vocab#Person", "Person"),
            ("http://example.org/", "example.org"),
        ],
    )
    def test_cases(self, iri, label):
        assert label_for_iri(iri) == label


class TestTruncateAbstract:
    def test_counting_rule(self):
        assert truncate_abstract("A b. C d. E f.", 2) == ("A b. C d.", True)

    def test_no_truncation_under_limit(self):
        assert truncate_abstract("One sentence.", 3) == ("One sentence.", False)

    def test_empty_text(self):
        assert truncate_abstract("", 5) == ("", False)

    def test_abbreviations_do_not_end_sentences(self):
        text = "Birds, e.g. crows, are smart. They use tools."
        assert count_sentences(text) == 2
        assert truncate_abstract(text, 1) == ("Birds, e.g. crows, are smart.", True)

    def test_initials_do_not_end_sentences(self):
        text = "J. Smith wrote it. B. Jones read it. Both liked it."
        assert count_sentences(text) == 3
        assert truncate_abstract(text, 1) == ("J. Smith wrote it.", True)

    def test_question_and_exclamation_marks(self):
        assert count_sentences("Really? Yes! Fine.") == 3

    def test_max_sentences_must_be_positive(self):
        with pytest.raises(ValueError):
            truncate_abstract("Hi.", 0)

    def test_recorded_abstract_truncates_at_third_boundary(self):
        abstract = raw_fixture_abstract()
        prefix, truncated = truncate_abstract(abstract, 3)
        assert truncated
        assert abstract.startswith(prefix)
        # independent regex oracle: the prefix holds exactly 3 boundaries,
        # the last one at its final character
        bounds = oracle_boundaries(prefix)
        assert len(bounds) == 3
        assert bounds[-1] == len(prefix) - 1


_texts = st.text(
    alphabet="ab E.?! \ne.g.Dr", max_size=80
)


class TestTruncationProperties:
    @given(_texts, st.integers(1, 6))
    def test_prefix_and_bounded_count(self, text, k):
        prefix, truncated = truncate_abstract(text, k)
        assert text.startswith(prefix)
        assert oracle_sentence_count(prefix) <= k
        if truncated:
            assert prefix[-1] in ".?!"

    @given(_texts, st.integers(1, 6))
    def test_identity_when_under_limit(self, text, k):
        if k >= oracle_sentence_count(text):
            assert truncate_abstract(text, k) == (text, False)

    @given(_texts)
    def test_scan_agrees_with_regex_oracle(self, text):
        assert count_sentences(text) == oracle_sentence_count(text)


def _rows(*bindings: dict) -> SparqlResultSet:
    variables = ("abstract", "thumbnail", "sameAs", "seeAlso", "differentFrom", "type")
    return SparqlResultSet(variables=variables, rows=tuple(bindings))


def _iri(value: str) -> BindingValue:
    return BindingValue(kind="iri", value=value)


def _en(value: str) -> BindingValue:
    return BindingValue(kind="literal", value=value, language="en")


DOG_TERM = resolve_resource(normalize_keyword("Dog"))


class TestShapeResults:
    def test_empty_result_set_raises_not_found(self):
        with pytest.raises(ResourceNotFound):
            shape_results(_rows(), DOG_TERM)

    def test_duplicate_rows_collapse_to_one_concept(self):
        row = {"seeAlso": _iri("http://dbpedia.org/resource/Wolf")}
        definition, related = shape_results(_rows(row, dict(row), dict(row)), DOG_TERM)
        assert len(related) == 1
        assert related[0].kind is RelationKind.SEE_ALSO

    def test_no_two_concepts_share_kind_and_target(self):
        rows = [
            {"sameAs": _iri("http://a.example/1")},
            {"sameAs": _iri("http://a.example/1"), "seeAlso": _iri("http://a.example/1")},
            {"seeAlso": _iri("http://a.example/2")},
        ]
        _, related = shape_results(_rows(*rows), DOG_TERM)
        keys = [(c.kind, c.target.iri) for c in related]
        assert len(keys) == len(set(keys)) == 3

    def test_first_abstract_in_requested_language_wins(self):
        rows = [
            {"abstract": BindingValue(kind="literal", value="Hund.", language="de")},
            {"abstract": _en("A dog.")},
            {"abstract": _en("Another.")},
        ]
        definition, _ = shape_results(_rows(*rows), DOG_TERM)
        assert definition.abstract == "A dog."

    def test_abstract_is_truncated_with_flag(self):
        rows = [{"abstract": _en("One. Two. Three. Four.")}]
        definition, _ = shape_results(_rows(*rows), DOG_TERM, ShapingConfig(max_sentences=2))
        assert definition.abstract == "One. Two."
        assert definition.full_abstract_available is True

    def test_missing_abstract_yields_empty_definition(self):
        definition, _ = shape_results(_rows({"thumbnail": _iri("http://img.example/x.jpg")}), DOG_TERM)
        assert definition.abstract == ""
        assert definition.full_abstract_available is False
        assert definition.thumbnail == "http://img.example/x.jpg"

    def test_per_kind_cap_keeps_smallest_iris(self):
        rows = [{"sameAs": _iri(f"http://a.example/{n:03d}")} for n in range(30)]
        _, related = shape_results(_rows(*rows), DOG_TERM, ShapingConfig(max_per_kind=5))
        iris = [c.target.iri for c in related]
        assert iris == [f"http://a.example/{n:03d}" for n in range(5)]

    def test_person_type_marks_concepts(self):
        rows = [
            {"type": _iri("http://dbpedia.org/ontology/Person")},
            {"sameAs": _iri("http://www.wikidata.org/entity/Q7259")},
        ]
        _, related = shape_results(_rows(*rows), DOG_TERM)
        assert all(c.is_person for c in related)

    def test_non_person_subject_leaves_flag_false(self):
        rows = [
            {"type": _iri("http://dbpedia.org/ontology/Animal")},
            {"sameAs": _iri("http://www.wikidata.org/entity/Q144")},
        ]
        _, related = shape_results(_rows(*rows), DOG_TERM)
        assert not any(c.is_person for c in related)

    def test_same_as_is_always_external(self):
        rows = [{"sameAs": _iri(DBPEDIA_RESOURCE_NS + "Canis")}]
        _, related = shape_results(_rows(*rows), DOG_TERM)
        assert related[0].is_external_link is True

    def test_namespace_internal_see_also_is_not_external(self):
        rows = [
            {"seeAlso": _iri(DBPEDIA_RESOURCE_NS + "Wolf")},
            {"seeAlso": _iri("http://other.example/Wolf")},
        ]
        _, related = shape_results(_rows(*rows), DOG_TERM)
        by_iri = {c.target.iri: c for c in related}
        assert by_iri[DBPEDIA_RESOURCE_NS + "Wolf"].is_external_link is False
        assert by_iri["http://other.example/Wolf"].is_external_link is True

    def test_output_order_is_deterministic(self):
        rows = [
            {"seeAlso": _iri("http://b.example/2")},
            {"sameAs": _iri("http://b.example/9")},
            {"seeAlso": _iri("http://b.example/1")},
            {"differentFrom": _iri("http://b.example/5")},
        ]
        first = shape_results(_rows(*rows), DOG_TERM)
        second = shape_results(_rows(*reversed(rows)), DOG_TERM)
        assert [ (c.kind, c.target.iri) for c in first[1] ] == [ (c.kind, c.target.iri) for c in second[1] ]

    def test_dog_fixture_counts_match_independent_grouping(self):
        fixture = load_fixture(DOG_FIXTURE_PATH)
        results = parse_results(fixture.response_body)
        _, related = shape_results(results, DOG_TERM)
        expected = group_fixture_targets()
        for kind, var in [
            (RelationKind.SAME_AS, "sameAs"),
            (RelationKind.SEE_ALSO, "seeAlso"),
            (RelationKind.DIFFERENT_FROM, "differentFrom"),
        ]:
            got = sorted(c.target.iri for c in related if c.kind is kind)
            assert got == expected[var]
