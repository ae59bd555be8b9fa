import random

import pytest

from pcsos.algebra import RATIONAL, Polynomial, parse_poly
from pcsos.fol import (
    And,
    BigSum,
    ClassificationError,
    FolError,
    FolParseError,
    ForallIdx,
    FunctionRegistry,
    IdxVar,
    Not,
    Or,
    RingEq,
    classify_indpc,
    eval_formula,
    eval_index,
    format_formula,
    free_index_vars,
    parse_formula,
    substitute_index,
    translate_formula,
    translate_ring_term,
)

REG = FunctionRegistry.standard()


def P(text):
    return parse_poly(text, RATIONAL)


def F(text, reg=REG):
    return parse_formula(text, reg)


class TestParsing:
    def test_atomic_oracle_equation(self):
        phi = F("(= (X 0) (rat 0))")
        assert isinstance(phi, RingEq)

    def test_bounded_forall_over_disjunction(self):
        phi = F("(forall i 3 (or (= (X i) (rat 0)) (= (X i) (rat 1))))")
        assert isinstance(phi, ForallIdx) and isinstance(phi.body, Or)

    def test_big_sum_term(self):
        phi = parse_formula("(= (sum i n (X i)) (rat 2))", REG, scope={"n"})
        assert isinstance(phi.left, BigSum)

    def test_scoping_enforced(self):
        with pytest.raises(FolParseError):
            F("(= (X i) (rat 0))")  # i unbound
        F("(forall i 3 (= (X i) (rat 0)))")

    def test_unknown_function_rejected(self):
        with pytest.raises(FolParseError):
            F("(= (X (fn nosuch 1)) (rat 0))")

    def test_format_round_trip(self):
        texts = [
            "(= (X (fn pair i j)) (rat 1/2))",
            "(forall i n (or (= (X i) (rat 0)) (i< i n)))",
            "(and (i= 0 1) (not (i< 1 0)))",
            "(= (sum k n (* (X k) (X k))) (rat 0))",
        ]
        for text in texts:
            phi = parse_formula(text, REG, scope={"i", "j", "n"})
            again = parse_formula(format_formula(phi), REG, scope={"i", "j", "n"})
            assert again == phi


class TestClassification:
    def test_disjunction_of_atoms(self):
        phi = parse_formula("(or (= (X i) (rat 0)) (= (X j) (rat 0)))", REG, scope={"i", "j"})
        assert classify_indpc(phi)[0]

    def test_negated_oracle_atom_rejected(self):
        phi = Not(parse_formula("(= (X i) (rat 0))", REG, scope={"i"}))
        ok, why = classify_indpc(phi)
        assert not ok and "Not" in why

    def test_index_only_negation_allowed(self):
        phi = parse_formula("(not (i= i j))", REG, scope={"i", "j"})
        assert classify_indpc(phi)[0]

    def test_exists_only_oracle_free(self):
        good = F("(exists i 5 (i= i 3))")
        assert classify_indpc(good)[0]
        bad = F("(exists i 5 (= (X i) (rat 1)))")
        assert not classify_indpc(bad)[0]


class TestIndexEvaluation:
    def test_builtins(self):
        alpha = {"i": 4, "j": 7}
        assert eval_index(parse_formula("(i= (+ i j) 11)", REG, {"i", "j"}).left, alpha, REG) == 11
        assert eval_index(parse_formula("(i= (monus i j) 0)", REG, {"i", "j"}).left, alpha, REG) == 0

    def test_cantor_pairing(self):
        pair = REG.index_fns["pair"][1]
        assert pair(1, 0) == 1
        seen = set()
        for a in range(20):
            for b in range(20):
                v = pair(a, b)
                assert v not in seen
                seen.add(v)
                assert REG.index_fns["fst"][1](v) == a
                assert REG.index_fns["snd"][1](v) == b

    def test_tables_are_total(self):
        reg = FunctionRegistry.standard()
        reg.register_index_table("h", 1, {(0,): 5, (1,): 6}, default=0)
        assert reg.index_apply("h", (1,)) == 6
        assert reg.index_apply("h", (99,)) == 0


class TestTermTranslation:
    def test_big_sum_of_oracle(self):
        term = parse_formula("(= (sum i 3 (X i)) (rat 0))", REG).left
        assert translate_ring_term(term, {}, REG) == P("x0 + x1 + x2")

    def test_pairing_variable(self):
        term = parse_formula("(= (X (fn pair i j)) (rat 0))", REG, {"i", "j"}).left
        assert translate_ring_term(term, {"i": 1, "j": 0}, REG) == P("x1")

    def test_ring_constant_function(self):
        reg = FunctionRegistry.standard()
        reg.register_ring_table("c", 1, {}, default=5)
        term = parse_formula("(= (rfn c i) (rat 0))", reg, {"i"}).left
        assert translate_ring_term(term, {"i": 7}, reg) == P("5")

    def test_sum_of_ones_is_length(self):
        term = parse_formula("(= (sum j n (rat 1)) (rat 0))", REG, {"n"}).left
        for n in range(6):
            assert translate_ring_term(term, {"n": n}, REG) == Polynomial.const(RATIONAL, n)

    def test_degree_depends_only_on_multiplication_nesting(self):
        term = parse_formula(
            "(= (sum i n (* (X i) (* (X (+ i 1)) (X (+ i 2))))) (rat 0))", REG, {"n"}
        ).left
        degrees = {translate_ring_term(term, {"n": n}, REG).degree for n in range(2, 12)}
        assert degrees == {3}


class TestFormulaTranslation:
    def test_disjunction_becomes_product(self):
        phi = F("(or (= (X 0) (rat 0)) (= (X 1) (rat 0)))")
        assert list(translate_formula(phi, {}, REG)) == [P("x0*x1")]

    def test_conjunction_becomes_union(self):
        phi = F("(and (= (X 0) (rat 0)) (= (X 1) (rat 1)))")
        assert list(translate_formula(phi, {}, REG)) == [P("x0"), P("x1 - 1")]

    def test_false_index_sentence(self):
        phi = F("(i= 1 2)")
        assert list(translate_formula(phi, {}, REG)) == [P("1")]
        assert list(translate_formula(F("(i= 2 2)"), {}, REG)) == [P("0")]

    def test_bounded_forall_unions_instances(self):
        phi = F("(forall i 3 (= (X i) (rat 0)))")
        assert list(translate_formula(phi, {}, REG)) == [P("x0"), P("x1"), P("x2")]

    def test_unclassified_formula_rejected(self):
        phi = Not(F("(= (X 0) (rat 0))"))
        with pytest.raises(ClassificationError):
            translate_formula(phi, {}, REG)

    def test_compositionality(self):
        a = F("(= (X 0) (rat 0))")
        b = F("(forall i 2 (= (X i) (rat 1)))")
        conj = translate_formula(And((a, b)), {}, REG)
        assert conj.members == translate_formula(a, {}, REG).union(
            translate_formula(b, {}, REG)
        ).members
        disj = translate_formula(Or((a, b)), {}, REG)
        assert disj.members == translate_formula(a, {}, REG).product(
            translate_formula(b, {}, REG)
        ).members


class TestSemanticsAgreement:
    def test_eval_basics(self):
        assert eval_formula(F("(= (X 0) (rat 0))"), {}, {0: 0}, REG)
        assert not eval_formula(F("(i= 1 2)"), {}, {}, REG)

    def test_translation_captures_semantics(self):
        rng = random.Random(31)
        phi = F(
            "(and (= (X 0) (rat 1))"
            " (forall i 4 (or (= (X i) (rat 0)) (= (X (+ i 1)) (rat 1)))))"
        )
        eqs = translate_formula(phi, {}, REG)
        variables = sorted(eqs.variables())
        for _ in range(100):
            oracle = {v: rng.randint(0, 1) for v in variables}
            truth = eval_formula(phi, {}, oracle, REG)
            assert truth == eqs.vanishes_at(oracle)

    def test_oracle_gap_reported(self):
        with pytest.raises(FolError):
            eval_formula(F("(= (X 5) (rat 0))"), {}, {0: 1}, REG)


class TestSubstitutionAndFreeVars:
    def test_free_vars(self):
        phi = parse_formula("(forall i n (= (X i) (X j)))", REG, {"n", "j"})
        assert free_index_vars(phi) == {"n", "j"}

    def test_substitute_free_only(self):
        phi = parse_formula("(forall i n (= (X i) (X j)))", REG, {"n", "j"})
        sub = substitute_index(phi, "j", IdxVar("k"))
        assert free_index_vars(sub) == {"n", "k"}
        same = substitute_index(phi, "i", IdxVar("k"))
        assert same == phi
