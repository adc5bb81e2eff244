#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace mknf;
using namespace testutil;

TEST_CASE("exPrel1 parses into the expected structure") {
    HybridKB kb = parse_kb(kExPrel1);
    CHECK(kb.ontology.tbox.size() == 2);
    CHECK(kb.ontology.concept_asserts.size() == 1);
    CHECK(kb.program.size() == 4);
    CHECK(kb.individuals().size() == 2);
    const TBoxAxiom& disj = kb.ontology.tbox[1];
    CHECK(disj.kind == TBoxAxiom::Kind::Gci);
    CHECK(disj.lhs.kind == ConceptExpr::Kind::Conj);
    CHECK(disj.rhs.kind == ConceptExpr::Kind::Bottom);
}

TEST_CASE("disjointness sugar rewrites to a bottom axiom") {
    HybridKB kb1 = parse_kb("%tbox\nQ <= not R.\n");
    HybridKB kb2 = parse_kb("%tbox\nQ and R <= bot.\n");
    REQUIRE(kb1.ontology.tbox.size() == 1);
    REQUIRE(kb2.ontology.tbox.size() == 1);
    // same interning order, so structural equality is meaningful
    CHECK(kb1.ontology.tbox[0] == kb2.ontology.tbox[0]);
}

TEST_CASE("empty input parses to an empty KB") {
    HybridKB kb = parse_kb("");
    CHECK(kb.ontology.empty());
    CHECK(kb.program.empty());
    CHECK(kb.individuals().empty());
}

TEST_CASE("ALC-only constructs are rejected with location info") {
    auto reject = [](const std::string& text) {
        try {
            parse_kb(text);
            FAIL_CHECK("expected rejection of: " << text);
        } catch (const ParseError& e) {
            CHECK(e.exit_code == 3);
            CHECK(e.loc.line >= 1);
            CHECK(std::string(e.what()).find("unsupported") != std::string::npos);
        }
    };
    reject("%tbox\nC or D <= E.\n");
    reject("%tbox\nC <= D or E.\n");
    reject("%tbox\nforall r.C <= D.\n");
    reject("%tbox\nC <= forall r.D.\n");
    reject("%tbox\nC and not D <= E.\n");
    reject("%tbox\nexists r.(not D) <= E.\n");
}

TEST_CASE("syntax errors carry a source location") {
    try {
        parse_kb("%tbox\nC <= .\n");
        FAIL_CHECK("expected syntax error");
    } catch (const ParseError& e) {
        CHECK(e.exit_code == 2);
        CHECK(e.loc.line == 2);
    }
}

TEST_CASE("DL-safety violations are load errors") {
    try {
        parse_kb("%tbox\nD <= E.\n%rules\np(X) :- not D(X).\n");
        FAIL_CHECK("expected safety error");
    } catch (const ParseError& e) {
        CHECK(e.exit_code == 3);
        CHECK(std::string(e.what()).find("X") != std::string::npos);
    }
}

TEST_CASE("role inclusions are recognized by kind inference") {
    HybridKB kb = parse_kb("%tbox\nr o s <= t.\nr <= s.\n%abox\nr(a,b).\n");
    REQUIRE(kb.ontology.tbox.size() == 2);
    CHECK(kb.ontology.tbox[0].kind == TBoxAxiom::Kind::Ri);
    CHECK(kb.ontology.tbox[0].chain.size() == 2);
    CHECK(kb.ontology.tbox[1].kind == TBoxAxiom::Kind::Ri);
    CHECK(kb.symbols.pred(kb.symbols.find_pred("s").value()).kind == PredKind::Role);
}

TEST_CASE("bare inclusions between unknown names default to concepts") {
    HybridKB kb = parse_kb("%tbox\nA <= B.\n");
    REQUIRE(kb.ontology.tbox.size() == 1);
    CHECK(kb.ontology.tbox[0].kind == TBoxAxiom::Kind::Gci);
}

TEST_CASE("mixing concept and role use of one name is an error") {
    CHECK_THROWS_AS(parse_kb("%tbox\nexists r.C <= D.\n%abox\nr(a).\n"), ParseError);
}

TEST_CASE("0-ary predicates parse in rules") {
    HybridKB kb = parse_kb(kK2);
    CHECK(kb.program.size() == 2);
    PredId u = kb.symbols.find_pred("u").value();
    CHECK(kb.symbols.pred(u).arity == 0);
}

TEST_CASE("query parsing: ground atom") {
    HybridKB kb = parse_kb(kEx62);
    ParsedQuery q = parse_query("G(a)", kb);
    CHECK(q.answer_vars.empty());
    CHECK(q.warnings.empty());
    REQUIRE(q.rule.body.size() == 1);
    CHECK(to_string(q.rule.body[0].atom, kb.symbols) == "G(a)");
}

TEST_CASE("query parsing: open safe query") {
    HybridKB kb = parse_kb(kExPrel1);
    ParsedQuery q = parse_query("p(X), not D(X), o(X)", kb);
    CHECK(q.answer_vars.size() == 1);
    CHECK(q.rule.body.size() == 3);
    CHECK(dl_safety_violations(q.rule, kb.symbols).empty());
}

TEST_CASE("query parsing: unsafe query is rejected") {
    HybridKB kb = parse_kb(kExPrel1);
    CHECK_THROWS_AS(parse_query("D(X)", kb), ParseError);
}

TEST_CASE("query parsing: unknown predicates warn and stay non-DL") {
    HybridKB kb = parse_kb(kExPrel1);
    ParsedQuery q = parse_query("zzz(a)", kb);
    REQUIRE(q.warnings.size() == 1);
    CHECK(q.warnings[0].find("zzz") != std::string::npos);
    CHECK_FALSE(kb.symbols.pred(q.rule.body[0].atom.pred).dl);
}

TEST_CASE("program serialization round-trips") {
    HybridKB kb = parse_kb(kExPrel1);
    std::string s1 = serialize_program(kb.program, kb.symbols);
    HybridKB kb2 = parse_kb("%tbox\nC <= D.\nC and E <= bot.\n%abox\nC(b).\n%rules\n" + s1);
    std::string s2 = serialize_program(kb2.program, kb2.symbols);
    CHECK(s1 == s2);
}

TEST_CASE("generated KBs round-trip through parse and serialize") {
    int tried = 0;
    for (uint32_t seed = 1; seed <= 60 && tried < 40; ++seed) {
        Gen gen(seed);
        std::string text = gen.kb_text();
        HybridKB kb;
        try {
            kb = parse_kb(text);
        } catch (const ParseError&) {
            continue;
        }
        ++tried;
        std::ostringstream os;
        os << "%tbox\n";
        for (const TBoxAxiom& ax : kb.ontology.tbox) os << to_string(ax, kb.symbols) << '\n';
        os << "%abox\n";
        for (const ConceptAssertion& ca : kb.ontology.concept_asserts)
            os << kb.symbols.pred(ca.concept_).name << '('
               << kb.symbols.const_name(ca.indiv) << ").\n";
        for (const RoleAssertion& ra : kb.ontology.role_asserts)
            os << kb.symbols.pred(ra.role).name << '(' << kb.symbols.const_name(ra.from)
               << ',' << kb.symbols.const_name(ra.to) << ").\n";
        os << "%rules\n" << serialize_program(kb.program, kb.symbols);
        HybridKB kb2 = parse_kb(os.str());
        CHECK(kb2.ontology.tbox.size() == kb.ontology.tbox.size());
        CHECK(kb2.program.size() == kb.program.size());
        for (size_t i = 0; i < kb.ontology.tbox.size(); ++i)
            CHECK(to_string(kb2.ontology.tbox[i], kb2.symbols) ==
                  to_string(kb.ontology.tbox[i], kb.symbols));
        CHECK(serialize_program(kb2.program, kb2.symbols) ==
              serialize_program(kb.program, kb.symbols));
    }
    CHECK(tried >= 20);
}

TEST_CASE("model serialization lists sorted partitions") {
    HybridKB kb = parse_kb(kExPrel1);
    std::vector<ModelEntry> entries;
    entries.push_back({atom(kb, "o", {"b"}), Truth::True, false});
    entries.push_back({atom(kb, "D", {"b"}), Truth::True, false});
    entries.push_back({atom(kb, "E", {"a"}), Truth::Undefined, false});
    entries.push_back({atom(kb, "D", {"a"}), Truth::False, false});
    std::string text = serialize_model(entries, kb.symbols);
    CHECK(text == "true: D(b) o(b)\nundefined: E(a)\nfalse: D(a)\n");
}

TEST_CASE("empty model serializes three empty sections") {
    SymbolTable syms;
    CHECK(serialize_model({}, syms) == "true:\nundefined:\nfalse:\n");
}

TEST_CASE("structured program dump is line-oriented key/value") {
    HybridKB kb = parse_kb("%rules\np(a) :- not q(a).\n");
    std::string s = serialize_program(kb.program, kb.symbols, Format::Structured);
    CHECK(s.find("program.size 1") != std::string::npos);
    CHECK(s.find("rule.0.head p(a)") != std::string::npos);
    CHECK(s.find("rule.0.body not q(a)") != std::string::npos);
}

TEST_CASE("comments and fact syntax variants are accepted") {
    HybridKB kb = parse_kb("# leading comment\n%rules\np(a). # trailing\nq(b) :- .\n");
    CHECK(kb.program.size() == 2);
    CHECK(kb.program[1].body.empty());
}
