#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"

using namespace mknf;
using namespace testutil;

namespace {

std::vector<std::string> rule_strings(const DoubledProgram& dp) {
    std::vector<std::string> out;
    for (const Rule& r : dp.rules) out.push_back(to_string(r, dp.symbols));
    return out;
}

// structural conformance of one rule against its provenance tag
bool conforms(const DoubledProgram& dp, const Rule& r, RuleTag tag) {
    const SymbolTable& syms = dp.symbols;
    auto role = [&](const Atom& a) { return syms.pred(a.pred).role; };
    auto is_marker_for_head = [&](const Literal& l) {
        return !l.positive && role(l.atom) == PredRole::Marker &&
               syms.pred(l.atom.pred).base == syms.pred(r.head.pred).base &&
               l.atom.args == r.head.args;
    };
    switch (tag) {
    case RuleTag::User2a: {
        if (role(r.head) != PredRole::User && role(r.head) != PredRole::Aux) return false;
        for (const Literal& l : r.body) {
            if (l.positive && role(l.atom) != PredRole::User &&
                role(l.atom) != PredRole::Aux)
                return false;
            if (!l.positive && role(l.atom) != PredRole::Doubled) return false;
        }
        return true;
    }
    case RuleTag::User2bI:
    case RuleTag::User2bII: {
        if (role(r.head) != PredRole::Doubled) return false;
        bool dl_head = syms.pred(syms.pred(r.head.pred).base).dl;
        if ((tag == RuleTag::User2bI) != dl_head) return false;
        size_t markers = 0;
        for (size_t i = 0; i < r.body.size(); ++i) {
            const Literal& l = r.body[i];
            if (l.positive) {
                if (role(l.atom) != PredRole::Doubled) return false;
            } else if (is_marker_for_head(l)) {
                ++markers;
                if (i + 1 != r.body.size()) return false; // marker is trailing
            } else if (role(l.atom) != PredRole::User && role(l.atom) != PredRole::Aux) {
                return false;
            }
        }
        return markers == (tag == RuleTag::User2bI ? 1u : 0u);
    }
    case RuleTag::A1:
    case RuleTag::A2: {
        size_t arity = tag == RuleTag::A1 ? 1 : 2;
        if (r.head.args.size() != arity || !r.head.ground()) return false;
        if (role(r.head) == PredRole::User) return r.body.empty();
        if (role(r.head) != PredRole::Doubled) return false;
        return r.body.size() == 1 && is_marker_for_head(r.body[0]);
    }
    case RuleTag::C1:
    case RuleTag::C2:
    case RuleTag::C3:
    case RuleTag::R1:
    case RuleTag::R2: {
        bool doubled = role(r.head) == PredRole::Doubled;
        size_t pos = 0, mark = 0;
        for (const Literal& l : r.body) {
            if (l.positive) {
                ++pos;
                if (doubled && role(l.atom) != PredRole::Doubled) return false;
                if (!doubled && role(l.atom) != PredRole::User) return false;
            } else {
                if (!doubled || !is_marker_for_head(l)) return false;
                ++mark;
            }
        }
        if (doubled && mark != 1) return false;
        if (!doubled && mark != 0) return false;
        size_t want = tag == RuleTag::C1 || tag == RuleTag::R1 ? 1 : 2;
        // a top slot may drop one body conjunct, and top <= D emits facts
        return pos <= want;
    }
    case RuleTag::I1:
        return role(r.head) == PredRole::Marker && r.body.empty();
    case RuleTag::I2:
        return role(r.head) == PredRole::Marker && r.body.size() == 1 &&
               r.body[0].positive && role(r.body[0].atom) == PredRole::User;
    case RuleTag::I3:
        return role(r.head) == PredRole::Marker && r.body.size() <= 1 &&
               (r.body.empty() ||
                (r.body[0].positive && role(r.body[0].atom) == PredRole::User));
    }
    return false;
}

} // namespace

TEST_CASE("doubling exPrel1 reproduces the eight doubled rules with one marker") {
    HybridKB kb = parse_kb(kExPrel1);
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    double_rules(kb.program, dp);
    CHECK(rule_strings(dp) ==
          std::vector<std::string>{
              "p(X) :- not D$d(X), o(X).",
              "p$d(X) :- not D(X), o$d(X).",
              "E(X) :- not E$d(X), o(X).",
              "E$d(X) :- not E(X), o$d(X), not N$E(X).",
              "o(a).",
              "o$d(a).",
              "o(b).",
              "o$d(b).",
          });
    size_t markers = 0;
    for (const Rule& r : dp.rules)
        for (const Literal& l : r.body)
            if (!l.positive && dp.symbols.pred(l.atom.pred).role == PredRole::Marker)
                ++markers;
    CHECK(markers == 1);
    CHECK(dp.tags[3] == RuleTag::User2bI);
}

TEST_CASE("doubling a non-DL fact") {
    HybridKB kb = parse_kb("%rules\no(a).\n");
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    double_rules(kb.program, dp);
    CHECK(rule_strings(dp) == std::vector<std::string>{"o(a).", "o$d(a)."});
}

TEST_CASE("doubling a positive rule with a non-DL head") {
    HybridKB kb = parse_kb("%rules\nh(a) :- b(a).\n");
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    double_rules(kb.program, dp);
    CHECK(rule_strings(dp) ==
          std::vector<std::string>{"h(a) :- b(a).", "h$d(a) :- b$d(a)."});
}

TEST_CASE("doubling size and marker-count invariants") {
    for (uint32_t seed = 1; seed <= 30; ++seed) {
        Gen gen(seed);
        HybridKB kb;
        try {
            kb = parse_kb(gen.kb_text());
        } catch (const ParseError&) {
            continue;
        }
        DoubledProgram dp;
        dp.symbols = kb.symbols;
        double_rules(kb.program, dp);
        CHECK(dp.rules.size() == 2 * kb.program.size());
        size_t dl_heads = 0;
        for (const Rule& r : kb.program)
            if (kb.symbols.pred(r.head.pred).dl) ++dl_heads;
        size_t markers = 0;
        for (size_t i = 0; i < dp.rules.size(); ++i)
            if (dp.tags[i] == RuleTag::User2bI) ++markers;
        CHECK(markers == dl_heads);
    }
}

TEST_CASE("translating the exPrel1 ontology") {
    HybridKB kb = parse_kb(kExPrel1);
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    ClassificationMaps maps = classify(nt, kb.symbols);
    std::vector<NormalAxiom> reduced = reduce_tbox(nt, maps);
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    translate_ontology(reduced, kb.ontology, dp);
    CHECK(rule_strings(dp) ==
          std::vector<std::string>{
              "C(b).",
              "C$d(b) :- not N$C(b).",
              "D(X) :- C(X).",
              "D$d(X) :- C$d(X), not N$D(X).",
              "N$E(X) :- C(X).",
              "N$C(X) :- E(X).",
          });
}

TEST_CASE("translating an empty ontology yields nothing") {
    HybridKB kb = parse_kb("%rules\np(a).\n");
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    translate_ontology({}, kb.ontology, dp);
    CHECK(dp.rules.empty());
}

TEST_CASE("translate refuses form-(4) axioms") {
    HybridKB kb = parse_kb("%tbox\nC <= exists r.D.\n");
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    CHECK_THROWS_AS(translate_ontology(nt.axioms, kb.ontology, dp), KbError);
}

TEST_CASE("build_combined rejects inconsistent ontologies up front") {
    HybridKB kb = parse_kb("%tbox\nC <= bot.\n%abox\nC(a).\n");
    CHECK_THROWS_AS(build_combined(kb), OntologyInconsistentError);
}

TEST_CASE("build_combined on exPrel1 is the union of doubling and translation") {
    HybridKB kb = parse_kb(kExPrel1);
    CompiledKB c = build_combined(kb);
    CHECK(c.program.rules.size() == 8 + 6);
    CHECK(c.program.universe.size() == 2);
    // markers and doubled predicates registered in the metadata
    PredId e = c.program.symbols.find_pred("E").value();
    CHECK(c.program.doubled(e) != knone);
    CHECK(c.program.marker(e) != knone);
    PredId o = c.program.symbols.find_pred("o").value();
    CHECK(c.program.doubled(o) != knone);
    CHECK(c.program.marker(o) == knone); // non-DL heads take no marker
}

TEST_CASE("no rule ever heads a doubled marker predicate") {
    for (uint32_t seed = 1; seed <= 40; ++seed) {
        Gen gen(seed);
        std::optional<CompiledKB> c;
        try {
            c = try_compile(gen.kb_text(), nullptr);
        } catch (const ParseError&) {
            continue;
        }
        if (!c) continue;
        for (const Rule& r : c->program.rules) {
            const PredEntry& e = c->program.symbols.pred(r.head.pred);
            if (e.role == PredRole::Marker)
                CHECK(c->program.symbols.pred(e.base).role == PredRole::User);
            // N$X$d or (N$X)$d never exists
            bool marker_name = e.name.find("N$") != std::string::npos;
            bool doubled_name = e.name.find("$d") != std::string::npos;
            CHECK_FALSE((marker_name && doubled_name));
        }
    }
}

TEST_CASE("schema conformance: every compiled rule matches its tag") {
    int usable = 0;
    for (uint32_t seed = 1; seed <= 60; ++seed) {
        Gen gen(seed);
        std::optional<CompiledKB> c;
        try {
            c = try_compile(gen.kb_text(), nullptr);
        } catch (const ParseError&) {
            continue;
        }
        if (!c) continue;
        ++usable;
        for (size_t i = 0; i < c->program.rules.size(); ++i)
            CHECK_MESSAGE(conforms(c->program, c->program.rules[i], c->program.tags[i]),
                          to_string(c->program.rules[i], c->program.symbols)
                              << " tagged " << tag_name(c->program.tags[i]));
    }
    CHECK(usable >= 30);
}

TEST_CASE("translation size is linear in the ABox and TBox") {
    for (uint32_t seed = 1; seed <= 30; ++seed) {
        Gen gen(seed);
        HybridKB kb;
        std::optional<CompiledKB> c;
        try {
            c = try_compile(gen.kb_text(), &kb);
        } catch (const ParseError&) {
            continue;
        }
        if (!c) continue;
        size_t a_rules = 0, cr_rules = 0, i_rules = 0, bot_axioms = 0;
        for (size_t i = 0; i < c->program.rules.size(); ++i) {
            switch (c->program.tags[i]) {
            case RuleTag::A1:
            case RuleTag::A2: ++a_rules; break;
            case RuleTag::C1:
            case RuleTag::C2:
            case RuleTag::C3:
            case RuleTag::R1:
            case RuleTag::R2: ++cr_rules; break;
            case RuleTag::I1:
            case RuleTag::I2:
            case RuleTag::I3: ++i_rules; break;
            default: break;
            }
        }
        for (const NormalAxiom& ax : c->reduced)
            if (ax.rhs == kBotC) ++bot_axioms;
        size_t abox =
            kb.ontology.concept_asserts.size() + kb.ontology.role_asserts.size();
        size_t indivs = kb.individuals().size();
        // top <= D axioms expand per individual; everything else is 2x
        CHECK(a_rules == 2 * abox);
        CHECK(cr_rules <= 2 * c->reduced.size() * std::max<size_t>(1, indivs));
        CHECK(i_rules <= 2 * bot_axioms);
    }
}

TEST_CASE("guard-doubling can be switched off for user rules") {
    HybridKB kb = parse_kb(kExPrel1);
    TransformOptions opts;
    opts.skip_guard_doubling = true;
    DoubledProgram dp;
    dp.symbols = kb.symbols;
    double_rules(kb.program, dp, opts);
    CHECK(to_string(dp.rules[1], dp.symbols) == "p$d(X) :- not D(X), o(X).");
    CHECK(to_string(dp.rules[3], dp.symbols) == "E$d(X) :- not E(X), o(X), not N$E(X).");
    // assertion rules are unaffected by the flag (they carry no guards)
}
