#pragma once

#include "mknf/classifier.hpp"
#include "mknf/kb.hpp"

#include <unordered_map>
#include <vector>

// Compiles a hybrid KB into a single doubled rule program: rule doubling plus
// the reduced-ontology-to-rules translation. For every predicate A the
// transformation may introduce A$d (non-falsity of A) and N$A (classical
// negation marker).

namespace mknf {

enum class RuleTag : uint8_t {
    User2a,
    User2bI,  // doubled rule with DL head, carries the trailing marker literal
    User2bII, // doubled rule with non-DL head
    A1,
    A2,
    C1,
    C2,
    C3,
    R1,
    R2,
    I1,
    I2,
    I3,
};

const char* tag_name(RuleTag t);

struct DoubledProgram {
    SymbolTable symbols; // extended copy of the source KB's table
    Program rules;
    std::vector<RuleTag> tags; // parallel to rules
    std::vector<ConstId> universe;

    PredId doubled(PredId orig) const;      // knone if never created
    PredId marker(PredId orig) const;       // knone if never created
    bool original_pred(PredId p) const {
        PredRole r = symbols.pred(p).role;
        return r == PredRole::User || r == PredRole::Aux;
    }

    std::vector<std::string> tag_names() const;

    std::unordered_map<PredId, PredId> to_doubled, to_marker;
};

struct TransformOptions {
    // Leaves positive non-DL atoms in user (2b) rule bodies undoubled. Off by
    // default; a1/a2 assertion rules are unaffected.
    bool skip_guard_doubling = false;
};

// Doubles each source rule into the truth rule (2a) and the non-falsity rule
// (2b), with the trailing marker on (2b) iff the head is a DL-atom. The
// symbol table gains the A$d / N$A predicates.
void double_rules(const Program& src, DoubledProgram& out,
                  const TransformOptions& opts = {});

// Translates a reduced TBox plus ABox into the already doubled rule set
// (schemas a1..i3). Throws if a form-(4) axiom is present. The caller is
// responsible for the a-priori ontology consistency check.
void translate_ontology(const std::vector<NormalAxiom>& reduced, const Ontology& abox,
                        DoubledProgram& out);

class OntologyInconsistentError : public KbError {
public:
    OntologyInconsistentError(const std::string& witness)
        : KbError("ontology is inconsistent (witness individual: " + witness + ")"),
          witness(witness) {}
    std::string witness;
};

struct CompiledKB {
    NormalizedTBox normalized;
    ClassificationMaps maps;
    std::vector<NormalAxiom> reduced;
    DoubledProgram program; // P^d  U  P_O^d
};

// normalize -> classify -> consistency check -> reduce -> translate, unioned
// with the doubled user rules. Throws OntologyInconsistentError.
CompiledKB build_combined(const HybridKB& kb, const TransformOptions& opts = {});

} // namespace mknf
