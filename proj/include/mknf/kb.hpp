#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

// Shared data model for hybrid knowledge bases: interned symbols, rule
// programs, EL+ ontologies, grounding, known atoms, and DL-safety.

namespace mknf {

using PredId = uint32_t;
using ConstId = uint32_t;
using VarId = uint32_t;

inline constexpr uint32_t knone = 0xffffffffu;
// Sentinels for the top/bottom concept in normal-form axiom slots.
inline constexpr PredId kTopC = 0xfffffffeu;
inline constexpr PredId kBotC = 0xfffffffdu;

struct SourceLoc {
    int line = 0;
    int col = 0;
};

class KbError : public std::runtime_error {
public:
    explicit KbError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class PredKind : uint8_t { Plain, Concept, Role };

// How a predicate came to exist. Doubled/Marker predicates are introduced by
// the program transformation and carry a link back to their base predicate.
enum class PredRole : uint8_t { User, Doubled, Marker, Aux };

struct PredEntry {
    std::string name;
    int arity = -1;
    PredKind kind = PredKind::Plain;
    bool dl = false; // occurs in the ontology
    PredRole role = PredRole::User;
    PredId base = knone;
};

class SymbolTable {
public:
    PredId intern_pred(std::string_view name, int arity, PredKind kind);
    std::optional<PredId> find_pred(std::string_view name) const;
    const PredEntry& pred(PredId id) const { return preds_.at(id); }
    PredEntry& pred_mut(PredId id) { return preds_.at(id); }
    size_t pred_count() const { return preds_.size(); }

    ConstId intern_const(std::string_view name);
    std::optional<ConstId> find_const(std::string_view name) const;
    const std::string& const_name(ConstId id) const { return consts_.at(id); }
    size_t const_count() const { return consts_.size(); }

    VarId intern_var(std::string_view name);
    const std::string& var_name(VarId id) const { return vars_.at(id); }
    size_t var_count() const { return vars_.size(); }

private:
    std::vector<PredEntry> preds_;
    std::unordered_map<std::string, PredId> pred_ids_;
    std::vector<std::string> consts_;
    std::unordered_map<std::string, ConstId> const_ids_;
    std::vector<std::string> vars_;
    std::unordered_map<std::string, VarId> var_ids_;
};

struct Term {
    bool var = false;
    uint32_t id = knone;
    friend bool operator==(const Term&, const Term&) = default;
};

inline Term mk_var(VarId v) { return Term{true, v}; }
inline Term mk_const(ConstId c) { return Term{false, c}; }

struct Atom {
    PredId pred = knone;
    std::vector<Term> args;
    bool ground() const;
    friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
    Atom atom;
    bool positive = true;
    friend bool operator==(const Literal&, const Literal&) = default;
};

struct Rule {
    Atom head;
    std::vector<Literal> body; // source order, positives and negatives mixed
    SourceLoc loc{};
    bool ground() const;
    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.body == b.body;
    }
};

using Program = std::vector<Rule>;

struct AtomHash {
    size_t operator()(const Atom& a) const;
};

// Total order on ground atoms / atoms, by interned ids. Used for
// deterministic set outputs.
bool atom_less(const Atom& a, const Atom& b);

// ---------------------------------------------------------------------------
// EL+ concept expressions. Canonical form is enforced by the factories:
// conjunctions are flattened, sorted, deduplicated and have >= 2 children;
// `bot` absorbs any enclosing expression; `top` conjuncts are dropped.

struct ConceptExpr {
    enum class Kind : uint8_t { Top, Bottom, Name, Conj, Exists };
    Kind kind = Kind::Top;
    PredId name = knone; // Name
    PredId role = knone; // Exists
    std::vector<ConceptExpr> kids; // Conj children; Exists filler at [0]

    static ConceptExpr top();
    static ConceptExpr bottom();
    static ConceptExpr named(PredId c);
    static ConceptExpr conj(std::vector<ConceptExpr> kids);
    static ConceptExpr exists(PredId role, ConceptExpr filler);

    bool atomic() const { return kind == Kind::Top || kind == Kind::Name; }
};

int compare(const ConceptExpr& a, const ConceptExpr& b);
bool operator==(const ConceptExpr& a, const ConceptExpr& b);

struct TBoxAxiom {
    enum class Kind : uint8_t { Gci, Ri };
    Kind kind = Kind::Gci;
    ConceptExpr lhs, rhs;        // Gci
    std::vector<PredId> chain;   // Ri: chain (length >= 1)
    PredId super = knone;        // Ri
    SourceLoc loc{};

    static TBoxAxiom gci(ConceptExpr l, ConceptExpr r);
    static TBoxAxiom ri(std::vector<PredId> chain, PredId super);
};

bool operator==(const TBoxAxiom& a, const TBoxAxiom& b);

struct ConceptAssertion {
    PredId concept_ = knone;
    ConstId indiv = knone;
    friend bool operator==(const ConceptAssertion&, const ConceptAssertion&) = default;
};

struct RoleAssertion {
    PredId role = knone;
    ConstId from = knone, to = knone;
    friend bool operator==(const RoleAssertion&, const RoleAssertion&) = default;
};

struct Ontology {
    std::vector<TBoxAxiom> tbox;
    std::vector<ConceptAssertion> concept_asserts;
    std::vector<RoleAssertion> role_asserts;
    bool empty() const {
        return tbox.empty() && concept_asserts.empty() && role_asserts.empty();
    }
};

struct HybridKB {
    SymbolTable symbols;
    Ontology ontology;
    Program program;

    // Constant universe for grounding: every individual occurring anywhere in
    // the KB (ontology or rules), sorted.
    std::vector<ConstId> individuals() const;
};

// ---------------------------------------------------------------------------
// Normal-form axioms. The six shapes:
//   F1:  c1 <= rhs          F2:  c1 and c2 <= rhs      F3:  exists r1.c1 <= rhs
//   F4:  c1 <= exists r1.rhs
//   RI1: r1 <= rsup         RI2: r1 o r2 <= rsup
// Concept slots hold concept PredIds or kTopC; rhs may additionally be kBotC.

struct NormalAxiom {
    enum class Kind : uint8_t { F1, F2, F3, F4, RI1, RI2 };
    Kind kind = Kind::F1;
    PredId c1 = knone, c2 = knone, rhs = knone;
    PredId r1 = knone, r2 = knone, rsup = knone;

    static NormalAxiom f1(PredId c1, PredId rhs);
    static NormalAxiom f2(PredId c1, PredId c2, PredId rhs);
    static NormalAxiom f3(PredId r, PredId c1, PredId rhs);
    static NormalAxiom f4(PredId c1, PredId r, PredId rhs);
    static NormalAxiom ri1(PredId r, PredId rsup);
    static NormalAxiom ri2(PredId r1, PredId r2, PredId rsup);

    friend bool operator==(const NormalAxiom&, const NormalAxiom&) = default;
};

bool normal_axiom_less(const NormalAxiom& a, const NormalAxiom& b);

// ---------------------------------------------------------------------------
// Operations

// Instantiates every rule with every total mapping of its variables to the
// universe. A rule with variables and an empty universe contributes nothing.
Program ground_instantiation(const Program& program,
                             const std::vector<ConstId>& universe,
                             size_t rule_cap = 2'000'000);
Program ground_instantiation(const HybridKB& kb, size_t rule_cap = 2'000'000);

// KA of a ground program: every atom occurring as a head, a positive body
// literal, or under default negation. Sorted, unique. Throws on non-ground
// input.
std::vector<Atom> known_atoms(const Program& ground);

// Variables of the rule that do not occur in any positive non-DL body atom.
std::vector<VarId> dl_safety_violations(const Rule& rule, const SymbolTable& syms);

std::string to_string(const Term& t, const SymbolTable& syms);
std::string to_string(const Atom& a, const SymbolTable& syms);
std::string to_string(const Literal& l, const SymbolTable& syms);
std::string to_string(const Rule& r, const SymbolTable& syms);
std::string to_string(const ConceptExpr& c, const SymbolTable& syms);
std::string to_string(const TBoxAxiom& ax, const SymbolTable& syms);
std::string to_string(const NormalAxiom& ax, const SymbolTable& syms);

} // namespace mknf
