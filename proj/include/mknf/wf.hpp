#pragma once

#include "mknf/parser.hpp"
#include "mknf/transform.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Bottom-up reference semantics: the T/Gamma operators, the alternating
// fixpoint over original and doubled knowledge bases, the MKNF consistency
// test, model extraction, and the brute-force unfounded-set checker.

namespace mknf {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    void set_all() {
        for (auto& w : w_) w = ~uint64_t(0);
        trim();
    }
    size_t count() const;
    Bitset& operator|=(const Bitset& o);
    Bitset& operator&=(const Bitset& o);
    Bitset& subtract(const Bitset& o);
    bool subset_of(const Bitset& o) const;
    bool operator==(const Bitset& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool proper_subset_of(const Bitset& o) const {
        return subset_of(o) && !(*this == o);
    }
    std::vector<uint32_t> members() const;

private:
    void trim() {
        if (n_ % 64) w_.back() &= (uint64_t(1) << (n_ % 64)) - 1;
    }
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

class AtomStore {
public:
    uint32_t intern(const Atom& a);
    std::optional<uint32_t> find(const Atom& a) const;
    const Atom& at(uint32_t id) const { return atoms_[id]; }
    size_t size() const { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
    std::unordered_map<Atom, uint32_t, AtomHash> ids_;
};

struct GroundRule {
    uint32_t head = 0;
    std::vector<uint32_t> pos, neg;
    // Set when the rule carries a coherence marker `not N$H(t)`: the original
    // (undoubled) head atom used by the classical-negation drop test.
    bool marked = false;
    Atom coh_atom{};
};

struct GroundProgram {
    AtomStore atoms;
    std::vector<GroundRule> rules;
    Bitset ka; // the atom universe (every interned atom)

    static GroundProgram build(const Program& ground, const SymbolTable& syms);
    std::string atom_name(uint32_t id, const SymbolTable& syms) const {
        return to_string(atoms.at(id), syms);
    }
};

// One ontology side of the objective-knowledge relation OB_{O,S}: answers
// batch entailment, inconsistency, and classical-negation queries over the
// atoms of a ground program. Backed by saturation of the reduced TBox over
// named individuals.
class DlContext {
public:
    // predmap translates the axiom/assertion predicate space into the
    // predicate space used by the program atoms (identity for the original
    // side, original->doubled for the O^d side).
    DlContext(const std::vector<NormalAxiom>& reduced, const Ontology& abox,
              const SymbolTable& syms,
              std::function<PredId(PredId)> predmap = nullptr);

    void bind(const GroundProgram& gp, const SymbolTable& syms);

    // Atoms of the bound program entailed by OB_{O,S}; only atoms whose
    // predicate belongs to this side are reported. No flood on inconsistency;
    // callers combine with inconsistent().
    Bitset dl_entailed(const Bitset& s) const;
    bool inconsistent(const Bitset& s) const;
    // OB_{O,S} |= not H, computed as inconsistency of O u S u {H}.
    bool neg_entails(const Bitset& s, const Atom& h) const;
    bool my_dl_pred(PredId p) const { return concept_ids_.count(p) || role_ids_.count(p); }

private:
    struct Sat {
        std::vector<Bitset> conc;                       // per concept: indiv set
        std::vector<std::vector<std::pair<uint32_t, uint32_t>>> role;
        bool bot = false;
    };
    Sat saturate(const Bitset& s, const Atom* extra) const;

    uint32_t cid(PredId p) const { return concept_ids_.at(p); }
    uint32_t rid(PredId p) const { return role_ids_.at(p); }

    std::vector<NormalAxiom> axioms_; // predmapped, reduced
    std::unordered_map<PredId, uint32_t> concept_ids_, role_ids_;
    std::vector<PredId> concepts_, roles_;
    std::unordered_map<ConstId, uint32_t> indiv_ids_;
    std::vector<ConstId> indivs_;
    std::vector<std::pair<uint32_t, uint32_t>> abox_conc_;            // (cid, iid)
    std::vector<std::array<uint32_t, 3>> abox_role_;                  // (rid, i, j)
    // bound program atoms of this side: (atom id, cid/rid, indiv ids)
    std::vector<std::array<uint32_t, 3>> prog_conc_; // atom, cid, iid
    std::vector<std::array<uint32_t, 4>> prog_role_; // atom, rid, i, j
    size_t prog_size_ = 0;
};

enum class Variant : uint8_t { Original, Doubled };

struct FixpointTrace {
    std::vector<Bitset> p_seq, n_seq; // P_0..P_k / N_0..N_k
    Bitset p_omega, n_omega;
    // per-step provenance: rules fired and ontology entailments, by step
    std::vector<std::vector<uint32_t>> fired_rules;
    std::vector<std::vector<uint32_t>> dl_entailed;
};

// The reference evaluation engine for one ground (possibly doubled) KB.
// In the Original variant the coherence drop applies to every rule head;
// in the Doubled variant only to marked rules. Null contexts give the plain
// WFS of the rule program.
class BottomUp {
public:
    BottomUp(const GroundProgram& gp, const SymbolTable& syms, Variant variant,
             const DlContext* orig_ctx = nullptr, const DlContext* dbl_ctx = nullptr,
             Bitset ka_original = {});

    // lfp(T) of the positive program obtained by the transform w.r.t. S.
    Bitset gamma(const Bitset& s, bool coherent) const;
    Bitset lfp_positive() const; // no transform: bodies' negatives must be empty

    FixpointTrace alternating(bool record_provenance = false) const;

    struct Verdict {
        bool consistent = true;
        std::string reason;
    };
    // Theorem-style test over the trace fixpoints plus the a-priori ontology
    // consistency result.
    Verdict consistency_check(const FixpointTrace& t, bool ontology_consistent) const;

    const GroundProgram& program() const { return gp_; }
    const Bitset& ka_original() const { return ka_original_; }

private:
    Bitset d_operator(const Bitset& s) const;
    bool drop_by_coherence(const GroundRule& r, const Bitset& s, bool coherent) const;
    Bitset gamma_full(const Bitset& s, bool coherent, std::vector<uint32_t>* fired,
                      std::vector<uint32_t>* dl) const;

    const GroundProgram& gp_;
    const SymbolTable& syms_;
    Variant variant_;
    const DlContext* orig_ctx_;
    const DlContext* dbl_ctx_;
    Bitset ka_original_; // KA(K) slice inside KA(K^d); full ka for Original
    Bitset markers_;     // marker atoms, excluded from the doubled-side flood
};

struct ThreeValuedModel {
    std::vector<ModelEntry> entries;        // original-predicate atoms only
    std::vector<Atom> inconsistency_flags;  // true while the doubled atom is false
    bool mknf_inconsistent = false;
};

// Reads off the model from a doubled-program trace: A true iff in P, A false
// iff A$d dropped out of N, undefined otherwise.
ThreeValuedModel extract_model(const FixpointTrace& t, const GroundProgram& gp,
                               const DoubledProgram& dp);

// Truth of one ground atom under the plain WFS reading of the trace.
Truth trace_truth(const FixpointTrace& t, uint32_t atom);

// Brute-force unfounded-set machinery (Definition-level, tiny instances).
struct UnfoundedParams {
    const GroundProgram& gp;
    const SymbolTable& syms;
    Variant variant = Variant::Doubled;
    const DlContext* orig_ctx = nullptr;
    const DlContext* dbl_ctx = nullptr;
    Bitset ka_original{}; // for (Uii) enumeration on the doubled variant
    size_t cap = 14;
};

bool is_unfounded_set(const UnfoundedParams& p, const Bitset& u, const Bitset& t,
                      const Bitset& f);
Bitset greatest_unfounded_set(const UnfoundedParams& p, const Bitset& t, const Bitset& f);

} // namespace mknf
