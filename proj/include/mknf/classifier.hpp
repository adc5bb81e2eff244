#pragma once

#include "mknf/kb.hpp"

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// EL+ TBox normalization, completion-rule saturation producing the S and T
// mappings, TBox completion/reduction, subsumption lookup, and the
// individual-extended saturation used as instance oracle and ontology
// consistency check.

namespace mknf {

struct NormalizedTBox {
    std::vector<NormalAxiom> axioms;
    std::vector<PredId> bc;    // concept names occurring in axioms (incl. fresh)
    std::vector<PredId> roles; // role names occurring in axioms
    // fresh name -> textual origin of the subexpression it stands for
    std::vector<std::pair<PredId, std::string>> fresh;
};

// Splits nested expressions with fresh names so that every axiom matches one
// of the six normal shapes. Deterministic; linear in the input size.
NormalizedTBox normalize(const std::vector<TBoxAxiom>& tbox, SymbolTable& syms);

class ClassificationMaps {
public:
    // Membership tests accept kTopC / kBotC sentinels for top / bottom.
    bool s_has(PredId c, PredId d) const;
    bool s_has_bottom(PredId c) const { return s_has(c, kBotC); }
    bool t_has(PredId role, PredId c, PredId d) const;

    // Sorted exports for printing and tests. S members may contain kTopC/kBotC.
    std::vector<std::pair<PredId, std::vector<PredId>>> s_export() const;
    std::vector<std::pair<PredId, std::vector<std::pair<PredId, PredId>>>> t_export() const;

    bool known_concept(PredId c) const;
    uint64_t additions() const { return additions_; }

private:
    friend class Saturator;
    friend class InstanceGraph;

    static constexpr uint32_t kTopNode = 0;
    static constexpr uint32_t kBotMember = 0xffffffffu;

    uint32_t node_of(PredId c) const; // throws on unknown concept
    std::optional<uint32_t> try_node(PredId c) const;
    PredId member_pred(uint32_t m) const;

    std::unordered_map<PredId, uint32_t> concept_node_;
    std::unordered_map<ConstId, uint32_t> indiv_node_;
    std::vector<PredId> node_concept_;  // per node; knone for top / individuals
    std::vector<ConstId> node_indiv_;   // per node; knone unless individual node
    std::vector<std::vector<uint32_t>> s_;              // insertion order
    std::vector<std::unordered_set<uint32_t>> s_set_;
    std::unordered_map<PredId, uint32_t> role_index_;
    std::vector<PredId> role_pred_;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> t_; // per role
    std::vector<std::unordered_set<uint64_t>> t_set_;
    uint64_t additions_ = 0;
};

// Least fixpoint of the completion rules CR1-CR7 from the seeded maps.
ClassificationMaps classify(const NormalizedTBox& nt, const SymbolTable& syms);

// True iff d is in S(c) or c is unsatisfiable. Throws on unknown concepts
// (kTopC / kBotC are always known).
bool subsumes(const ClassificationMaps& maps, PredId c, PredId d);

// Adds the S- and T-derived axioms; trivial additions (C <= C, C <= top) are
// dropped; output is deduplicated.
std::vector<NormalAxiom> complete_tbox(const NormalizedTBox& nt,
                                       const ClassificationMaps& maps);

// Removes every form-(4) axiom from a completed TBox.
std::vector<NormalAxiom> reduce_tbox(const std::vector<NormalAxiom>& completed);

// Corollary shortcut: original axioms minus form (4) plus the S-derived
// inclusions.
std::vector<NormalAxiom> reduce_tbox(const NormalizedTBox& nt,
                                     const ClassificationMaps& maps);

// The completion maps extended with one node per individual, seeded from the
// ABox. Restricted to concept nodes it coincides with classify().
class InstanceGraph {
public:
    bool concept_instance(PredId c, ConstId a) const;
    bool role_instance(PredId role, ConstId a, ConstId b) const;
    std::optional<ConstId> inconsistent_witness() const; // smallest id
    const ClassificationMaps& maps() const { return maps_; }

private:
    friend InstanceGraph instance_saturate(const NormalizedTBox&, const Ontology&,
                                           const SymbolTable&);
    ClassificationMaps maps_;
    std::vector<ConstId> indivs_;
};

InstanceGraph instance_saturate(const NormalizedTBox& nt, const Ontology& abox,
                                const SymbolTable& syms);

struct ConsistencyResult {
    bool consistent = true;
    ConstId witness = knone;
};

ConsistencyResult check_ontology_consistency(const NormalizedTBox& nt,
                                             const Ontology& abox,
                                             const SymbolTable& syms);

std::string serialize_classification(const ClassificationMaps& maps,
                                     const SymbolTable& syms, bool structured = false);

} // namespace mknf
