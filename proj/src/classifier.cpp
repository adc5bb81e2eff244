#include "mknf/classifier.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace mknf {

// --------------------------------------------------------------------------
// Normalization

namespace {

class Normalizer {
public:
    explicit Normalizer(SymbolTable& syms) : syms_(syms) {}

    NormalizedTBox run(const std::vector<TBoxAxiom>& tbox) {
        for (const TBoxAxiom& ax : tbox) {
            if (ax.kind == TBoxAxiom::Kind::Gci)
                gci(ax.lhs, ax.rhs);
            else
                ri(ax.chain, ax.super);
        }
        NormalizedTBox nt;
        nt.axioms = dedup(std::move(out_));
        nt.fresh = std::move(fresh_);
        std::set<PredId> bc, roles;
        auto slot = [&](PredId c) {
            if (c != kTopC && c != kBotC && c != knone) bc.insert(c);
        };
        for (const NormalAxiom& ax : nt.axioms) {
            slot(ax.c1);
            slot(ax.c2);
            slot(ax.rhs);
            for (PredId r : {ax.r1, ax.r2, ax.rsup})
                if (r != knone) roles.insert(r);
        }
        nt.bc.assign(bc.begin(), bc.end());
        nt.roles.assign(roles.begin(), roles.end());
        return nt;
    }

private:
    static std::vector<NormalAxiom> dedup(std::vector<NormalAxiom> in) {
        std::vector<NormalAxiom> out;
        std::set<std::array<uint64_t, 7>> seen;
        for (NormalAxiom& ax : in) {
            std::array<uint64_t, 7> key{uint64_t(ax.kind), ax.c1, ax.c2, ax.rhs,
                                        ax.r1,             ax.r2, ax.rsup};
            if (seen.insert(key).second) out.push_back(ax);
        }
        return out;
    }

    PredId fresh_concept(const ConceptExpr& origin) {
        std::string name;
        do {
            name = "_n" + std::to_string(++counter_);
        } while (syms_.find_pred(name));
        PredId id = syms_.intern_pred(name, 1, PredKind::Concept);
        syms_.pred_mut(id).role = PredRole::Aux;
        syms_.pred_mut(id).dl = true;
        fresh_.emplace_back(id, to_string(origin, syms_));
        return id;
    }

    PredId fresh_role() {
        std::string name;
        do {
            name = "_r" + std::to_string(++counter_);
        } while (syms_.find_pred(name));
        PredId id = syms_.intern_pred(name, 2, PredKind::Role);
        syms_.pred_mut(id).role = PredRole::Aux;
        syms_.pred_mut(id).dl = true;
        fresh_.emplace_back(id, "role chain");
        return id;
    }

    static PredId slot_of(const ConceptExpr& e) {
        return e.kind == ConceptExpr::Kind::Top ? kTopC : e.name;
    }

    // Left-hand-side subexpression -> atomic slot, emitting expr <= fresh.
    PredId atomize_lhs(const ConceptExpr& e) {
        if (e.atomic()) return slot_of(e);
        PredId n = fresh_concept(e);
        gci(e, ConceptExpr::named(n));
        return n;
    }

    void gci(const ConceptExpr& lhs, const ConceptExpr& rhs) {
        using K = ConceptExpr::Kind;
        if (lhs.kind == K::Bottom || rhs.kind == K::Top) return; // trivially true
        if (rhs.kind == K::Conj) {
            for (const ConceptExpr& kid : rhs.kids) gci(lhs, kid);
            return;
        }
        if (rhs.kind == K::Exists && !rhs.kids[0].atomic()) {
            PredId n = fresh_concept(rhs.kids[0]);
            gci(lhs, ConceptExpr::exists(rhs.role, ConceptExpr::named(n)));
            gci(ConceptExpr::named(n), rhs.kids[0]);
            return;
        }
        // rhs is now Name, Bottom, or Exists with atomic filler
        if (lhs.atomic()) {
            emit_atomic(slot_of(lhs), rhs);
            return;
        }
        if (lhs.kind == K::Conj) {
            std::vector<PredId> names;
            names.reserve(lhs.kids.size());
            for (const ConceptExpr& kid : lhs.kids) names.push_back(atomize_lhs(kid));
            // fold pairwise left-to-right
            if (rhs.kind == K::Exists) {
                PredId acc = fold(names, knone);
                emit_atomic(acc, rhs);
            } else {
                PredId target = rhs.kind == K::Bottom ? kBotC : rhs.name;
                PredId acc = names[0];
                for (size_t i = 1; i + 1 < names.size(); ++i) {
                    PredId next = fresh_concept(lhs);
                    out_.push_back(NormalAxiom::f2(acc, names[i], next));
                    acc = next;
                }
                out_.push_back(NormalAxiom::f2(acc, names.back(), target));
            }
            return;
        }
        // lhs is Exists
        PredId filler = lhs.kids[0].atomic() ? slot_of(lhs.kids[0])
                                             : atomize_lhs(lhs.kids[0]);
        if (rhs.kind == K::Exists) {
            PredId mid = fresh_concept(lhs);
            out_.push_back(NormalAxiom::f3(lhs.role, filler, mid));
            emit_atomic(mid, rhs);
        } else {
            PredId target = rhs.kind == K::Bottom ? kBotC : rhs.name;
            out_.push_back(NormalAxiom::f3(lhs.role, filler, target));
        }
    }

    // lhs is an atomic slot, rhs is Name, Bottom or Exists(atomic filler)
    void emit_atomic(PredId lhs, const ConceptExpr& rhs) {
        if (rhs.kind == ConceptExpr::Kind::Exists) {
            out_.push_back(NormalAxiom::f4(lhs, rhs.role, slot_of(rhs.kids[0])));
        } else if (rhs.kind == ConceptExpr::Kind::Bottom) {
            out_.push_back(NormalAxiom::f1(lhs, kBotC));
        } else {
            if (lhs != rhs.name) out_.push_back(NormalAxiom::f1(lhs, rhs.name));
        }
    }

    // folds a >= 1 element conjunction of names into one name
    PredId fold(const std::vector<PredId>& names, PredId) {
        PredId acc = names[0];
        for (size_t i = 1; i < names.size(); ++i) {
            PredId next = fresh_concept(ConceptExpr::named(names[i]));
            out_.push_back(NormalAxiom::f2(acc, names[i], next));
            acc = next;
        }
        return acc;
    }

    void ri(const std::vector<PredId>& chain, PredId super) {
        if (chain.size() == 1) {
            if (chain[0] != super) out_.push_back(NormalAxiom::ri1(chain[0], super));
            return;
        }
        if (chain.size() == 2) {
            out_.push_back(NormalAxiom::ri2(chain[0], chain[1], super));
            return;
        }
        // left-associative split: r1 o r2 <= n1, n1 o r3 <= n2, ...
        PredId acc = fresh_role();
        out_.push_back(NormalAxiom::ri2(chain[0], chain[1], acc));
        for (size_t i = 2; i + 1 < chain.size(); ++i) {
            PredId next = fresh_role();
            out_.push_back(NormalAxiom::ri2(acc, chain[i], next));
            acc = next;
        }
        out_.push_back(NormalAxiom::ri2(acc, chain.back(), super));
    }

    SymbolTable& syms_;
    std::vector<NormalAxiom> out_;
    std::vector<std::pair<PredId, std::string>> fresh_;
    int counter_ = 0;
};

} // namespace

NormalizedTBox normalize(const std::vector<TBoxAxiom>& tbox, SymbolTable& syms) {
    return Normalizer(syms).run(tbox);
}

// --------------------------------------------------------------------------
// ClassificationMaps

uint32_t ClassificationMaps::node_of(PredId c) const {
    if (c == kTopC) return kTopNode;
    auto it = concept_node_.find(c);
    if (it == concept_node_.end()) throw KbError("unknown concept id");
    return it->second;
}

std::optional<uint32_t> ClassificationMaps::try_node(PredId c) const {
    if (c == kTopC) return kTopNode;
    auto it = concept_node_.find(c);
    if (it == concept_node_.end()) return std::nullopt;
    return it->second;
}

PredId ClassificationMaps::member_pred(uint32_t m) const {
    if (m == kBotMember) return kBotC;
    if (m == kTopNode) return kTopC;
    return node_concept_[m];
}

bool ClassificationMaps::known_concept(PredId c) const {
    return c == kTopC || c == kBotC || concept_node_.count(c) != 0;
}

bool ClassificationMaps::s_has(PredId c, PredId d) const {
    uint32_t n = node_of(c);
    uint32_t m = d == kBotC ? kBotMember : node_of(d);
    return s_set_[n].count(m) != 0;
}

bool ClassificationMaps::t_has(PredId role, PredId c, PredId d) const {
    auto it = role_index_.find(role);
    if (it == role_index_.end()) return false;
    auto cn = try_node(c), dn = try_node(d);
    if (!cn || !dn) return false;
    return t_set_[it->second].count((uint64_t(*cn) << 32) | *dn) != 0;
}

std::vector<std::pair<PredId, std::vector<PredId>>> ClassificationMaps::s_export() const {
    std::vector<std::pair<PredId, std::vector<PredId>>> out;
    for (uint32_t n = 0; n < node_concept_.size(); ++n) {
        if (n != kTopNode && node_concept_[n] == knone) continue; // individual node
        std::vector<PredId> members;
        for (uint32_t m : s_[n]) members.push_back(member_pred(m));
        std::sort(members.begin(), members.end());
        out.emplace_back(n == kTopNode ? kTopC : node_concept_[n], std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<PredId, std::vector<std::pair<PredId, PredId>>>>
ClassificationMaps::t_export() const {
    std::vector<std::pair<PredId, std::vector<std::pair<PredId, PredId>>>> out;
    for (size_t r = 0; r < role_pred_.size(); ++r) {
        std::vector<std::pair<PredId, PredId>> pairs;
        for (auto [c, d] : t_[r]) {
            if ((c != kTopNode && node_concept_[c] == knone) ||
                (d != kTopNode && node_concept_[d] == knone))
                continue; // skip individual nodes in the concept-level export
            pairs.emplace_back(member_pred(c), member_pred(d));
        }
        std::sort(pairs.begin(), pairs.end());
        out.emplace_back(role_pred_[r], std::move(pairs));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --------------------------------------------------------------------------
// Saturation (CR1-CR7), worklist driven. Used for both pure classification
// and the individual-extended instance graph.

class Saturator {
public:
    explicit Saturator(const NormalizedTBox& nt) : nt_(nt) {
        maps_.node_concept_.push_back(knone); // top node
        maps_.node_indiv_.push_back(knone);
        maps_.s_.emplace_back();
        maps_.s_set_.emplace_back();
        for (PredId c : nt.bc) concept_node(c);
        for (PredId r : nt.roles) role_of(r);
        index_axioms();
    }

    void add_individual(ConstId a) {
        node_for_indiv(a);
    }

    void seed_assertion(PredId c, ConstId a) {
        add_s(node_for_indiv(a), member_of(c));
    }

    void seed_role_assertion(PredId r, ConstId a, ConstId b) {
        add_t(role_of(r), node_for_indiv(a), node_for_indiv(b));
    }

    void ensure_concept(PredId c) { concept_node(c); }
    void ensure_role(PredId r) { role_of(r); }

    ClassificationMaps finish() {
        // seed S(C) = {C, top} for every node, then close under CR1-CR7
        for (uint32_t n = 0; n < maps_.node_concept_.size(); ++n) {
            add_s(n, n == ClassificationMaps::kTopNode || maps_.node_concept_[n] != knone
                         ? n
                         : ClassificationMaps::kTopNode);
            add_s(n, ClassificationMaps::kTopNode);
        }
        drain();
        return std::move(maps_);
    }

private:
    using Maps = ClassificationMaps;

    uint32_t concept_node(PredId c) {
        if (c == kTopC) return Maps::kTopNode;
        auto it = maps_.concept_node_.find(c);
        if (it != maps_.concept_node_.end()) return it->second;
        uint32_t n = static_cast<uint32_t>(maps_.node_concept_.size());
        maps_.concept_node_.emplace(c, n);
        maps_.node_concept_.push_back(c);
        maps_.node_indiv_.push_back(knone);
        maps_.s_.emplace_back();
        maps_.s_set_.emplace_back();
        return n;
    }

    uint32_t node_for_indiv(ConstId a) {
        auto it = maps_.indiv_node_.find(a);
        if (it != maps_.indiv_node_.end()) return it->second;
        uint32_t n = static_cast<uint32_t>(maps_.node_concept_.size());
        maps_.indiv_node_.emplace(a, n);
        maps_.node_concept_.push_back(knone);
        maps_.node_indiv_.push_back(a);
        maps_.s_.emplace_back();
        maps_.s_set_.emplace_back();
        return n;
    }

    uint32_t member_of(PredId c) {
        return c == kBotC ? Maps::kBotMember : concept_node(c);
    }

    uint32_t role_of(PredId r) {
        auto it = maps_.role_index_.find(r);
        if (it != maps_.role_index_.end()) return it->second;
        uint32_t idx = static_cast<uint32_t>(maps_.role_pred_.size());
        maps_.role_index_.emplace(r, idx);
        maps_.role_pred_.push_back(r);
        maps_.t_.emplace_back();
        maps_.t_set_.emplace_back();
        t_fwd_.emplace_back();
        return idx;
    }

    void index_axioms() {
        for (const NormalAxiom& ax : nt_.axioms) {
            switch (ax.kind) {
            case NormalAxiom::Kind::F1:
                f1_[member_of(ax.c1)].push_back(member_of(ax.rhs));
                break;
            case NormalAxiom::Kind::F2: {
                uint32_t a = member_of(ax.c1), b = member_of(ax.c2),
                         d = member_of(ax.rhs);
                f2_[a].emplace_back(b, d);
                if (a != b) f2_[b].emplace_back(a, d);
                break;
            }
            case NormalAxiom::Kind::F3: {
                uint32_t r = role_of(ax.r1), c = member_of(ax.c1), d = member_of(ax.rhs);
                f3_by_role_filler_[(uint64_t(r) << 32) | c].push_back(d);
                f3_by_filler_[c].emplace_back(r, d);
                break;
            }
            case NormalAxiom::Kind::F4:
                f4_[member_of(ax.c1)].emplace_back(role_of(ax.r1), member_of(ax.rhs));
                break;
            case NormalAxiom::Kind::RI1:
                ri1_[role_of(ax.r1)].push_back(role_of(ax.rsup));
                break;
            case NormalAxiom::Kind::RI2: {
                uint32_t r1 = role_of(ax.r1), r2 = role_of(ax.r2),
                         rs = role_of(ax.rsup);
                ri2_by_first_[r1].emplace_back(r2, rs);
                ri2_by_second_[r2].emplace_back(r1, rs);
                break;
            }
            }
        }
    }

    void add_s(uint32_t node, uint32_t member) {
        if (!maps_.s_set_[node].insert(member).second) return;
        maps_.s_[node].push_back(member);
        ++maps_.additions_;
        work_.push_back(Event{true, node, member, 0});
    }

    void add_t(uint32_t role, uint32_t c, uint32_t d) {
        if (!maps_.t_set_[role].insert((uint64_t(c) << 32) | d).second) return;
        maps_.t_[role].emplace_back(c, d);
        t_fwd_[role][c].push_back(d);
        t_in_[d].emplace_back(role, c);
        ++maps_.additions_;
        work_.push_back(Event{false, c, d, role});
    }

    struct Event {
        bool is_s;
        uint32_t a, b; // S: node, member ; T: c, d
        uint32_t role;
    };

    void drain() {
        while (!work_.empty()) {
            Event ev = work_.back();
            work_.pop_back();
            if (ev.is_s)
                on_s(ev.a, ev.b);
            else
                on_t(ev.role, ev.a, ev.b);
        }
    }

    // X joined S(C)
    void on_s(uint32_t c, uint32_t x) {
        if (x == Maps::kBotMember) {
            // CR5: anything pointing at c via T also becomes unsatisfiable
            auto it = t_in_.find(c);
            if (it != t_in_.end())
                for (auto [role, b] : it->second) {
                    (void)role;
                    add_s(b, Maps::kBotMember);
                }
            return;
        }
        if (auto it = f1_.find(x); it != f1_.end()) // CR1
            for (uint32_t d : it->second) add_s(c, d);
        if (auto it = f2_.find(x); it != f2_.end()) // CR2
            for (auto [other, d] : it->second)
                if (maps_.s_set_[c].count(other)) add_s(c, d);
        if (auto it = f4_.find(x); it != f4_.end()) // CR3
            for (auto [role, d] : it->second) add_t(role, c, d);
        // CR4 with x as the new member of S(D): D is `c` here
        if (auto it = f3_by_filler_.find(x); it != f3_by_filler_.end())
            for (auto [role, e] : it->second)
                if (auto in = t_in_.find(c); in != t_in_.end())
                    for (auto [r2, b] : in->second)
                        if (r2 == role) add_s(b, e);
    }

    // (c,d) joined T(role)
    void on_t(uint32_t role, uint32_t c, uint32_t d) {
        // CR4: existing members of S(d); copy since add_s may grow s_[d]
        for (uint32_t dp : std::vector<uint32_t>(maps_.s_[d])) {
            if (dp == Maps::kBotMember) continue;
            auto it = f3_by_role_filler_.find((uint64_t(role) << 32) | dp);
            if (it != f3_by_role_filler_.end())
                for (uint32_t e : it->second) add_s(c, e);
        }
        // CR5
        if (maps_.s_set_[d].count(Maps::kBotMember)) add_s(c, Maps::kBotMember);
        // CR6
        if (auto it = ri1_.find(role); it != ri1_.end())
            for (uint32_t sup : it->second) add_t(sup, c, d);
        // CR7 with (c,d) as the first edge
        if (auto it = ri2_by_first_.find(role); it != ri2_by_first_.end())
            for (auto [r2, rs] : it->second)
                if (auto f = t_fwd_[r2].find(d); f != t_fwd_[r2].end())
                    for (uint32_t e : std::vector<uint32_t>(f->second))
                        add_t(rs, c, e);
        // CR7 with (c,d) as the second edge
        if (auto it = ri2_by_second_.find(role); it != ri2_by_second_.end())
            for (auto [r1, rs] : it->second)
                if (auto in = t_in_.find(c); in != t_in_.end())
                    for (auto [rr, b] : std::vector<std::pair<uint32_t, uint32_t>>(in->second))
                        if (rr == r1) add_t(rs, b, d);
    }

    const NormalizedTBox& nt_;
    ClassificationMaps maps_;
    std::vector<Event> work_;

    std::unordered_map<uint32_t, std::vector<uint32_t>> f1_;
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> f2_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> f3_by_role_filler_;
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> f3_by_filler_;
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> f4_;
    std::unordered_map<uint32_t, std::vector<uint32_t>> ri1_;
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> ri2_by_first_;
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> ri2_by_second_;
    std::vector<std::unordered_map<uint32_t, std::vector<uint32_t>>> t_fwd_; // per role: c -> ds
    std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> t_in_; // d -> (role,c)
};

ClassificationMaps classify(const NormalizedTBox& nt, const SymbolTable&) {
    Saturator sat(nt);
    return sat.finish();
}

bool subsumes(const ClassificationMaps& maps, PredId c, PredId d) {
    if (c == kBotC) return true; // unsatisfiable concept is subsumed by everything
    if (d == kTopC) return true;
    if (!maps.known_concept(c) || !maps.known_concept(d))
        throw KbError("subsumes: unknown concept id");
    if (maps.s_has_bottom(c)) return true;
    if (c == d) return true;
    if (d == kBotC) return false;
    return maps.s_has(c, d);
}

std::vector<NormalAxiom> complete_tbox(const NormalizedTBox& nt,
                                       const ClassificationMaps& maps) {
    std::vector<NormalAxiom> out = nt.axioms;
    for (const auto& [c, members] : maps.s_export()) {
        for (PredId d : members) {
            if (d == c || d == kTopC) continue;
            out.push_back(NormalAxiom::f1(c, d));
        }
    }
    for (const auto& [role, pairs] : maps.t_export())
        for (auto [c, d] : pairs) out.push_back(NormalAxiom::f4(c, role, d));
    std::sort(out.begin(), out.end(), normal_axiom_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NormalAxiom> reduce_tbox(const std::vector<NormalAxiom>& completed) {
    std::vector<NormalAxiom> out;
    for (const NormalAxiom& ax : completed)
        if (ax.kind != NormalAxiom::Kind::F4) out.push_back(ax);
    return out;
}

std::vector<NormalAxiom> reduce_tbox(const NormalizedTBox& nt,
                                     const ClassificationMaps& maps) {
    std::vector<NormalAxiom> out;
    for (const NormalAxiom& ax : nt.axioms)
        if (ax.kind != NormalAxiom::Kind::F4) out.push_back(ax);
    for (const auto& [c, members] : maps.s_export())
        for (PredId d : members) {
            if (d == c || d == kTopC) continue;
            out.push_back(NormalAxiom::f1(c, d));
        }
    std::sort(out.begin(), out.end(), normal_axiom_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --------------------------------------------------------------------------
// Instance graph

bool InstanceGraph::concept_instance(PredId c, ConstId a) const {
    auto it = maps_.indiv_node_.find(a);
    if (it == maps_.indiv_node_.end()) return false;
    auto cn = maps_.try_node(c);
    if (!cn) return false;
    return maps_.s_set_[it->second].count(*cn) != 0;
}

bool InstanceGraph::role_instance(PredId role, ConstId a, ConstId b) const {
    auto an = maps_.indiv_node_.find(a);
    auto bn = maps_.indiv_node_.find(b);
    if (an == maps_.indiv_node_.end() || bn == maps_.indiv_node_.end()) return false;
    auto it = maps_.role_index_.find(role);
    if (it == maps_.role_index_.end()) return false;
    return maps_.t_set_[it->second].count((uint64_t(an->second) << 32) | bn->second) != 0;
}

std::optional<ConstId> InstanceGraph::inconsistent_witness() const {
    std::optional<ConstId> best;
    for (ConstId a : indivs_) {
        auto it = maps_.indiv_node_.find(a);
        if (it != maps_.indiv_node_.end() &&
            maps_.s_set_[it->second].count(ClassificationMaps::kBotMember)) {
            if (!best || a < *best) best = a;
        }
    }
    return best;
}

InstanceGraph instance_saturate(const NormalizedTBox& nt, const Ontology& abox,
                                const SymbolTable&) {
    Saturator sat(nt);
    std::set<ConstId> indivs;
    for (const ConceptAssertion& ca : abox.concept_asserts) {
        sat.ensure_concept(ca.concept_);
        sat.add_individual(ca.indiv);
        indivs.insert(ca.indiv);
    }
    for (const RoleAssertion& ra : abox.role_asserts) {
        sat.ensure_role(ra.role);
        sat.add_individual(ra.from);
        sat.add_individual(ra.to);
        indivs.insert(ra.from);
        indivs.insert(ra.to);
    }
    for (const ConceptAssertion& ca : abox.concept_asserts)
        sat.seed_assertion(ca.concept_, ca.indiv);
    for (const RoleAssertion& ra : abox.role_asserts)
        sat.seed_role_assertion(ra.role, ra.from, ra.to);

    InstanceGraph g;
    g.maps_ = sat.finish();
    g.indivs_.assign(indivs.begin(), indivs.end());
    return g;
}

ConsistencyResult check_ontology_consistency(const NormalizedTBox& nt,
                                             const Ontology& abox,
                                             const SymbolTable& syms) {
    InstanceGraph g = instance_saturate(nt, abox, syms);
    ConsistencyResult res;
    if (auto w = g.inconsistent_witness()) {
        res.consistent = false;
        res.witness = *w;
    }
    return res;
}

std::string serialize_classification(const ClassificationMaps& maps,
                                     const SymbolTable& syms, bool structured) {
    auto name = [&](PredId c) -> std::string {
        if (c == kTopC) return "top";
        if (c == kBotC) return "bot";
        return syms.pred(c).name;
    };
    std::ostringstream os;
    auto s = maps.s_export();
    std::sort(s.begin(), s.end(), [&](const auto& a, const auto& b) {
        return name(a.first) < name(b.first);
    });
    for (auto& [c, members] : s) {
        std::vector<std::string> ms;
        for (PredId d : members) ms.push_back(name(d));
        std::sort(ms.begin(), ms.end());
        if (structured) {
            for (const std::string& m : ms) os << "s " << name(c) << ' ' << m << '\n';
        } else {
            os << "S(" << name(c) << ") = {";
            for (size_t i = 0; i < ms.size(); ++i) os << (i ? ", " : " ") << ms[i];
            os << (ms.empty() ? "}" : " }") << '\n';
        }
    }
    auto t = maps.t_export();
    std::sort(t.begin(), t.end(), [&](const auto& a, const auto& b) {
        return name(a.first) < name(b.first);
    });
    for (auto& [role, pairs] : t) {
        std::vector<std::pair<std::string, std::string>> ps;
        for (auto [c, d] : pairs) ps.emplace_back(name(c), name(d));
        std::sort(ps.begin(), ps.end());
        if (structured) {
            for (auto& [c, d] : ps) os << "t " << name(role) << ' ' << c << ' ' << d << '\n';
        } else {
            os << "T(" << name(role) << ") = {";
            for (size_t i = 0; i < ps.size(); ++i)
                os << (i ? ", " : " ") << '(' << ps[i].first << ',' << ps[i].second << ')';
            os << (ps.empty() ? "}" : " }") << '\n';
        }
    }
    return os.str();
}

} // namespace mknf
