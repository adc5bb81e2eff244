#include "mknf/wf.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace mknf {

size_t Bitset::count() const {
    size_t c = 0;
    for (uint64_t w : w_) c += static_cast<size_t>(__builtin_popcountll(w));
    return c;
}

Bitset& Bitset::operator|=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
}

Bitset& Bitset::operator&=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
}

Bitset& Bitset::subtract(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
}

bool Bitset::subset_of(const Bitset& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
        if (w_[i] & ~o.w_[i]) return false;
    return true;
}

std::vector<uint32_t> Bitset::members() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < n_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

uint32_t AtomStore::intern(const Atom& a) {
    auto it = ids_.find(a);
    if (it != ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(atoms_.size());
    atoms_.push_back(a);
    ids_.emplace(a, id);
    return id;
}

std::optional<uint32_t> AtomStore::find(const Atom& a) const {
    auto it = ids_.find(a);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

GroundProgram GroundProgram::build(const Program& ground, const SymbolTable& syms) {
    GroundProgram gp;
    for (const Rule& r : ground) {
        if (!r.ground()) throw KbError("ground program expected");
        GroundRule gr;
        gr.head = gp.atoms.intern(r.head);
        for (const Literal& l : r.body) {
            uint32_t id = gp.atoms.intern(l.atom);
            (l.positive ? gr.pos : gr.neg).push_back(id);
        }
        // marked iff the head is a doubled atom guarded by its own marker
        const PredEntry& hp = syms.pred(r.head.pred);
        if (hp.role == PredRole::Doubled) {
            for (const Literal& l : r.body) {
                if (l.positive) continue;
                const PredEntry& bp = syms.pred(l.atom.pred);
                if (bp.role == PredRole::Marker && bp.base == hp.base &&
                    l.atom.args == r.head.args) {
                    gr.marked = true;
                    gr.coh_atom = Atom{hp.base, r.head.args};
                    break;
                }
            }
        }
        gp.rules.push_back(std::move(gr));
    }
    gp.ka = Bitset(gp.atoms.size());
    gp.ka.set_all();
    return gp;
}

// --------------------------------------------------------------------------
// DlContext

DlContext::DlContext(const std::vector<NormalAxiom>& reduced, const Ontology& abox,
                     const SymbolTable& syms, std::function<PredId(PredId)> predmap) {
    (void)syms;
    auto pm = [&](PredId p) { return predmap ? predmap(p) : p; };
    auto concept_id = [&](PredId p) -> uint32_t {
        if (p == kTopC) return 0;
        PredId m = pm(p);
        auto it = concept_ids_.find(m);
        if (it != concept_ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(concepts_.size());
        concept_ids_.emplace(m, id);
        concepts_.push_back(m);
        return id;
    };
    auto role_id = [&](PredId p) -> uint32_t {
        PredId m = pm(p);
        auto it = role_ids_.find(m);
        if (it != role_ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(roles_.size());
        role_ids_.emplace(m, id);
        roles_.push_back(m);
        return id;
    };
    concepts_.push_back(kTopC); // local id 0 is top
    concept_ids_.emplace(kTopC, 0);

    for (const NormalAxiom& ax : reduced) {
        if (ax.kind == NormalAxiom::Kind::F4)
            throw KbError("DlContext: reduced TBox expected (form-(4) present)");
        NormalAxiom m = ax;
        auto mapc = [&](PredId c) -> PredId {
            if (c == knone || c == kBotC) return c;
            return c == kTopC ? kTopC : concepts_[concept_id(c)];
        };
        // store with local-space translation applied lazily during saturation;
        // keep pred ids mapped so that bind() matches program predicates
        m.c1 = mapc(ax.c1);
        m.c2 = mapc(ax.c2);
        m.rhs = mapc(ax.rhs);
        if (ax.r1 != knone) m.r1 = roles_[role_id(ax.r1)];
        if (ax.r2 != knone) m.r2 = roles_[role_id(ax.r2)];
        if (ax.rsup != knone) m.rsup = roles_[role_id(ax.rsup)];
        axioms_.push_back(m);
    }
    auto indiv_id = [&](ConstId c) -> uint32_t {
        auto it = indiv_ids_.find(c);
        if (it != indiv_ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(indivs_.size());
        indiv_ids_.emplace(c, id);
        indivs_.push_back(c);
        return id;
    };
    for (const ConceptAssertion& ca : abox.concept_asserts)
        abox_conc_.push_back({concept_id(ca.concept_), indiv_id(ca.indiv)});
    for (const RoleAssertion& ra : abox.role_asserts)
        abox_role_.push_back({role_id(ra.role), indiv_id(ra.from), indiv_id(ra.to)});
}

void DlContext::bind(const GroundProgram& gp, const SymbolTable& syms) {
    (void)syms;
    prog_conc_.clear();
    prog_role_.clear();
    prog_size_ = gp.atoms.size();
    auto indiv_id = [&](ConstId c) -> uint32_t {
        auto it = indiv_ids_.find(c);
        if (it != indiv_ids_.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(indivs_.size());
        indiv_ids_.emplace(c, id);
        indivs_.push_back(c);
        return id;
    };
    for (uint32_t i = 0; i < gp.atoms.size(); ++i) {
        const Atom& a = gp.atoms.at(i);
        for (const Term& t : a.args)
            if (!t.var) indiv_id(t.id); // every program constant is an individual
        auto ci = concept_ids_.find(a.pred);
        if (ci != concept_ids_.end() && a.args.size() == 1) {
            prog_conc_.push_back({i, ci->second, indiv_id(a.args[0].id)});
            continue;
        }
        auto ri = role_ids_.find(a.pred);
        if (ri != role_ids_.end() && a.args.size() == 2)
            prog_role_.push_back(
                {i, ri->second, indiv_id(a.args[0].id), indiv_id(a.args[1].id)});
    }
}

DlContext::Sat DlContext::saturate(const Bitset& s, const Atom* extra) const {
    Sat sat;
    size_t ni = indivs_.size();
    sat.conc.assign(concepts_.size(), Bitset(ni));
    sat.role.assign(roles_.size(), {});
    for (size_t i = 0; i < ni; ++i) sat.conc[0].set(i); // top holds everywhere

    std::vector<std::vector<bool>> role_seen(roles_.size());
    for (auto& rs : role_seen) rs.assign(ni * ni, false);
    auto add_role = [&](uint32_t r, uint32_t i, uint32_t j) -> bool {
        if (role_seen[r][i * ni + j]) return false;
        role_seen[r][i * ni + j] = true;
        sat.role[r].emplace_back(i, j);
        return true;
    };

    for (auto [c, i] : abox_conc_) sat.conc[c].set(i);
    for (auto [r, i, j] : abox_role_) add_role(r, i, j);
    for (auto [atom, c, i] : prog_conc_)
        if (atom < s.size() && s.test(atom)) sat.conc[c].set(i);
    for (auto [atom, r, i, j] : prog_role_)
        if (atom < s.size() && s.test(atom)) add_role(r, i, j);
    if (extra) {
        if (extra->args.size() == 1) {
            auto ci = concept_ids_.find(extra->pred);
            if (ci != concept_ids_.end())
                sat.conc[ci->second].set(indiv_ids_.at(extra->args[0].id));
        } else if (extra->args.size() == 2) {
            auto ri = role_ids_.find(extra->pred);
            if (ri != role_ids_.end())
                add_role(ri->second, indiv_ids_.at(extra->args[0].id),
                         indiv_ids_.at(extra->args[1].id));
        }
    }

    auto cid_of = [&](PredId p) -> uint32_t {
        return p == kTopC ? 0 : concept_ids_.at(p);
    };
    bool changed = true;
    while (changed && !sat.bot) {
        changed = false;
        for (const NormalAxiom& ax : axioms_) {
            switch (ax.kind) {
            case NormalAxiom::Kind::F1: {
                Bitset& src = sat.conc[cid_of(ax.c1)];
                if (ax.rhs == kBotC) {
                    if (src.count()) sat.bot = true;
                    break;
                }
                Bitset& dst = sat.conc[cid_of(ax.rhs)];
                for (uint32_t i : src.members())
                    if (!dst.test(i)) {
                        dst.set(i);
                        changed = true;
                    }
                break;
            }
            case NormalAxiom::Kind::F2: {
                Bitset both = sat.conc[cid_of(ax.c1)];
                both &= sat.conc[cid_of(ax.c2)];
                if (ax.rhs == kBotC) {
                    if (both.count()) sat.bot = true;
                    break;
                }
                Bitset& dst = sat.conc[cid_of(ax.rhs)];
                for (uint32_t i : both.members())
                    if (!dst.test(i)) {
                        dst.set(i);
                        changed = true;
                    }
                break;
            }
            case NormalAxiom::Kind::F3: {
                const Bitset& filler = sat.conc[cid_of(ax.c1)];
                uint32_t r = role_ids_.at(ax.r1);
                if (ax.rhs == kBotC) {
                    for (auto [i, j] : sat.role[r])
                        if (filler.test(j)) {
                            sat.bot = true;
                            break;
                        }
                    break;
                }
                Bitset& dst = sat.conc[cid_of(ax.rhs)];
                for (auto [i, j] : sat.role[r])
                    if (filler.test(j) && !dst.test(i)) {
                        dst.set(i);
                        changed = true;
                    }
                break;
            }
            case NormalAxiom::Kind::RI1: {
                uint32_t r = role_ids_.at(ax.r1), sp = role_ids_.at(ax.rsup);
                for (size_t k = 0; k < sat.role[r].size(); ++k) {
                    auto [i, j] = sat.role[r][k];
                    if (add_role(sp, i, j)) changed = true;
                }
                break;
            }
            case NormalAxiom::Kind::RI2: {
                uint32_t r1 = role_ids_.at(ax.r1), r2 = role_ids_.at(ax.r2),
                         sp = role_ids_.at(ax.rsup);
                for (size_t k = 0; k < sat.role[r1].size(); ++k) {
                    auto [i, j] = sat.role[r1][k];
                    for (size_t l = 0; l < sat.role[r2].size(); ++l) {
                        auto [j2, m] = sat.role[r2][l];
                        if (j2 == j && add_role(sp, i, m)) changed = true;
                    }
                }
                break;
            }
            case NormalAxiom::Kind::F4:
                break;
            }
            if (sat.bot) break;
        }
    }
    return sat;
}

Bitset DlContext::dl_entailed(const Bitset& s) const {
    Sat sat = saturate(s, nullptr);
    Bitset out(prog_size_);
    if (sat.bot) return out; // flood handled by the caller
    for (auto [atom, c, i] : prog_conc_)
        if (sat.conc[c].test(i)) out.set(atom);
    for (auto [atom, r, i, j] : prog_role_)
        for (auto [x, y] : sat.role[r])
            if (x == i && y == j) {
                out.set(atom);
                break;
            }
    return out;
}

bool DlContext::inconsistent(const Bitset& s) const { return saturate(s, nullptr).bot; }

bool DlContext::neg_entails(const Bitset& s, const Atom& h) const {
    if (!my_dl_pred(h.pred)) return saturate(s, nullptr).bot;
    return saturate(s, &h).bot;
}

// --------------------------------------------------------------------------
// BottomUp

BottomUp::BottomUp(const GroundProgram& gp, const SymbolTable& syms, Variant variant,
                   const DlContext* orig_ctx, const DlContext* dbl_ctx,
                   Bitset ka_original)
    : gp_(gp), syms_(syms), variant_(variant), orig_ctx_(orig_ctx), dbl_ctx_(dbl_ctx),
      ka_original_(std::move(ka_original)) {
    if (ka_original_.size() == 0) {
        if (variant_ == Variant::Original) {
            ka_original_ = gp_.ka;
        } else {
            // atoms over non-doubled, non-marker predicates
            ka_original_ = Bitset(gp_.atoms.size());
            for (uint32_t i = 0; i < gp_.atoms.size(); ++i) {
                PredRole r = syms_.pred(gp_.atoms.at(i).pred).role;
                if (r == PredRole::User || r == PredRole::Aux) ka_original_.set(i);
            }
        }
    }
    markers_ = Bitset(gp_.atoms.size());
    for (uint32_t i = 0; i < gp_.atoms.size(); ++i)
        if (syms_.pred(gp_.atoms.at(i).pred).role == PredRole::Marker) markers_.set(i);
}

Bitset BottomUp::d_operator(const Bitset& s) const {
    if (variant_ == Variant::Original) {
        Bitset out = s;
        if (orig_ctx_) {
            if (orig_ctx_->inconsistent(s)) {
                out = gp_.ka;
            } else {
                out |= orig_ctx_->dl_entailed(s);
            }
        }
        out &= gp_.ka;
        return out;
    }
    // doubled: original atoms against O, doubled-space atoms against O^d;
    // markers have no ontology linkage and never flood
    Bitset out(gp_.atoms.size());
    Bitset orig_part = s;
    orig_part &= ka_original_;
    if (orig_ctx_) {
        if (orig_ctx_->inconsistent(s)) {
            orig_part = ka_original_;
        } else {
            Bitset e = orig_ctx_->dl_entailed(s);
            e &= ka_original_;
            orig_part |= e;
        }
    }
    Bitset dbl_slice = gp_.ka;
    dbl_slice.subtract(ka_original_);
    Bitset dbl_part = s;
    dbl_part &= dbl_slice;
    if (dbl_ctx_) {
        if (dbl_ctx_->inconsistent(s)) {
            dbl_part = dbl_slice;
            dbl_part.subtract(markers_);
        } else {
            Bitset e = dbl_ctx_->dl_entailed(s);
            e &= dbl_slice;
            dbl_part |= e;
        }
    }
    out |= orig_part;
    out |= dbl_part;
    return out;
}

bool BottomUp::drop_by_coherence(const GroundRule& r, const Bitset& s,
                                 bool coherent) const {
    if (variant_ == Variant::Original) {
        if (!coherent || !orig_ctx_) return false;
        return orig_ctx_->neg_entails(s, gp_.atoms.at(r.head));
    }
    if (!r.marked || !orig_ctx_) return false;
    return orig_ctx_->neg_entails(s, r.coh_atom);
}

Bitset BottomUp::gamma(const Bitset& s, bool coherent) const {
    return gamma_full(s, coherent, nullptr, nullptr);
}

Bitset BottomUp::gamma_full(const Bitset& s, bool coherent, std::vector<uint32_t>* fired,
                            std::vector<uint32_t>* dl) const {
    // transform: keep rules whose negative atoms avoid s and that survive the
    // coherence drop; then take the least fixpoint of T
    std::vector<uint32_t> kept;
    for (uint32_t i = 0; i < gp_.rules.size(); ++i) {
        const GroundRule& r = gp_.rules[i];
        bool ok = true;
        for (uint32_t b : r.neg)
            if (s.test(b)) {
                ok = false;
                break;
            }
        if (ok && drop_by_coherence(r, s, coherent)) ok = false;
        if (ok) kept.push_back(i);
    }

    Bitset x(gp_.atoms.size());
    bool changed = true;
    while (changed) {
        changed = false;
        Bitset d = d_operator(x);
        d.subtract(x);
        if (d.count()) {
            if (dl)
                for (uint32_t a : d.members()) dl->push_back(a);
            x |= d;
            changed = true;
        }
        for (uint32_t i : kept) {
            const GroundRule& r = gp_.rules[i];
            if (x.test(r.head)) continue;
            bool sat = true;
            for (uint32_t b : r.pos)
                if (!x.test(b)) {
                    sat = false;
                    break;
                }
            if (sat) {
                x.set(r.head);
                if (fired) fired->push_back(i);
                changed = true;
            }
        }
    }
    return x;
}

Bitset BottomUp::lfp_positive() const {
    for (const GroundRule& r : gp_.rules)
        if (!r.neg.empty()) throw KbError("lfp_positive: program is not positive");
    Bitset empty(gp_.atoms.size());
    return gamma(empty, false);
}

FixpointTrace BottomUp::alternating(bool record_provenance) const {
    FixpointTrace t;
    Bitset p(gp_.atoms.size());
    Bitset n = gp_.ka;
    t.p_seq.push_back(p);
    t.n_seq.push_back(n);
    t.fired_rules.emplace_back();
    t.dl_entailed.emplace_back();
    bool coherent_p = variant_ == Variant::Doubled; // single operator when doubled
    for (;;) {
        std::vector<uint32_t> fired, dl;
        Bitset p2 = gamma_full(n, coherent_p, record_provenance ? &fired : nullptr,
                               record_provenance ? &dl : nullptr);
        Bitset n2 = gamma(p, true);
        t.p_seq.push_back(p2);
        t.n_seq.push_back(n2);
        t.fired_rules.push_back(std::move(fired));
        t.dl_entailed.push_back(std::move(dl));
        if (p2 == p && n2 == n) break;
        p = std::move(p2);
        n = std::move(n2);
    }
    t.p_omega = p;
    t.n_omega = n;
    return t;
}

BottomUp::Verdict BottomUp::consistency_check(const FixpointTrace& t,
                                              bool ontology_consistent) const {
    Verdict v;
    if (!ontology_consistent) {
        v.consistent = false;
        v.reason = "ontology inconsistent";
        return v;
    }
    Bitset gp_plain = gamma(t.p_omega, false), gp_coh = gamma(t.p_omega, true);
    if (gp_coh.proper_subset_of(gp_plain)) {
        v.consistent = false;
        v.reason = "gamma'(P_omega) proper subset of gamma(P_omega)";
        return v;
    }
    Bitset gn_plain = gamma(t.n_omega, false), gn_coh = gamma(t.n_omega, true);
    if (gn_coh.proper_subset_of(gn_plain)) {
        v.consistent = false;
        v.reason = "gamma'(N_omega) proper subset of gamma(N_omega)";
        return v;
    }
    return v;
}

// --------------------------------------------------------------------------
// Model extraction

Truth trace_truth(const FixpointTrace& t, uint32_t atom) {
    if (t.p_omega.test(atom)) return Truth::True;
    if (!t.n_omega.test(atom)) return Truth::False;
    return Truth::Undefined;
}

ThreeValuedModel extract_model(const FixpointTrace& t, const GroundProgram& gp,
                               const DoubledProgram& dp) {
    ThreeValuedModel m;
    for (uint32_t i = 0; i < gp.atoms.size(); ++i) {
        const Atom& a = gp.atoms.at(i);
        if (!dp.original_pred(a.pred)) continue;
        bool is_true = t.p_omega.test(i);
        bool is_false = true; // A$d absent from the program means never derivable
        PredId d = dp.doubled(a.pred);
        if (d != knone) {
            Atom da{d, a.args};
            if (auto id = gp.atoms.find(da)) is_false = !t.n_omega.test(*id);
        }
        ModelEntry e;
        e.atom = a;
        if (is_true) {
            e.value = Truth::True;
            if (is_false) {
                e.inconsistent = true;
                m.inconsistency_flags.push_back(a);
                m.mknf_inconsistent = true;
            }
        } else if (is_false) {
            e.value = Truth::False;
        } else {
            e.value = Truth::Undefined;
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

// --------------------------------------------------------------------------
// Unfounded sets (brute force, definition level)

namespace {

struct DepCache {
    // minimal consistent dependency sets per atom, per ontology side
    std::vector<std::vector<Bitset>> orig, dbl;
};

// all minimal consistent S within `space` with OB_{O,S} |= h
std::vector<Bitset> minimal_deps(const UnfoundedParams& p, const DlContext* ctx,
                                 const Bitset& space, uint32_t h) {
    std::vector<uint32_t> atoms = space.members();
    size_t n = atoms.size();
    std::vector<Bitset> out;
    std::vector<uint64_t> found; // subset masks already minimal
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        bool superset = false;
        for (uint64_t f : found)
            if ((f & mask) == f) {
                superset = true;
                break;
            }
        if (superset) continue;
        Bitset s(p.gp.atoms.size());
        for (size_t i = 0; i < n; ++i)
            if (mask & (uint64_t(1) << i)) s.set(atoms[i]);
        bool entails = s.test(h);
        if (!entails && ctx) {
            if (ctx->inconsistent(s)) continue; // only consistent dependencies
            entails = ctx->dl_entailed(s).test(h);
        } else if (ctx && ctx->inconsistent(s)) {
            continue;
        }
        if (entails) {
            found.push_back(mask);
            out.push_back(std::move(s));
        }
    }
    return out;
}

DepCache build_deps(const UnfoundedParams& p) {
    DepCache c;
    size_t n = p.gp.atoms.size();
    c.orig.resize(n);
    c.dbl.resize(n);
    Bitset orig_space = p.ka_original.size() ? p.ka_original : p.gp.ka;
    for (uint32_t h = 0; h < n; ++h) {
        c.orig[h] = minimal_deps(p, p.orig_ctx, orig_space, h);
        if (p.variant == Variant::Doubled)
            c.dbl[h] = minimal_deps(p, p.dbl_ctx, p.gp.ka, h);
    }
    return c;
}

bool unfounded_with(const UnfoundedParams& p, const DepCache& deps, const Bitset& u,
                    const Bitset& t, const Bitset& f) {
    Bitset uf = u;
    uf |= f;
    for (uint32_t h : u.members()) {
        // (Ui): every rule for h is blocked
        for (const GroundRule& r : p.gp.rules) {
            if (r.head != h) continue;
            bool blocked = false;
            for (uint32_t a : r.pos)
                if (uf.test(a)) {
                    blocked = true;
                    break;
                }
            if (!blocked)
                for (uint32_t b : r.neg)
                    if (t.test(b)) {
                        blocked = true;
                        break;
                    }
            if (!blocked && p.orig_ctx) {
                if (p.variant == Variant::Original)
                    blocked = p.orig_ctx->neg_entails(t, p.gp.atoms.at(h));
                else if (r.marked)
                    blocked = p.orig_ctx->neg_entails(t, r.coh_atom);
            }
            if (!blocked) return false;
        }
        // (Uii) / (Uii^d): every minimal dependency intersects U u F
        for (const Bitset& s : deps.orig[h]) {
            Bitset inter = s;
            inter &= uf;
            if (!inter.count()) return false;
        }
        if (p.variant == Variant::Doubled)
            for (const Bitset& s : deps.dbl[h]) {
                Bitset inter = s;
                inter &= uf;
                if (!inter.count()) return false;
            }
    }
    return true;
}

} // namespace

bool is_unfounded_set(const UnfoundedParams& p, const Bitset& u, const Bitset& t,
                      const Bitset& f) {
    if (p.gp.atoms.size() > p.cap)
        throw KbError("unfounded-set instance larger than the configured cap");
    DepCache deps = build_deps(p);
    return unfounded_with(p, deps, u, t, f);
}

Bitset greatest_unfounded_set(const UnfoundedParams& p, const Bitset& t, const Bitset& f) {
    size_t n = p.gp.atoms.size();
    if (n > p.cap)
        throw KbError("unfounded-set instance larger than the configured cap");
    DepCache deps = build_deps(p);
    Bitset best(n);
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        Bitset u(n);
        for (size_t i = 0; i < n; ++i)
            if (mask & (uint64_t(1) << i)) u.set(i);
        if (unfounded_with(p, deps, u, t, f)) best |= u;
    }
    return best;
}

} // namespace mknf
