#include "mknf/kb.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace mknf {

PredId SymbolTable::intern_pred(std::string_view name, int arity, PredKind kind) {
    auto it = pred_ids_.find(std::string(name));
    if (it != pred_ids_.end()) {
        PredEntry& e = preds_[it->second];
        if (e.arity >= 0 && arity >= 0 && e.arity != arity)
            throw KbError("predicate '" + e.name + "' used with arity " +
                          std::to_string(arity) + " but declared with arity " +
                          std::to_string(e.arity));
        if (e.arity < 0) e.arity = arity;
        if (e.kind == PredKind::Plain) e.kind = kind;
        else if (kind != PredKind::Plain && e.kind != kind)
            throw KbError("name '" + e.name + "' used as both concept and role");
        return it->second;
    }
    PredId id = static_cast<PredId>(preds_.size());
    preds_.push_back(PredEntry{std::string(name), arity, kind, false, PredRole::User, knone});
    pred_ids_.emplace(std::string(name), id);
    return id;
}

std::optional<PredId> SymbolTable::find_pred(std::string_view name) const {
    auto it = pred_ids_.find(std::string(name));
    if (it == pred_ids_.end()) return std::nullopt;
    return it->second;
}

ConstId SymbolTable::intern_const(std::string_view name) {
    auto it = const_ids_.find(std::string(name));
    if (it != const_ids_.end()) return it->second;
    ConstId id = static_cast<ConstId>(consts_.size());
    consts_.emplace_back(name);
    const_ids_.emplace(std::string(name), id);
    return id;
}

std::optional<ConstId> SymbolTable::find_const(std::string_view name) const {
    auto it = const_ids_.find(std::string(name));
    if (it == const_ids_.end()) return std::nullopt;
    return it->second;
}

VarId SymbolTable::intern_var(std::string_view name) {
    auto it = var_ids_.find(std::string(name));
    if (it != var_ids_.end()) return it->second;
    VarId id = static_cast<VarId>(vars_.size());
    vars_.emplace_back(name);
    var_ids_.emplace(std::string(name), id);
    return id;
}

bool Atom::ground() const {
    for (const Term& t : args)
        if (t.var) return false;
    return true;
}

bool Rule::ground() const {
    if (!head.ground()) return false;
    for (const Literal& l : body)
        if (!l.atom.ground()) return false;
    return true;
}

size_t AtomHash::operator()(const Atom& a) const {
    size_t h = std::hash<uint32_t>()(a.pred);
    for (const Term& t : a.args)
        h = h * 1315423911u + (t.var ? 2u : 1u) * 2654435761u + t.id;
    return h;
}

bool atom_less(const Atom& a, const Atom& b) {
    if (a.pred != b.pred) return a.pred < b.pred;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i].var != b.args[i].var) return !a.args[i].var;
        if (a.args[i].id != b.args[i].id) return a.args[i].id < b.args[i].id;
    }
    return false;
}

// --------------------------------------------------------------------------
// Concept expressions

ConceptExpr ConceptExpr::top() { return ConceptExpr{}; }

ConceptExpr ConceptExpr::bottom() {
    ConceptExpr e;
    e.kind = Kind::Bottom;
    return e;
}

ConceptExpr ConceptExpr::named(PredId c) {
    ConceptExpr e;
    e.kind = Kind::Name;
    e.name = c;
    return e;
}

int compare(const ConceptExpr& a, const ConceptExpr& b) {
    if (a.kind != b.kind) return int(a.kind) < int(b.kind) ? -1 : 1;
    switch (a.kind) {
    case ConceptExpr::Kind::Top:
    case ConceptExpr::Kind::Bottom:
        return 0;
    case ConceptExpr::Kind::Name:
        return a.name == b.name ? 0 : (a.name < b.name ? -1 : 1);
    case ConceptExpr::Kind::Exists: {
        if (a.role != b.role) return a.role < b.role ? -1 : 1;
        return compare(a.kids[0], b.kids[0]);
    }
    case ConceptExpr::Kind::Conj: {
        size_t n = std::min(a.kids.size(), b.kids.size());
        for (size_t i = 0; i < n; ++i) {
            int c = compare(a.kids[i], b.kids[i]);
            if (c != 0) return c;
        }
        if (a.kids.size() != b.kids.size())
            return a.kids.size() < b.kids.size() ? -1 : 1;
        return 0;
    }
    }
    return 0;
}

bool operator==(const ConceptExpr& a, const ConceptExpr& b) {
    return compare(a, b) == 0;
}

ConceptExpr ConceptExpr::conj(std::vector<ConceptExpr> kids) {
    std::vector<ConceptExpr> flat;
    for (ConceptExpr& k : kids) {
        if (k.kind == Kind::Bottom) return bottom();
        if (k.kind == Kind::Top) continue;
        if (k.kind == Kind::Conj)
            for (ConceptExpr& kk : k.kids) flat.push_back(std::move(kk));
        else
            flat.push_back(std::move(k));
    }
    std::sort(flat.begin(), flat.end(),
              [](const ConceptExpr& x, const ConceptExpr& y) { return compare(x, y) < 0; });
    flat.erase(std::unique(flat.begin(), flat.end(),
                           [](const ConceptExpr& x, const ConceptExpr& y) { return x == y; }),
               flat.end());
    if (flat.empty()) return top();
    if (flat.size() == 1) return std::move(flat[0]);
    ConceptExpr e;
    e.kind = Kind::Conj;
    e.kids = std::move(flat);
    return e;
}

ConceptExpr ConceptExpr::exists(PredId role, ConceptExpr filler) {
    if (filler.kind == Kind::Bottom) return bottom();
    ConceptExpr e;
    e.kind = Kind::Exists;
    e.role = role;
    e.kids.push_back(std::move(filler));
    return e;
}

TBoxAxiom TBoxAxiom::gci(ConceptExpr l, ConceptExpr r) {
    TBoxAxiom ax;
    ax.kind = Kind::Gci;
    ax.lhs = std::move(l);
    ax.rhs = std::move(r);
    return ax;
}

TBoxAxiom TBoxAxiom::ri(std::vector<PredId> chain, PredId super) {
    TBoxAxiom ax;
    ax.kind = Kind::Ri;
    ax.chain = std::move(chain);
    ax.super = super;
    return ax;
}

bool operator==(const TBoxAxiom& a, const TBoxAxiom& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == TBoxAxiom::Kind::Gci) return a.lhs == b.lhs && a.rhs == b.rhs;
    return a.chain == b.chain && a.super == b.super;
}

NormalAxiom NormalAxiom::f1(PredId c1, PredId rhs) {
    NormalAxiom a;
    a.kind = Kind::F1; a.c1 = c1; a.rhs = rhs;
    return a;
}
NormalAxiom NormalAxiom::f2(PredId c1, PredId c2, PredId rhs) {
    NormalAxiom a;
    a.kind = Kind::F2; a.c1 = std::min(c1, c2); a.c2 = std::max(c1, c2); a.rhs = rhs;
    return a;
}
NormalAxiom NormalAxiom::f3(PredId r, PredId c1, PredId rhs) {
    NormalAxiom a;
    a.kind = Kind::F3; a.r1 = r; a.c1 = c1; a.rhs = rhs;
    return a;
}
NormalAxiom NormalAxiom::f4(PredId c1, PredId r, PredId rhs) {
    NormalAxiom a;
    a.kind = Kind::F4; a.c1 = c1; a.r1 = r; a.rhs = rhs;
    return a;
}
NormalAxiom NormalAxiom::ri1(PredId r, PredId rsup) {
    NormalAxiom a;
    a.kind = Kind::RI1; a.r1 = r; a.rsup = rsup;
    return a;
}
NormalAxiom NormalAxiom::ri2(PredId r1, PredId r2, PredId rsup) {
    NormalAxiom a;
    a.kind = Kind::RI2; a.r1 = r1; a.r2 = r2; a.rsup = rsup;
    return a;
}

bool normal_axiom_less(const NormalAxiom& a, const NormalAxiom& b) {
    auto key = [](const NormalAxiom& x) {
        return std::array<uint64_t, 7>{uint64_t(x.kind), x.c1, x.c2, x.rhs,
                                       x.r1, x.r2, x.rsup};
    };
    return key(a) < key(b);
}

// --------------------------------------------------------------------------
// HybridKB

std::vector<ConstId> HybridKB::individuals() const {
    std::set<ConstId> ids;
    for (const ConceptAssertion& ca : ontology.concept_asserts) ids.insert(ca.indiv);
    for (const RoleAssertion& ra : ontology.role_asserts) {
        ids.insert(ra.from);
        ids.insert(ra.to);
    }
    for (const Rule& r : program) {
        for (const Term& t : r.head.args)
            if (!t.var) ids.insert(t.id);
        for (const Literal& l : r.body)
            for (const Term& t : l.atom.args)
                if (!t.var) ids.insert(t.id);
    }
    return {ids.begin(), ids.end()};
}

// --------------------------------------------------------------------------
// Grounding

namespace {

void collect_vars(const Atom& a, std::vector<VarId>& out) {
    for (const Term& t : a.args)
        if (t.var && std::find(out.begin(), out.end(), t.id) == out.end())
            out.push_back(t.id);
}

Atom substitute(const Atom& a, const std::vector<VarId>& vars,
                const std::vector<ConstId>& vals) {
    Atom out = a;
    for (Term& t : out.args) {
        if (!t.var) continue;
        size_t i = std::find(vars.begin(), vars.end(), t.id) - vars.begin();
        t = mk_const(vals[i]);
    }
    return out;
}

} // namespace

Program ground_instantiation(const Program& program,
                             const std::vector<ConstId>& universe,
                             size_t rule_cap) {
    Program out;
    for (const Rule& r : program) {
        std::vector<VarId> vars;
        collect_vars(r.head, vars);
        for (const Literal& l : r.body) collect_vars(l.atom, vars);
        if (vars.empty()) {
            out.push_back(r);
            if (out.size() > rule_cap) throw KbError("grounding cap exceeded");
            continue;
        }
        if (universe.empty()) continue; // no instances
        std::vector<size_t> odo(vars.size(), 0);
        std::vector<ConstId> vals(vars.size());
        for (;;) {
            for (size_t i = 0; i < vars.size(); ++i) vals[i] = universe[odo[i]];
            Rule g;
            g.head = substitute(r.head, vars, vals);
            g.body.reserve(r.body.size());
            for (const Literal& l : r.body)
                g.body.push_back(Literal{substitute(l.atom, vars, vals), l.positive});
            out.push_back(std::move(g));
            if (out.size() > rule_cap) throw KbError("grounding cap exceeded");
            size_t i = 0;
            while (i < odo.size() && ++odo[i] == universe.size()) odo[i++] = 0;
            if (i == odo.size()) break;
        }
    }
    return out;
}

Program ground_instantiation(const HybridKB& kb, size_t rule_cap) {
    return ground_instantiation(kb.program, kb.individuals(), rule_cap);
}

std::vector<Atom> known_atoms(const Program& ground) {
    std::vector<Atom> out;
    auto add = [&](const Atom& a) {
        if (!a.ground()) throw KbError("known_atoms: program is not ground");
        out.push_back(a);
    };
    for (const Rule& r : ground) {
        add(r.head);
        for (const Literal& l : r.body) add(l.atom);
    }
    std::sort(out.begin(), out.end(), atom_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VarId> dl_safety_violations(const Rule& rule, const SymbolTable& syms) {
    std::vector<VarId> all;
    collect_vars(rule.head, all);
    for (const Literal& l : rule.body) collect_vars(l.atom, all);
    std::vector<VarId> safe;
    for (const Literal& l : rule.body) {
        if (!l.positive || syms.pred(l.atom.pred).dl) continue;
        collect_vars(l.atom, safe);
    }
    std::vector<VarId> bad;
    for (VarId v : all)
        if (std::find(safe.begin(), safe.end(), v) == safe.end()) bad.push_back(v);
    std::sort(bad.begin(), bad.end(), [&](VarId a, VarId b) {
        return syms.var_name(a) < syms.var_name(b);
    });
    return bad;
}

// --------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t, const SymbolTable& syms) {
    return t.var ? syms.var_name(t.id) : syms.const_name(t.id);
}

std::string to_string(const Atom& a, const SymbolTable& syms) {
    std::string s = syms.pred(a.pred).name;
    if (a.args.empty()) return s;
    s += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ',';
        s += to_string(a.args[i], syms);
    }
    s += ')';
    return s;
}

std::string to_string(const Literal& l, const SymbolTable& syms) {
    return l.positive ? to_string(l.atom, syms) : "not " + to_string(l.atom, syms);
}

std::string to_string(const Rule& r, const SymbolTable& syms) {
    std::string s = to_string(r.head, syms);
    if (!r.body.empty()) {
        s += " :- ";
        for (size_t i = 0; i < r.body.size(); ++i) {
            if (i) s += ", ";
            s += to_string(r.body[i], syms);
        }
    }
    s += '.';
    return s;
}

std::string to_string(const ConceptExpr& c, const SymbolTable& syms) {
    switch (c.kind) {
    case ConceptExpr::Kind::Top: return "top";
    case ConceptExpr::Kind::Bottom: return "bot";
    case ConceptExpr::Kind::Name: return syms.pred(c.name).name;
    case ConceptExpr::Kind::Exists: {
        std::string f = to_string(c.kids[0], syms);
        if (c.kids[0].kind == ConceptExpr::Kind::Conj) f = "(" + f + ")";
        return "exists " + syms.pred(c.role).name + "." + f;
    }
    case ConceptExpr::Kind::Conj: {
        std::string s;
        for (size_t i = 0; i < c.kids.size(); ++i) {
            if (i) s += " and ";
            std::string k = to_string(c.kids[i], syms);
            if (c.kids[i].kind == ConceptExpr::Kind::Conj) k = "(" + k + ")";
            s += k;
        }
        return s;
    }
    }
    return {};
}

std::string to_string(const TBoxAxiom& ax, const SymbolTable& syms) {
    if (ax.kind == TBoxAxiom::Kind::Gci)
        return to_string(ax.lhs, syms) + " <= " + to_string(ax.rhs, syms) + ".";
    std::string s;
    for (size_t i = 0; i < ax.chain.size(); ++i) {
        if (i) s += " o ";
        s += syms.pred(ax.chain[i]).name;
    }
    return s + " <= " + syms.pred(ax.super).name + ".";
}

namespace {
std::string cname(PredId c, const SymbolTable& syms) {
    if (c == kTopC) return "top";
    if (c == kBotC) return "bot";
    return syms.pred(c).name;
}
} // namespace

std::string to_string(const NormalAxiom& ax, const SymbolTable& syms) {
    using K = NormalAxiom::Kind;
    switch (ax.kind) {
    case K::F1: return cname(ax.c1, syms) + " <= " + cname(ax.rhs, syms) + ".";
    case K::F2:
        return cname(ax.c1, syms) + " and " + cname(ax.c2, syms) + " <= " +
               cname(ax.rhs, syms) + ".";
    case K::F3:
        return "exists " + syms.pred(ax.r1).name + "." + cname(ax.c1, syms) +
               " <= " + cname(ax.rhs, syms) + ".";
    case K::F4:
        return cname(ax.c1, syms) + " <= exists " + syms.pred(ax.r1).name + "." +
               cname(ax.rhs, syms) + ".";
    case K::RI1:
        return syms.pred(ax.r1).name + " <= " + syms.pred(ax.rsup).name + ".";
    case K::RI2:
        return syms.pred(ax.r1).name + " o " + syms.pred(ax.r2).name + " <= " +
               syms.pred(ax.rsup).name + ".";
    }
    return {};
}

} // namespace mknf
