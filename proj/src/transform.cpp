#include "mknf/transform.hpp"

#include <algorithm>
#include <set>

namespace mknf {

const char* tag_name(RuleTag t) {
    switch (t) {
    case RuleTag::User2a: return "user-2a";
    case RuleTag::User2bI: return "user-2b.i";
    case RuleTag::User2bII: return "user-2b.ii";
    case RuleTag::A1: return "a1";
    case RuleTag::A2: return "a2";
    case RuleTag::C1: return "c1";
    case RuleTag::C2: return "c2";
    case RuleTag::C3: return "c3";
    case RuleTag::R1: return "r1";
    case RuleTag::R2: return "r2";
    case RuleTag::I1: return "i1";
    case RuleTag::I2: return "i2";
    case RuleTag::I3: return "i3";
    }
    return "?";
}

PredId DoubledProgram::doubled(PredId orig) const {
    auto it = to_doubled.find(orig);
    return it == to_doubled.end() ? knone : it->second;
}

PredId DoubledProgram::marker(PredId orig) const {
    auto it = to_marker.find(orig);
    return it == to_marker.end() ? knone : it->second;
}

std::vector<std::string> DoubledProgram::tag_names() const {
    std::vector<std::string> out;
    out.reserve(tags.size());
    for (RuleTag t : tags) out.emplace_back(tag_name(t));
    return out;
}

namespace {

PredId ensure_doubled(DoubledProgram& out, PredId orig) {
    if (PredId d = out.doubled(orig); d != knone) return d;
    PredEntry e = out.symbols.pred(orig); // copy: interning may reallocate
    PredId d = out.symbols.intern_pred(e.name + "$d", e.arity, e.kind);
    PredEntry& de = out.symbols.pred_mut(d);
    de.role = PredRole::Doubled;
    de.base = orig;
    de.dl = e.dl;
    out.to_doubled.emplace(orig, d);
    return d;
}

PredId ensure_marker(DoubledProgram& out, PredId orig) {
    if (PredId m = out.marker(orig); m != knone) return m;
    PredEntry e = out.symbols.pred(orig);
    PredId m = out.symbols.intern_pred("N$" + e.name, e.arity, PredKind::Plain);
    PredEntry& me = out.symbols.pred_mut(m);
    me.role = PredRole::Marker;
    me.base = orig;
    me.dl = false;
    out.to_marker.emplace(orig, m);
    return m;
}

Atom with_pred(const Atom& a, PredId p) {
    Atom out = a;
    out.pred = p;
    return out;
}

} // namespace

void double_rules(const Program& src, DoubledProgram& out,
                  const TransformOptions& opts) {
    SymbolTable& syms = out.symbols;
    for (const Rule& r : src) {
        // (2a): head and positive atoms unchanged, negative literals doubled
        Rule a;
        a.head = r.head;
        for (const Literal& l : r.body) {
            if (l.positive)
                a.body.push_back(l);
            else
                a.body.push_back(
                    Literal{with_pred(l.atom, ensure_doubled(out, l.atom.pred)), false});
        }
        out.rules.push_back(std::move(a));
        out.tags.push_back(RuleTag::User2a);

        // (2b): doubled head, positive atoms doubled, negatives unchanged,
        // plus the trailing marker when the head is a DL-atom
        Rule b;
        b.head = with_pred(r.head, ensure_doubled(out, r.head.pred));
        for (const Literal& l : r.body) {
            if (!l.positive) {
                b.body.push_back(l);
            } else if (opts.skip_guard_doubling && !syms.pred(l.atom.pred).dl) {
                b.body.push_back(l);
            } else {
                b.body.push_back(
                    Literal{with_pred(l.atom, ensure_doubled(out, l.atom.pred)), true});
            }
        }
        bool dl_head = syms.pred(r.head.pred).dl;
        if (dl_head) {
            Atom marker = with_pred(r.head, ensure_marker(out, r.head.pred));
            b.body.push_back(Literal{std::move(marker), false});
        }
        out.rules.push_back(std::move(b));
        out.tags.push_back(dl_head ? RuleTag::User2bI : RuleTag::User2bII);
    }
}

void translate_ontology(const std::vector<NormalAxiom>& reduced, const Ontology& abox,
                        DoubledProgram& out) {
    SymbolTable& syms = out.symbols;
    for (const NormalAxiom& ax : reduced)
        if (ax.kind == NormalAxiom::Kind::F4)
            throw KbError("translate_ontology: form-(4) axiom present; reduce first");

    // register the doubled twin of every ontology predicate up front so the
    // predicate metadata is total over the reduced TBox
    for (const NormalAxiom& ax : reduced) {
        for (PredId c : {ax.c1, ax.c2, ax.rhs})
            if (c != knone && c != kTopC && c != kBotC) ensure_doubled(out, c);
        for (PredId r : {ax.r1, ax.r2, ax.rsup})
            if (r != knone) ensure_doubled(out, r);
    }

    VarId vx = syms.intern_var("X");
    VarId vy = syms.intern_var("Y");
    VarId vz = syms.intern_var("Z");
    auto a1 = [&](PredId p, VarId v) { return Atom{p, {mk_var(v)}}; };
    auto a2 = [&](PredId p, VarId v, VarId w) { return Atom{p, {mk_var(v), mk_var(w)}}; };
    auto push = [&](Rule r, RuleTag t) {
        out.rules.push_back(std::move(r));
        out.tags.push_back(t);
    };

    // (a1)/(a2): assertions, original fact plus guarded doubled fact
    for (const ConceptAssertion& ca : abox.concept_asserts) {
        Rule f;
        f.head = Atom{ca.concept_, {mk_const(ca.indiv)}};
        push(f, RuleTag::A1);
        Rule d;
        d.head = Atom{ensure_doubled(out, ca.concept_), {mk_const(ca.indiv)}};
        d.body.push_back(
            Literal{Atom{ensure_marker(out, ca.concept_), {mk_const(ca.indiv)}}, false});
        push(d, RuleTag::A1);
    }
    for (const RoleAssertion& ra : abox.role_asserts) {
        Rule f;
        f.head = Atom{ra.role, {mk_const(ra.from), mk_const(ra.to)}};
        push(f, RuleTag::A2);
        Rule d;
        d.head = Atom{ensure_doubled(out, ra.role), {mk_const(ra.from), mk_const(ra.to)}};
        d.body.push_back(Literal{
            Atom{ensure_marker(out, ra.role), {mk_const(ra.from), mk_const(ra.to)}},
            false});
        push(d, RuleTag::A2);
    }

    // An axiom slot of `top` holds for every named individual: the body
    // conjunct is simply dropped; a top left-hand side becomes per-individual
    // facts.
    std::set<ConstId> indivs;
    for (const ConceptAssertion& ca : abox.concept_asserts) indivs.insert(ca.indiv);
    for (const RoleAssertion& ra : abox.role_asserts) {
        indivs.insert(ra.from);
        indivs.insert(ra.to);
    }

    for (const NormalAxiom& ax : reduced) {
        switch (ax.kind) {
        case NormalAxiom::Kind::F1: {
            if (ax.rhs == kBotC) {
                if (ax.c1 == kTopC) break; // caught by the consistency check when inhabited
                // (i1) NC(x) <-
                Rule n;
                n.head = a1(ensure_marker(out, ax.c1), vx);
                push(n, RuleTag::I1);
                break;
            }
            if (ax.c1 == kTopC) {
                // top <= D: D holds for every named individual
                for (ConstId i : indivs) {
                    Rule f;
                    f.head = Atom{ax.rhs, {mk_const(i)}};
                    push(f, RuleTag::C1);
                    Rule d;
                    d.head = Atom{ensure_doubled(out, ax.rhs), {mk_const(i)}};
                    d.body.push_back(
                        Literal{Atom{ensure_marker(out, ax.rhs), {mk_const(i)}}, false});
                    push(d, RuleTag::C1);
                }
                break;
            }
            // (c1) D(x) <- C(x) ; D$d(x) <- C$d(x), not N$D(x)
            Rule f;
            f.head = a1(ax.rhs, vx);
            f.body.push_back(Literal{a1(ax.c1, vx), true});
            push(f, RuleTag::C1);
            Rule d;
            d.head = a1(ensure_doubled(out, ax.rhs), vx);
            d.body.push_back(Literal{a1(ensure_doubled(out, ax.c1), vx), true});
            d.body.push_back(Literal{a1(ensure_marker(out, ax.rhs), vx), false});
            push(d, RuleTag::C1);
            break;
        }
        case NormalAxiom::Kind::F2: {
            std::vector<PredId> cs;
            if (ax.c1 != kTopC) cs.push_back(ax.c1);
            if (ax.c2 != kTopC) cs.push_back(ax.c2);
            if (ax.rhs == kBotC) {
                if (cs.size() == 2) {
                    // (i2) N$C2(x) <- C1(x) ; N$C1(x) <- C2(x)
                    Rule n1;
                    n1.head = a1(ensure_marker(out, cs[1]), vx);
                    n1.body.push_back(Literal{a1(cs[0], vx), true});
                    push(n1, RuleTag::I2);
                    Rule n2;
                    n2.head = a1(ensure_marker(out, cs[0]), vx);
                    n2.body.push_back(Literal{a1(cs[1], vx), true});
                    push(n2, RuleTag::I2);
                } else if (cs.size() == 1) {
                    Rule n;
                    n.head = a1(ensure_marker(out, cs[0]), vx);
                    push(n, RuleTag::I1);
                }
                break;
            }
            if (cs.empty()) break; // top and top <= D: degenerate, handled as F1 upstream
            // (c2) D(x) <- C1(x), C2(x) and the doubled twin
            Rule f;
            f.head = a1(ax.rhs, vx);
            for (PredId c : cs) f.body.push_back(Literal{a1(c, vx), true});
            push(f, RuleTag::C2);
            Rule d;
            d.head = a1(ensure_doubled(out, ax.rhs), vx);
            for (PredId c : cs)
                d.body.push_back(Literal{a1(ensure_doubled(out, c), vx), true});
            d.body.push_back(Literal{a1(ensure_marker(out, ax.rhs), vx), false});
            push(d, RuleTag::C2);
            break;
        }
        case NormalAxiom::Kind::F3: {
            if (ax.rhs == kBotC) {
                // (i3) N$C(y) <- R(x,y) ; N$R(x,y) <- C(y)
                if (ax.c1 != kTopC) {
                    Rule n1;
                    n1.head = a1(ensure_marker(out, ax.c1), vy);
                    n1.body.push_back(Literal{a2(ax.r1, vx, vy), true});
                    push(n1, RuleTag::I3);
                    Rule n2;
                    n2.head = a2(ensure_marker(out, ax.r1), vx, vy);
                    n2.body.push_back(Literal{a1(ax.c1, vy), true});
                    push(n2, RuleTag::I3);
                } else {
                    // exists R.top <= bot: any R edge is contradictory
                    Rule n;
                    n.head = a2(ensure_marker(out, ax.r1), vx, vy);
                    push(n, RuleTag::I3);
                }
                break;
            }
            // (c3) D(x) <- R(x,y), C(y) and the doubled twin
            Rule f;
            f.head = a1(ax.rhs, vx);
            f.body.push_back(Literal{a2(ax.r1, vx, vy), true});
            if (ax.c1 != kTopC) f.body.push_back(Literal{a1(ax.c1, vy), true});
            push(f, RuleTag::C3);
            Rule d;
            d.head = a1(ensure_doubled(out, ax.rhs), vx);
            d.body.push_back(Literal{a2(ensure_doubled(out, ax.r1), vx, vy), true});
            if (ax.c1 != kTopC)
                d.body.push_back(Literal{a1(ensure_doubled(out, ax.c1), vy), true});
            d.body.push_back(Literal{a1(ensure_marker(out, ax.rhs), vx), false});
            push(d, RuleTag::C3);
            break;
        }
        case NormalAxiom::Kind::F4:
            break; // unreachable, rejected above
        case NormalAxiom::Kind::RI1: {
            // (r1) S(x,y) <- R(x,y) and the doubled twin
            Rule f;
            f.head = a2(ax.rsup, vx, vy);
            f.body.push_back(Literal{a2(ax.r1, vx, vy), true});
            push(f, RuleTag::R1);
            Rule d;
            d.head = a2(ensure_doubled(out, ax.rsup), vx, vy);
            d.body.push_back(Literal{a2(ensure_doubled(out, ax.r1), vx, vy), true});
            d.body.push_back(Literal{a2(ensure_marker(out, ax.rsup), vx, vy), false});
            push(d, RuleTag::R1);
            break;
        }
        case NormalAxiom::Kind::RI2: {
            // (r2) T(x,z) <- R(x,y), S(y,z) and the doubled twin
            Rule f;
            f.head = a2(ax.rsup, vx, vz);
            f.body.push_back(Literal{a2(ax.r1, vx, vy), true});
            f.body.push_back(Literal{a2(ax.r2, vy, vz), true});
            push(f, RuleTag::R2);
            Rule d;
            d.head = a2(ensure_doubled(out, ax.rsup), vx, vz);
            d.body.push_back(Literal{a2(ensure_doubled(out, ax.r1), vx, vy), true});
            d.body.push_back(Literal{a2(ensure_doubled(out, ax.r2), vy, vz), true});
            d.body.push_back(Literal{a2(ensure_marker(out, ax.rsup), vx, vz), false});
            push(d, RuleTag::R2);
            break;
        }
        }
    }
}

CompiledKB build_combined(const HybridKB& kb, const TransformOptions& opts) {
    CompiledKB out;
    out.program.symbols = kb.symbols;
    out.normalized = normalize(kb.ontology.tbox, out.program.symbols);
    out.maps = classify(out.normalized, out.program.symbols);

    ConsistencyResult cons =
        check_ontology_consistency(out.normalized, kb.ontology, out.program.symbols);
    if (!cons.consistent)
        throw OntologyInconsistentError(out.program.symbols.const_name(cons.witness));

    out.reduced = reduce_tbox(out.normalized, out.maps);
    double_rules(kb.program, out.program, opts);
    translate_ontology(out.reduced, kb.ontology, out.program);

    out.program.universe = kb.individuals();
    return out;
}

} // namespace mknf
