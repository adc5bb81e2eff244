#include "mknf/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace mknf {

namespace {

struct Token {
    enum Type { Name, Section, LParen, RParen, Comma, Dot, Le, Impl, End };
    Type type;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            SourceLoc loc{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({Token::End, "", loc});
                return out;
            }
            char c = src_[pos_];
            if (c == '%') {
                advance();
                std::string name = ident();
                if (name.empty()) throw ParseError(loc, "expected section name after '%'");
                out.push_back({Token::Section, "%" + name, loc});
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
                out.push_back({Token::Name, ident(), loc});
            } else if (c == '(') {
                advance();
                out.push_back({Token::LParen, "(", loc});
            } else if (c == ')') {
                advance();
                out.push_back({Token::RParen, ")", loc});
            } else if (c == ',') {
                advance();
                out.push_back({Token::Comma, ",", loc});
            } else if (c == '.') {
                advance();
                out.push_back({Token::Dot, ".", loc});
            } else if (c == '<' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                advance();
                advance();
                out.push_back({Token::Le, "<=", loc});
            } else if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                advance();
                advance();
                out.push_back({Token::Impl, ":-", loc});
            } else {
                throw ParseError(loc, std::string("unexpected character '") + c + "'");
            }
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        for (;;) {
            while (pos_ < src_.size() &&
                   std::isspace(static_cast<unsigned char>(src_[pos_])))
                advance();
            if (pos_ < src_.size() && src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }

    std::string ident() {
        std::string s;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
                s += c;
                advance();
            } else {
                break;
            }
        }
        return s;
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

bool is_keyword(const std::string& s) {
    return s == "top" || s == "bot" || s == "and" || s == "not" || s == "exists" ||
           s == "or" || s == "forall";
}

bool upper_initial(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// ---- raw (untyped) syntax trees -------------------------------------------

struct RawName {
    std::string text;
    SourceLoc loc;
};

struct RawConcept {
    enum Kind { Top, Bot, Name, And, Exists, Not } kind = Top;
    RawName name;                  // Name target, Exists role, Not target
    std::vector<RawConcept> kids;  // And children; Exists filler at [0]
    SourceLoc loc;
};

struct RawGci {
    RawConcept lhs, rhs;
    SourceLoc loc;
};
struct RawRi {
    std::vector<RawName> chain;
    RawName super;
    SourceLoc loc;
};
struct RawAmbig { // `X <= Y` with two bare names: GCI or RI, decided later
    RawName lhs, rhs;
    SourceLoc loc;
};
struct RawAssert {
    RawName pred;
    std::vector<RawName> args;
    SourceLoc loc;
};
struct RawLit {
    bool positive = true;
    RawName pred;
    std::vector<RawName> args;
    SourceLoc loc;
};
struct RawRule {
    RawLit head;
    std::vector<RawLit> body;
    SourceLoc loc;
};

struct RawTboxStmt {
    enum Kind { Gci, Ri, Ambig } kind = Gci;
    RawGci gci;
    RawRi ri;
    RawAmbig ambig;
};

struct RawKb {
    std::vector<RawTboxStmt> tstmts; // in source order
    std::vector<RawAssert> asserts;
    std::vector<RawRule> rules;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    RawKb run() {
        RawKb kb;
        while (peek().type != Token::End) {
            if (peek().type != Token::Section)
                throw ParseError(peek().loc, "expected a %tbox, %abox or %rules section");
            std::string sec = eat().text;
            if (sec == "%tbox") {
                while (statement_ahead()) tbox_statement(kb);
            } else if (sec == "%abox") {
                while (statement_ahead()) abox_statement(kb);
            } else if (sec == "%rules") {
                while (statement_ahead()) rule_statement(kb);
            } else {
                throw ParseError(peek().loc, "unknown section '" + sec + "'");
            }
        }
        return kb;
    }

private:
    const Token& peek(size_t k = 0) const {
        return toks_[std::min(idx_ + k, toks_.size() - 1)];
    }
    Token eat() { return toks_[std::min(idx_++, toks_.size() - 1)]; }
    Token expect(Token::Type t, const char* what) {
        if (peek().type != t)
            throw ParseError(peek().loc, std::string("expected ") + what);
        return eat();
    }
    bool statement_ahead() const {
        return peek().type != Token::End && peek().type != Token::Section;
    }

    RawName name_token(const char* what) {
        if (peek().type != Token::Name || is_keyword(peek().text))
            throw ParseError(peek().loc, std::string("expected ") + what);
        Token t = eat();
        return RawName{t.text, t.loc};
    }

    // A chain axiom looks like `R o S (o T)* <= U .`
    bool chain_ahead() const {
        if (peek().type != Token::Name || is_keyword(peek().text)) return false;
        return peek(1).type == Token::Name && peek(1).text == "o";
    }

    void tbox_statement(RawKb& kb) {
        SourceLoc loc = peek().loc;
        if (chain_ahead()) {
            RawRi ri;
            ri.loc = loc;
            ri.chain.push_back(name_token("role name"));
            while (peek().type == Token::Name && peek().text == "o") {
                eat();
                ri.chain.push_back(name_token("role name"));
            }
            expect(Token::Le, "'<='");
            ri.super = name_token("role name");
            expect(Token::Dot, "'.'");
            RawTboxStmt st;
            st.kind = RawTboxStmt::Ri;
            st.ri = std::move(ri);
            kb.tstmts.push_back(std::move(st));
            return;
        }
        RawConcept lhs = concept_expr(false);
        expect(Token::Le, "'<='");
        RawConcept rhs = concept_expr(true);
        expect(Token::Dot, "'.'");
        RawTboxStmt st;
        if (lhs.kind == RawConcept::Name && rhs.kind == RawConcept::Name) {
            st.kind = RawTboxStmt::Ambig;
            st.ambig = RawAmbig{lhs.name, rhs.name, loc};
        } else {
            st.kind = RawTboxStmt::Gci;
            st.gci = RawGci{std::move(lhs), std::move(rhs), loc};
        }
        kb.tstmts.push_back(std::move(st));
    }

    RawConcept concept_expr(bool rhs_top) {
        SourceLoc loc = peek().loc;
        RawConcept first = concept_primary(rhs_top);
        if (first.kind == RawConcept::Not) return first; // sugar: whole rhs only
        if (peek().type == Token::Name && peek().text == "and") {
            RawConcept conj;
            conj.kind = RawConcept::And;
            conj.loc = loc;
            conj.kids.push_back(std::move(first));
            while (peek().type == Token::Name && peek().text == "and") {
                eat();
                RawConcept next = concept_primary(false);
                if (next.kind == RawConcept::Not)
                    throw ParseError(next.loc,
                                     "unsupported constructor: 'not' may only form a "
                                     "disjointness right-hand side",
                                     3);
                conj.kids.push_back(std::move(next));
            }
            return conj;
        }
        if (peek().type == Token::Name && peek().text == "or")
            throw ParseError(peek().loc, "unsupported constructor 'or'", 3);
        return first;
    }

    RawConcept concept_primary(bool rhs_top) {
        SourceLoc loc = peek().loc;
        if (peek().type == Token::LParen) {
            eat();
            RawConcept inner = concept_expr(false);
            if (inner.kind == RawConcept::Not)
                throw ParseError(inner.loc, "unsupported constructor: nested 'not'", 3);
            expect(Token::RParen, "')'");
            return inner;
        }
        if (peek().type != Token::Name)
            throw ParseError(loc, "expected a concept expression");
        const std::string& t = peek().text;
        if (t == "or" || t == "forall")
            throw ParseError(loc, "unsupported constructor '" + t + "'", 3);
        if (t == "top") {
            eat();
            return RawConcept{RawConcept::Top, {}, {}, loc};
        }
        if (t == "bot") {
            eat();
            return RawConcept{RawConcept::Bot, {}, {}, loc};
        }
        if (t == "not") {
            eat();
            if (!rhs_top)
                throw ParseError(loc,
                                 "unsupported constructor: 'not' may only form a "
                                 "disjointness right-hand side",
                                 3);
            RawConcept n;
            n.kind = RawConcept::Not;
            n.loc = loc;
            n.name = name_token("concept name after 'not'");
            return n;
        }
        if (t == "exists") {
            eat();
            RawConcept e;
            e.kind = RawConcept::Exists;
            e.loc = loc;
            e.name = name_token("role name after 'exists'");
            expect(Token::Dot, "'.' after role name");
            RawConcept filler = concept_primary(false);
            if (filler.kind == RawConcept::Not)
                throw ParseError(filler.loc, "unsupported constructor: nested 'not'", 3);
            e.kids.push_back(std::move(filler));
            return e;
        }
        RawConcept c;
        c.kind = RawConcept::Name;
        c.loc = loc;
        c.name = name_token("concept name");
        return c;
    }

    void abox_statement(RawKb& kb) {
        RawAssert as;
        as.loc = peek().loc;
        as.pred = name_token("predicate name");
        expect(Token::LParen, "'('");
        as.args.push_back(name_token("individual name"));
        if (peek().type == Token::Comma) {
            eat();
            as.args.push_back(name_token("individual name"));
        }
        expect(Token::RParen, "')'");
        expect(Token::Dot, "'.'");
        for (const RawName& a : as.args)
            if (upper_initial(a.text))
                throw ParseError(a.loc, "individual names must start lowercase");
        kb.asserts.push_back(std::move(as));
    }

    RawLit literal() {
        RawLit lit;
        lit.loc = peek().loc;
        if (peek().type == Token::Name && peek().text == "not") {
            eat();
            lit.positive = false;
        }
        lit.pred = name_token("predicate name");
        if (peek().type == Token::LParen) {
            eat();
            lit.args.push_back(name_token("term"));
            while (peek().type == Token::Comma) {
                eat();
                lit.args.push_back(name_token("term"));
            }
            expect(Token::RParen, "')'");
        }
        return lit;
    }

    void rule_statement(RawKb& kb) {
        RawRule r;
        r.loc = peek().loc;
        r.head = literal();
        if (!r.head.positive)
            throw ParseError(r.loc, "rule heads must be positive atoms");
        if (peek().type == Token::Impl) {
            eat();
            if (peek().type != Token::Dot) { // `h :- .` allowed as a fact
                r.body.push_back(literal());
                while (peek().type == Token::Comma) {
                    eat();
                    r.body.push_back(literal());
                }
            }
        }
        expect(Token::Dot, "'.'");
        kb.rules.push_back(std::move(r));
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

// ---- concept/role kind inference ------------------------------------------

struct Kinds {
    std::set<std::string> concepts, roles;

    void concept_evidence(const RawName& n, std::set<std::string>* conflicts) {
        if (roles.count(n.text)) conflicts->insert(n.text);
        concepts.insert(n.text);
    }
    void role_evidence(const RawName& n, std::set<std::string>* conflicts) {
        if (concepts.count(n.text)) conflicts->insert(n.text);
        roles.insert(n.text);
    }
};

void collect_concept_names(const RawConcept& c, Kinds& k, std::set<std::string>* conf) {
    switch (c.kind) {
    case RawConcept::Name:
    case RawConcept::Not:
        k.concept_evidence(c.name, conf);
        break;
    case RawConcept::Exists:
        k.role_evidence(c.name, conf);
        collect_concept_names(c.kids[0], k, conf);
        break;
    case RawConcept::And:
        for (const RawConcept& kid : c.kids) collect_concept_names(kid, k, conf);
        break;
    default:
        break;
    }
}

ConceptExpr build_concept(const RawConcept& c, SymbolTable& syms) {
    switch (c.kind) {
    case RawConcept::Top: return ConceptExpr::top();
    case RawConcept::Bot: return ConceptExpr::bottom();
    case RawConcept::Name:
        return ConceptExpr::named(syms.intern_pred(c.name.text, 1, PredKind::Concept));
    case RawConcept::Exists: {
        PredId role = syms.intern_pred(c.name.text, 2, PredKind::Role);
        return ConceptExpr::exists(role, build_concept(c.kids[0], syms));
    }
    case RawConcept::And: {
        std::vector<ConceptExpr> kids;
        kids.reserve(c.kids.size());
        for (const RawConcept& kid : c.kids) kids.push_back(build_concept(kid, syms));
        return ConceptExpr::conj(std::move(kids));
    }
    case RawConcept::Not:
        throw ParseError(c.loc, "internal: unexpected 'not' node");
    }
    return ConceptExpr::top();
}

Atom build_atom(const RawLit& lit, SymbolTable& syms) {
    Atom a;
    try {
        a.pred = syms.intern_pred(lit.pred.text, static_cast<int>(lit.args.size()),
                                  PredKind::Plain);
    } catch (const KbError& e) {
        throw ParseError(lit.loc, e.what(), 3);
    }
    for (const RawName& t : lit.args) {
        if (upper_initial(t.text))
            a.args.push_back(mk_var(syms.intern_var(t.text)));
        else
            a.args.push_back(mk_const(syms.intern_const(t.text)));
    }
    return a;
}

} // namespace

HybridKB parse_kb(std::string_view text) {
    RawKb raw = Parser(Lexer(text).run()).run();

    // Kind inference: roles are evidenced by exists-positions, chains and
    // binary assertions; concepts by every other ontology position. Bare
    // `X <= Y` axioms propagate whichever kind is known; unresolved ones
    // default to concept inclusions.
    Kinds kinds;
    std::set<std::string> conflicts;
    for (const RawTboxStmt& st : raw.tstmts) {
        if (st.kind == RawTboxStmt::Gci) {
            collect_concept_names(st.gci.lhs, kinds, &conflicts);
            collect_concept_names(st.gci.rhs, kinds, &conflicts);
        } else if (st.kind == RawTboxStmt::Ri) {
            for (const RawName& n : st.ri.chain) kinds.role_evidence(n, &conflicts);
            kinds.role_evidence(st.ri.super, &conflicts);
        }
    }
    for (const RawAssert& as : raw.asserts) {
        if (as.args.size() == 1)
            kinds.concept_evidence(as.pred, &conflicts);
        else
            kinds.role_evidence(as.pred, &conflicts);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const RawTboxStmt& st : raw.tstmts) {
            if (st.kind != RawTboxStmt::Ambig) continue;
            const RawAmbig& am = st.ambig;
            bool lr = kinds.roles.count(am.lhs.text), rr = kinds.roles.count(am.rhs.text);
            bool lc = kinds.concepts.count(am.lhs.text), rc = kinds.concepts.count(am.rhs.text);
            if ((lr || rr) && !(lr && rr)) {
                kinds.role_evidence(am.lhs, &conflicts);
                kinds.role_evidence(am.rhs, &conflicts);
                changed = true;
            } else if ((lc || rc) && !(lc && rc)) {
                kinds.concept_evidence(am.lhs, &conflicts);
                kinds.concept_evidence(am.rhs, &conflicts);
                changed = true;
            }
        }
    }
    if (!conflicts.empty())
        throw ParseError(SourceLoc{}, "name used as both concept and role: " +
                                          *conflicts.begin(),
                         3);

    HybridKB kb;
    SymbolTable& syms = kb.symbols;

    auto add_gci = [&](const RawConcept& lhs, const RawConcept& rhs, SourceLoc loc) {
        ConceptExpr l = build_concept(lhs, syms);
        if (rhs.kind == RawConcept::Not) {
            // A <= not B  ~~>  A and B <= bot
            ConceptExpr b = build_concept(
                RawConcept{RawConcept::Name, rhs.name, {}, rhs.loc}, syms);
            TBoxAxiom ax = TBoxAxiom::gci(
                ConceptExpr::conj({std::move(l), std::move(b)}), ConceptExpr::bottom());
            ax.loc = loc;
            kb.ontology.tbox.push_back(std::move(ax));
            return;
        }
        TBoxAxiom ax = TBoxAxiom::gci(std::move(l), build_concept(rhs, syms));
        ax.loc = loc;
        kb.ontology.tbox.push_back(std::move(ax));
    };

    for (const RawTboxStmt& st : raw.tstmts) {
        if (st.kind == RawTboxStmt::Gci) {
            add_gci(st.gci.lhs, st.gci.rhs, st.gci.loc);
        } else if (st.kind == RawTboxStmt::Ri) {
            std::vector<PredId> chain;
            for (const RawName& n : st.ri.chain)
                chain.push_back(syms.intern_pred(n.text, 2, PredKind::Role));
            PredId sup = syms.intern_pred(st.ri.super.text, 2, PredKind::Role);
            TBoxAxiom ax = TBoxAxiom::ri(std::move(chain), sup);
            ax.loc = st.ri.loc;
            kb.ontology.tbox.push_back(std::move(ax));
        } else if (kinds.roles.count(st.ambig.lhs.text)) {
            PredId sub = syms.intern_pred(st.ambig.lhs.text, 2, PredKind::Role);
            PredId sup = syms.intern_pred(st.ambig.rhs.text, 2, PredKind::Role);
            TBoxAxiom ax = TBoxAxiom::ri({sub}, sup);
            ax.loc = st.ambig.loc;
            kb.ontology.tbox.push_back(std::move(ax));
        } else {
            add_gci(RawConcept{RawConcept::Name, st.ambig.lhs, {}, st.ambig.loc},
                    RawConcept{RawConcept::Name, st.ambig.rhs, {}, st.ambig.loc},
                    st.ambig.loc);
        }
    }
    for (const RawAssert& as : raw.asserts) {
        try {
            if (as.args.size() == 1) {
                PredId c = syms.intern_pred(as.pred.text, 1, PredKind::Concept);
                kb.ontology.concept_asserts.push_back(
                    ConceptAssertion{c, syms.intern_const(as.args[0].text)});
            } else {
                PredId r = syms.intern_pred(as.pred.text, 2, PredKind::Role);
                kb.ontology.role_asserts.push_back(
                    RoleAssertion{r, syms.intern_const(as.args[0].text),
                                  syms.intern_const(as.args[1].text)});
            }
        } catch (const KbError& e) {
            throw ParseError(as.loc, e.what(), 3);
        }
    }
    for (const RawRule& rr : raw.rules) {
        Rule r;
        r.loc = rr.loc;
        r.head = build_atom(rr.head, syms);
        for (const RawLit& l : rr.body)
            r.body.push_back(Literal{build_atom(l, syms), l.positive});
        kb.program.push_back(std::move(r));
    }

    // DL flags: a predicate is a DL-predicate iff it occurs in the ontology.
    for (size_t i = 0; i < syms.pred_count(); ++i) {
        PredEntry& e = syms.pred_mut(static_cast<PredId>(i));
        if (e.kind != PredKind::Plain) e.dl = true;
    }

    for (const Rule& r : kb.program) {
        std::vector<VarId> bad = dl_safety_violations(r, syms);
        if (!bad.empty()) {
            std::string names;
            for (VarId v : bad) {
                if (!names.empty()) names += ", ";
                names += syms.var_name(v);
            }
            throw ParseError(r.loc, "rule is not DL-safe; offending variables: " + names,
                             3);
        }
    }
    return kb;
}

ParsedQuery parse_query(std::string_view text, HybridKB& kb) {
    std::vector<Token> toks = Lexer(text).run();
    size_t idx = 0;
    auto peek = [&]() -> const Token& { return toks[std::min(idx, toks.size() - 1)]; };
    auto eat = [&]() -> Token { return toks[std::min(idx++, toks.size() - 1)]; };

    ParsedQuery q;
    SymbolTable& syms = kb.symbols;
    std::vector<RawLit> lits;
    for (;;) {
        RawLit lit;
        lit.loc = peek().loc;
        if (peek().type == Token::Name && peek().text == "not") {
            eat();
            lit.positive = false;
        }
        if (peek().type != Token::Name || is_keyword(peek().text))
            throw ParseError(peek().loc, "expected a query literal");
        Token p = eat();
        lit.pred = RawName{p.text, p.loc};
        if (peek().type == Token::LParen) {
            eat();
            for (;;) {
                if (peek().type != Token::Name || is_keyword(peek().text))
                    throw ParseError(peek().loc, "expected term");
                Token t = eat();
                lit.args.push_back(RawName{t.text, t.loc});
                if (peek().type == Token::Comma) {
                    eat();
                    continue;
                }
                break;
            }
            if (peek().type != Token::RParen)
                throw ParseError(peek().loc, "expected ')'");
            eat();
        }
        lits.push_back(std::move(lit));
        if (peek().type == Token::Comma) {
            eat();
            continue;
        }
        break;
    }
    if (peek().type == Token::Dot) eat();
    if (peek().type != Token::End)
        throw ParseError(peek().loc, "trailing input after query");
    if (lits.empty()) throw ParseError(SourceLoc{}, "empty query");

    Rule r;
    for (const RawLit& l : lits) {
        if (!syms.find_pred(l.pred.text))
            q.warnings.push_back("unknown predicate '" + l.pred.text +
                                 "' (treated as false)");
        r.body.push_back(Literal{build_atom(l, syms), l.positive});
    }
    for (const Literal& l : r.body)
        for (const Term& t : l.atom.args)
            if (t.var && std::find(q.answer_vars.begin(), q.answer_vars.end(), t.id) ==
                             q.answer_vars.end())
                q.answer_vars.push_back(t.id);

    int n = 0;
    std::string qname;
    do {
        qname = "$q" + std::to_string(n++);
    } while (syms.find_pred(qname));
    r.head.pred = syms.intern_pred(qname, static_cast<int>(q.answer_vars.size()),
                                   PredKind::Plain);
    syms.pred_mut(r.head.pred).role = PredRole::Aux;
    for (VarId v : q.answer_vars) r.head.args.push_back(mk_var(v));

    std::vector<VarId> bad = dl_safety_violations(r, syms);
    if (!bad.empty()) {
        std::string names;
        for (VarId v : bad) {
            if (!names.empty()) names += ", ";
            names += syms.var_name(v);
        }
        throw ParseError(SourceLoc{}, "query is not DL-safe; offending variables: " + names,
                         3);
    }
    q.rule = std::move(r);
    return q;
}

// --------------------------------------------------------------------------
// Serialization

const char* truth_name(Truth t) {
    switch (t) {
    case Truth::True: return "true";
    case Truth::Undefined: return "undefined";
    case Truth::False: return "false";
    }
    return "?";
}

Truth negate(Truth t) {
    if (t == Truth::True) return Truth::False;
    if (t == Truth::False) return Truth::True;
    return Truth::Undefined;
}

std::string serialize_program(const Program& p, const SymbolTable& syms, Format format,
                              const std::vector<std::string>* tag_comments) {
    std::ostringstream os;
    if (format == Format::Text) {
        for (size_t i = 0; i < p.size(); ++i) {
            os << to_string(p[i], syms);
            if (tag_comments && i < tag_comments->size())
                os << " #tag: " << (*tag_comments)[i];
            os << '\n';
        }
        return os.str();
    }
    os << "program.size " << p.size() << '\n';
    for (size_t i = 0; i < p.size(); ++i) {
        os << "rule." << i << ".head " << to_string(p[i].head, syms) << '\n';
        std::string body;
        for (size_t j = 0; j < p[i].body.size(); ++j) {
            if (j) body += ", ";
            body += to_string(p[i].body[j], syms);
        }
        os << "rule." << i << ".body " << body << '\n';
        if (tag_comments && i < tag_comments->size())
            os << "rule." << i << ".tag " << (*tag_comments)[i] << '\n';
    }
    return os.str();
}

std::string serialize_tbox(const std::vector<NormalAxiom>& axioms,
                           const SymbolTable& syms, Format format) {
    std::ostringstream os;
    if (format == Format::Structured) {
        os << "tbox.size " << axioms.size() << '\n';
        for (size_t i = 0; i < axioms.size(); ++i)
            os << "tbox." << i << ' ' << to_string(axioms[i], syms) << '\n';
        return os.str();
    }
    for (const NormalAxiom& ax : axioms) os << to_string(ax, syms) << '\n';
    return os.str();
}

std::string serialize_model(const std::vector<ModelEntry>& entries,
                            const SymbolTable& syms, Format format) {
    std::vector<const ModelEntry*> sorted;
    sorted.reserve(entries.size());
    for (const ModelEntry& e : entries) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(), [&](const ModelEntry* a, const ModelEntry* b) {
        return to_string(a->atom, syms) < to_string(b->atom, syms);
    });

    std::ostringstream os;
    if (format == Format::Structured) {
        for (const ModelEntry* e : sorted)
            os << "model." << truth_name(e->value) << ' ' << to_string(e->atom, syms)
               << '\n';
        for (const ModelEntry* e : sorted)
            if (e->inconsistent)
                os << "model.flag " << to_string(e->atom, syms) << '\n';
        return os.str();
    }
    for (Truth v : {Truth::True, Truth::Undefined, Truth::False}) {
        os << truth_name(v) << ':';
        for (const ModelEntry* e : sorted)
            if (e->value == v) os << ' ' << to_string(e->atom, syms);
        os << '\n';
    }
    bool any = false;
    for (const ModelEntry* e : sorted)
        if (e->inconsistent) {
            os << (any ? " " : "inconsistent:") << (any ? "" : " ");
            os << to_string(e->atom, syms);
            any = true;
        }
    if (any) os << '\n';
    return os.str();
}

} // namespace mknf
