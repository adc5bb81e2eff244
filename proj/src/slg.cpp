#include "mknf/slg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace mknf {
namespace slg {

namespace {

using Subst = std::unordered_map<uint32_t, Term>;

Term walk(Term t, const Subst& sub) {
    while (t.var) {
        auto it = sub.find(t.id);
        if (it == sub.end()) break;
        t = it->second;
    }
    return t;
}

bool unify(const Atom& a, const Atom& b, Subst& sub) {
    if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
        Term x = walk(a.args[i], sub), y = walk(b.args[i], sub);
        if (x.var) {
            if (!y.var || x.id != y.id) sub[x.id] = y;
        } else if (y.var) {
            sub[y.id] = x;
        } else if (x.id != y.id) {
            return false;
        }
    }
    return true;
}

Atom subst_apply(const Atom& a, const Subst& sub) {
    Atom out = a;
    for (Term& t : out.args) t = walk(t, sub);
    return out;
}

uint32_t max_var(const Atom& a, uint32_t m) {
    for (const Term& t : a.args)
        if (t.var && t.id + 1 > m) m = t.id + 1;
    return m;
}

// one-way instance check: does `general` subsume `ground`?
bool covers_atom(const Atom& general, const Atom& ground) {
    if (general.pred != ground.pred || general.args.size() != ground.args.size())
        return false;
    Subst sub;
    for (size_t i = 0; i < general.args.size(); ++i) {
        Term g = walk(general.args[i], sub);
        const Term& c = ground.args[i];
        if (g.var)
            sub[g.id] = c;
        else if (g.id != c.id)
            return false;
    }
    return true;
}

} // namespace

Engine::Engine(const Program& program, const SymbolTable& syms, Strategy strategy,
               uint64_t step_budget)
    : syms_(syms), strategy_(strategy), step_budget_(step_budget) {
    for (const Rule& r : program) add_rule(r);
}

void Engine::add_rule(const Rule& r) {
    uint32_t i = static_cast<uint32_t>(rules_.size());
    rules_.push_back(r);
    rules_by_pred_[r.head.pred].push_back(i);
    if (r.body.empty() && !r.head.args.empty() && !r.head.args[0].var)
        fact_index_[r.head.pred][r.head.args[0].id].push_back(i);
    else
        nonfact_by_pred_[r.head.pred].push_back(i);
}

Atom Engine::canonicalize(const Atom& a, std::unordered_map<uint32_t, uint32_t>& ren) const {
    Atom out = a;
    for (Term& t : out.args) {
        if (!t.var) continue;
        auto it = ren.find(t.id);
        if (it == ren.end())
            it = ren.emplace(t.id, static_cast<uint32_t>(ren.size())).first;
        t.id = it->second;
    }
    return out;
}

std::string Engine::atom_key(const Atom& a) const {
    std::string s = std::to_string(a.pred);
    for (const Term& t : a.args) {
        s += t.var ? ",v" : ",c";
        s += std::to_string(t.id);
    }
    return s;
}

std::string Engine::answer_key(const Atom& head, const std::vector<DelayElt>& delays) const {
    std::string s = atom_key(head);
    std::vector<std::string> ds;
    for (const DelayElt& e : delays)
        ds.push_back(std::string(e.positive ? "+" : "-") + std::to_string(e.table) + ":" +
                     atom_key(e.atom));
    std::sort(ds.begin(), ds.end());
    for (const std::string& d : ds) {
        s += '|';
        s += d;
    }
    return s;
}

void Engine::push_node_task(Node&& n) {
    pending_nodes_.push_back(std::move(n));
    Task t;
    t.kind = Task::NodeStep;
    t.a = static_cast<uint32_t>(pending_nodes_.size() - 1);
    push_task(t);
}

void Engine::push_task(Task t) { queue_.push_back(t); }

std::optional<Engine::Task> Engine::pop_task() {
    if (queue_.empty()) return std::nullopt;
    Task t;
    if (strategy_ == Strategy::Local) {
        t = queue_.back();
        queue_.pop_back();
    } else {
        t = queue_.front();
        queue_.pop_front();
    }
    return t;
}

Engine::SgId Engine::table_for(const Atom& call) {
    std::unordered_map<uint32_t, uint32_t> ren;
    Atom canon = canonicalize(call, ren);
    std::string key = atom_key(canon);
    auto it = table_ids_.find(key);
    if (it != table_ids_.end()) return it->second;
    SgId id = static_cast<SgId>(tables_.size());
    tables_.push_back(Table{});
    tables_[id].call = canon;
    table_ids_.emplace(key, id);
    seed_table(id);
    return id;
}

// NEW SUBGOAL: resolve the canonical call against every program clause.
void Engine::seed_table(SgId t) {
    const Atom call = tables_[t].call; // copy: tables_ may grow
    auto resolve_rule = [&](uint32_t ri) {
        const Rule& r = rules_[ri];
        uint32_t base = max_var(call, 0);
        Subst ren_rule; // standardize apart
        auto rn = [&](const Atom& a) {
            Atom out = a;
            for (Term& tm : out.args) {
                if (!tm.var) continue;
                auto it = ren_rule.find(tm.id);
                if (it == ren_rule.end()) {
                    uint32_t next = base + static_cast<uint32_t>(ren_rule.size());
                    it = ren_rule.emplace(tm.id, mk_var(next)).first;
                }
                tm = it->second;
            }
            return out;
        };
        Atom head = rn(r.head);
        Subst sub;
        if (!unify(call, head, sub)) return;
        Node n;
        n.root = t;
        n.head = subst_apply(call, sub);
        for (const Literal& l : r.body)
            n.goals.push_back(Literal{subst_apply(rn(l.atom), sub), l.positive});
        push_node_task(std::move(n));
    };

    if (!rules_by_pred_.count(call.pred)) return;
    if (!call.args.empty() && !call.args[0].var) {
        auto fit = fact_index_.find(call.pred);
        if (fit != fact_index_.end()) {
            auto bucket = fit->second.find(call.args[0].id);
            if (bucket != fit->second.end())
                for (uint32_t ri : bucket->second) resolve_rule(ri);
        }
        auto nit = nonfact_by_pred_.find(call.pred);
        if (nit != nonfact_by_pred_.end())
            for (uint32_t ri : nit->second) resolve_rule(ri);
    } else {
        for (uint32_t ri : rules_by_pred_.at(call.pred)) resolve_rule(ri);
    }
}

void Engine::produce_answer(SgId t, Node&& node) {
    Table& tab = tables_[t];
    if (tab.complete) return;
    std::unordered_map<uint32_t, uint32_t> ren;
    Atom head = canonicalize(node.head, ren);
    std::string key = answer_key(head, node.delays);
    if (tab.answer_index.count(key)) return;
    tab.answer_index.emplace(key, static_cast<uint32_t>(tab.answers.size()));
    Answer ans;
    ans.head = head;
    ans.delays = std::move(node.delays);
    bool uncond = ans.delays.empty();
    tab.answers.push_back(std::move(ans));
    auto& hs = tab.head_state[atom_key(head)];
    hs.first += 1;
    hs.second = hs.second || uncond;
    for (size_t ci = 0; ci < tab.consumers.size(); ++ci) {
        if (tab.consumers[ci].dead) continue;
        Task task;
        task.kind = Task::Drain;
        task.a = t;
        task.b = static_cast<uint32_t>(ci);
        push_task(task);
    }
}

void Engine::drain_consumer(SgId t, size_t ci) {
    Table& tab = tables_[t];
    if (ci >= tab.consumers.size()) return;
    Consumer& c = tab.consumers[ci];
    if (c.dead) return;
    while (c.cursor < tables_[t].answers.size()) {
        uint32_t ai = static_cast<uint32_t>(c.cursor++);
        const Answer ans = tables_[t].answers[ai]; // copy: vector may grow
        if (ans.deleted) continue;
        Consumer& cc = tables_[t].consumers[ci];
        uint32_t base = max_var(cc.node.head, 0);
        for (const Literal& l : cc.node.goals) base = max_var(l.atom, base);
        Atom ahead = ans.head;
        for (Term& tm : ahead.args)
            if (tm.var) tm.id += base;
        Subst sub;
        if (!unify(cc.node.goals[0].atom, ahead, sub)) continue;
        Node child;
        child.root = cc.node.root;
        child.head = subst_apply(cc.node.head, sub);
        child.delays = cc.node.delays;
        if (!ans.delays.empty()) child.delays.push_back(DelayElt{true, t, ans.head});
        for (size_t i = 1; i < cc.node.goals.size(); ++i)
            child.goals.push_back(
                Literal{subst_apply(cc.node.goals[i].atom, sub), cc.node.goals[i].positive});
        push_node_task(std::move(child));
    }
}

void Engine::resolve_negative(Node&& node, SgId t, const Atom& ground_atom) {
    bool uncond = false, any = false;
    covers(t, ground_atom, &uncond, &any);
    if (uncond) return; // NEGATIVE RETURN: the node fails
    if (any) node.delays.push_back(DelayElt{false, t, ground_atom}); // DELAYING
    node.goals.erase(node.goals.begin());
    push_node_task(std::move(node));
}

bool Engine::covers(SgId t, const Atom& ground_atom, bool* unconditional,
                    bool* any_live) const {
    const Table& tab = tables_[t];
    bool uncond = false, any = false;
    for (const Answer& a : tab.answers) {
        if (a.deleted) continue;
        if (!covers_atom(a.head, ground_atom)) continue;
        any = true;
        if (a.delays.empty()) {
            uncond = true;
            break;
        }
    }
    if (unconditional) *unconditional = uncond;
    if (any_live) *any_live = any;
    return any;
}

void Engine::step_node(Node node) {
    if (node.goals.empty()) {
        produce_answer(node.root, std::move(node));
        return;
    }
    // selection: leftmost positive literal if any, else the leftmost literal
    size_t sel = 0;
    for (size_t i = 0; i < node.goals.size(); ++i)
        if (node.goals[i].positive) {
            sel = i;
            break;
        }
    if (!node.goals[sel].positive) sel = 0;
    std::rotate(node.goals.begin(), node.goals.begin() + sel,
                node.goals.begin() + sel + 1);

    Literal l = node.goals[0];
    if (l.positive) {
        SgId t = table_for(l.atom);
        Table& tab = tables_[t];
        Consumer c;
        c.node = std::move(node);
        tab.consumers.push_back(std::move(c));
        size_t ci = tab.consumers.size() - 1;
        drain_consumer(t, ci);
        if (tab.complete) tab.consumers[ci].dead = true;
        return;
    }
    if (!l.atom.ground())
        throw KbError("slg: non-ground negative literal selected (floundering)");
    SgId t = table_for(l.atom);
    if (tables_[t].complete) {
        resolve_negative(std::move(node), t, l.atom);
        return;
    }
    bool uncond = false;
    covers(t, l.atom, &uncond, nullptr);
    if (uncond) return; // fails now; no need to wait for completion
    NegWaiter w;
    w.node = std::move(node);
    tables_[t].neg_waiters.push_back(std::move(w));
}

void Engine::run() {
    for (;;) {
        while (auto task = pop_task()) {
            if (++steps_ > step_budget_) throw KbError("slg: step budget exceeded");
            if (task->kind == Task::Drain) {
                drain_consumer(task->a, task->b);
            } else {
                Node n = std::move(pending_nodes_[task->a]);
                step_node(std::move(n));
            }
        }
        bool any_incomplete = false;
        for (const Table& t : tables_)
            if (!t.complete) {
                any_incomplete = true;
                break;
            }
        if (!any_incomplete) break;
        bool changed = complete_scc_pass();
        if (!changed && queue_.empty())
            throw KbError("slg: internal scheduling stall");
    }
    // final fixpoint of simplification + answer completion
    auto live_count = [&]() {
        size_t n = 0;
        for (const Table& t : tables_)
            for (const Answer& a : t.answers)
                if (!a.deleted) ++n;
        return n;
    };
    for (;;) {
        simplify();
        size_t before = live_count();
        answer_completion();
        simplify();
        if (live_count() == before) break;
    }
}

bool Engine::complete_scc_pass() {
    std::vector<SgId> inc;
    for (SgId i = 0; i < tables_.size(); ++i)
        if (!tables_[i].complete) inc.push_back(i);
    if (inc.empty()) return false;
    std::unordered_map<SgId, uint32_t> pos;
    for (uint32_t i = 0; i < inc.size(); ++i) pos.emplace(inc[i], i);

    size_t n = inc.size();
    std::vector<std::vector<uint32_t>> out(n);
    std::vector<std::vector<std::pair<uint32_t, bool>>> out_sign(n);
    for (uint32_t i = 0; i < n; ++i) {
        const Table& tab = tables_[inc[i]];
        for (const Consumer& c : tab.consumers) {
            if (c.dead) continue;
            auto it = pos.find(c.node.root);
            if (it != pos.end()) {
                out[it->second].push_back(i);
                out_sign[it->second].emplace_back(i, false);
            }
        }
        for (const NegWaiter& w : tab.neg_waiters) {
            if (w.dead) continue;
            auto it = pos.find(w.node.root);
            if (it != pos.end()) {
                out[it->second].push_back(i);
                out_sign[it->second].emplace_back(i, true);
            }
        }
    }

    // Tarjan, iterative; SCCs come out sinks-first (reverse topological order
    // of the condensation)
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<uint32_t> stack;
    std::vector<std::vector<uint32_t>> sccs;
    int next_index = 0;
    std::vector<std::pair<uint32_t, size_t>> call;
    for (uint32_t s = 0; s < n; ++s) {
        if (index[s] != -1) continue;
        call.emplace_back(s, 0);
        index[s] = low[s] = next_index++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!call.empty()) {
            auto& [u, ci] = call.back();
            if (ci < out[u].size()) {
                uint32_t v = out[u][ci++];
                if (index[v] == -1) {
                    index[v] = low[v] = next_index++;
                    stack.push_back(v);
                    on_stack[v] = true;
                    call.emplace_back(v, 0);
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
            } else {
                if (low[u] == index[u]) {
                    std::vector<uint32_t> scc;
                    for (;;) {
                        uint32_t v = stack.back();
                        stack.pop_back();
                        on_stack[v] = false;
                        scc.push_back(v);
                        if (v == u) break;
                    }
                    sccs.push_back(std::move(scc));
                }
                uint32_t done = u;
                call.pop_back();
                if (!call.empty())
                    low[call.back().first] = std::min(low[call.back().first], low[done]);
            }
        }
    }

    // Sweep the condensation sinks-first: complete every SCC whose remaining
    // dependencies are already complete and that has no internal negative
    // edge; on the first negation-blocked SCC, delay its internal waiters and
    // hand control back to the resolution loop.
    std::vector<uint32_t> scc_of(n, 0);
    for (uint32_t si = 0; si < sccs.size(); ++si)
        for (uint32_t v : sccs[si]) scc_of[v] = si;
    std::vector<bool> completed_now(n, false);
    bool changed = false;
    for (uint32_t si = 0; si < sccs.size(); ++si) {
        const std::vector<uint32_t>& scc = sccs[si];
        auto in_scc = [&](uint32_t v) { return scc_of[v] == si; };
        bool deps_done = true, has_neg = false;
        for (uint32_t u : scc)
            for (auto [v, negative] : out_sign[u]) {
                if (!in_scc(v) && !completed_now[v]) deps_done = false;
                if (negative && in_scc(v)) has_neg = true;
            }
        if (!deps_done) continue;
        if (has_neg) {
            for (uint32_t v : scc) {
                Table& tab = tables_[inc[v]];
                for (NegWaiter& w : tab.neg_waiters) {
                    if (w.dead) continue;
                    auto it = pos.find(w.node.root);
                    if (it == pos.end() || !in_scc(it->second)) continue;
                    w.dead = true;
                    changed = true;
                    Node node = std::move(w.node);
                    Atom a = node.goals[0].atom;
                    bool uncond = false;
                    covers(inc[v], a, &uncond, nullptr);
                    if (uncond) continue; // fails outright
                    node.delays.push_back(DelayElt{false, inc[v], a});
                    node.goals.erase(node.goals.begin());
                    push_node_task(std::move(node));
                }
            }
            return changed;
        }
        std::vector<SgId> done;
        for (uint32_t v : scc) {
            completed_now[v] = true;
            tables_[inc[v]].complete = true;
            changed = true;
            done.push_back(inc[v]);
            for (Consumer& c : tables_[inc[v]].consumers) c.dead = true;
        }
        for (SgId t : done) {
            auto waiters = std::move(tables_[t].neg_waiters);
            tables_[t].neg_waiters.clear();
            for (NegWaiter& w : waiters) {
                if (w.dead) continue;
                Node node = std::move(w.node);
                Atom a = node.goals[0].atom;
                resolve_negative(std::move(node), t, a);
            }
        }
        if (!queue_.empty()) break; // resumed work may change the graph
    }
    if (changed) simplify();
    return changed;
}

void Engine::delete_answer(SgId t, uint32_t idx) {
    Table& tab = tables_[t];
    Answer& a = tab.answers[idx];
    if (a.deleted) return;
    a.deleted = true;
    tab.head_state[atom_key(a.head)].first -= 1;
}

void Engine::simplify() {
    bool changed = true;
    while (changed) {
        changed = false;
        for (SgId t = 0; t < tables_.size(); ++t) {
            Table& tab = tables_[t];
            for (uint32_t ai = 0; ai < tab.answers.size(); ++ai) {
                Answer& a = tab.answers[ai];
                if (a.deleted || a.delays.empty()) continue;
                std::vector<DelayElt> keep;
                bool del = false;
                for (const DelayElt& e : a.delays) {
                    const Table& et = tables_[e.table];
                    if (e.positive) {
                        auto hs = et.head_state.find(atom_key(e.atom));
                        bool live = hs != et.head_state.end() && hs->second.first > 0;
                        bool uncond = hs != et.head_state.end() && hs->second.second;
                        if (uncond) {
                            changed = true;
                            continue; // supported unconditionally: drop element
                        }
                        if (!live) {
                            del = true; // support vanished
                            break;
                        }
                        keep.push_back(e);
                    } else {
                        bool uncond = false, any = false;
                        covers(e.table, e.atom, &uncond, &any);
                        if (uncond) {
                            del = true; // negated atom proved true
                            break;
                        }
                        if (et.complete && !any) {
                            changed = true;
                            continue; // negation succeeded: drop element
                        }
                        keep.push_back(e);
                    }
                }
                if (del) {
                    delete_answer(t, ai);
                    changed = true;
                } else if (keep.size() != a.delays.size()) {
                    a.delays = std::move(keep);
                    if (a.delays.empty()) tab.head_state[atom_key(a.head)].second = true;
                    changed = true;
                }
            }
        }
    }
}

// Removes answers whose only support runs through positive delay loops.
void Engine::answer_completion() {
    std::unordered_map<std::string, bool> supported;
    auto key_of = [&](SgId t, const Atom& head) {
        return std::to_string(t) + "/" + atom_key(head);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (SgId t = 0; t < tables_.size(); ++t) {
            for (const Answer& a : tables_[t].answers) {
                if (a.deleted) continue;
                std::string k = key_of(t, a.head);
                if (supported[k]) continue;
                bool ok = true;
                for (const DelayElt& e : a.delays) {
                    if (!e.positive) continue;
                    if (!supported[key_of(e.table, e.atom)]) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    supported[k] = true;
                    changed = true;
                }
            }
        }
    }
    for (SgId t = 0; t < tables_.size(); ++t)
        for (uint32_t ai = 0; ai < tables_[t].answers.size(); ++ai) {
            const Answer& a = tables_[t].answers[ai];
            if (!a.deleted && !supported[key_of(t, a.head)]) delete_answer(t, ai);
        }
}

Truth Engine::value(const Atom& ground_atom) {
    if (!ground_atom.ground()) throw KbError("slg: value() needs a ground atom");
    SgId t = table_for(ground_atom);
    run();
    bool uncond = false, any = false;
    covers(t, ground_atom, &uncond, &any);
    if (uncond) return Truth::True;
    if (any) return Truth::Undefined;
    return Truth::False;
}

std::vector<Engine::AnswerRow> Engine::answers(const Atom& goal) {
    SgId t = table_for(goal);
    run();
    std::map<std::string, std::pair<Atom, Truth>> rows;
    for (const Answer& a : tables_[t].answers) {
        if (a.deleted) continue;
        std::string k = to_string(a.head, syms_);
        Truth v = a.delays.empty() ? Truth::True : Truth::Undefined;
        auto it = rows.find(k);
        if (it == rows.end())
            rows.emplace(k, std::make_pair(a.head, v));
        else if (v == Truth::True)
            it->second.second = Truth::True;
    }
    std::vector<AnswerRow> out;
    for (auto& [k, hv] : rows) out.push_back(AnswerRow{hv.first, hv.second});
    return out;
}

std::string Engine::export_forest() const {
    std::vector<std::pair<std::string, SgId>> order;
    for (SgId t = 0; t < tables_.size(); ++t)
        order.emplace_back(to_string(tables_[t].call, syms_), t);
    std::sort(order.begin(), order.end());
    std::ostringstream os;
    for (auto& [name, t] : order) {
        const Table& tab = tables_[t];
        os << "table " << name << (tab.complete ? " complete" : " active") << '\n';
        std::vector<std::string> lines;
        for (const Answer& a : tab.answers) {
            if (a.deleted) continue;
            std::string line = "  answer " + to_string(a.head, syms_);
            if (!a.delays.empty()) {
                std::vector<std::string> ds;
                for (const DelayElt& e : a.delays)
                    ds.push_back(std::string(e.positive ? "" : "not ") +
                                 to_string(e.atom, syms_));
                std::sort(ds.begin(), ds.end());
                line += " | ";
                for (size_t i = 0; i < ds.size(); ++i) line += (i ? ", " : "") + ds[i];
            }
            lines.push_back(line);
        }
        std::sort(lines.begin(), lines.end());
        for (const std::string& l : lines) os << l << '\n';
    }
    return os.str();
}

// --------------------------------------------------------------------------

Truth query_literal(Engine& eng, const DoubledProgram& dp, const Literal& lit) {
    if (lit.positive) return eng.value(lit.atom);
    PredId d = dp.doubled(lit.atom.pred);
    if (d == knone) return Truth::True; // A$d never derivable: not A holds
    Atom da{d, lit.atom.args};
    return negate(eng.value(da));
}

InconsistencyProbe inconsistency_probe(Engine& eng, const DoubledProgram& dp,
                                       const Atom& a) {
    InconsistencyProbe p;
    p.value_a = eng.value(a);
    PredId d = dp.doubled(a.pred);
    p.value_ad = d == knone ? Truth::False : eng.value(Atom{d, a.args});
    p.flagged = p.value_a == Truth::True && p.value_ad == Truth::False;
    return p;
}

std::vector<Engine::AnswerRow> answer_query(Engine& eng, const Rule& query_rule) {
    eng.add_rule(query_rule);
    return eng.answers(query_rule.head);
}

} // namespace slg
} // namespace mknf
