#pragma once

#include "mknf/parser.hpp"
#include "mknf/transform.hpp"

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Tabled SLG resolution for the well-founded semantics over function-free
// programs: variant tabling, answer delaying, simplification, completion via
// dependency SCCs, and answer completion. Produces three-valued answers.

namespace mknf {
namespace slg {

enum class Strategy : uint8_t { Local, Batched };

class Engine {
public:
    Engine(const Program& program, const SymbolTable& syms,
           Strategy strategy = Strategy::Local, uint64_t step_budget = 50'000'000);

    // Truth of one ground atom (tables persist across calls).
    Truth value(const Atom& ground_atom);

    struct AnswerRow {
        Atom head;
        Truth value; // True or Undefined
    };
    // All answers to a goal atom (possibly open), sorted, each tagged true or
    // undefined.
    std::vector<AnswerRow> answers(const Atom& goal);

    // Adds a rule (used for installed queries); its head predicate must be
    // fresh.
    void add_rule(const Rule& r);

    std::string export_forest() const;
    uint64_t steps() const { return steps_; }

    const SymbolTable& symbols() const { return syms_; }

private:
    using SgId = uint32_t;
    static constexpr uint32_t kNoId = 0xffffffffu;

    struct DelayElt {
        bool positive;
        SgId table;
        Atom atom; // negative: the ground called atom; positive: the answer head
        friend bool operator==(const DelayElt&, const DelayElt&) = default;
    };

    struct Answer {
        Atom head; // canonicalized against the subgoal
        std::vector<DelayElt> delays;
        bool deleted = false;
    };

    struct Node {
        SgId root = kNoId;
        Atom head;
        std::vector<DelayElt> delays;
        std::vector<Literal> goals; // positives first by selection, not layout
    };

    struct Consumer {
        Node node;          // suspended computation; selected literal = chosen positive
        size_t cursor = 0;  // next answer index to consume
        bool dead = false;
    };

    struct NegWaiter {
        Node node; // selected literal is the first negative goal
        bool dead = false;
    };

    struct Table {
        Atom call; // canonical
        std::vector<Answer> answers;
        std::unordered_map<std::string, uint32_t> answer_index; // key -> index
        // per distinct answer head: live count / unconditional present
        std::unordered_map<std::string, std::pair<uint32_t, bool>> head_state;
        std::vector<Consumer> consumers;
        std::vector<NegWaiter> neg_waiters;
        bool complete = false;
    };

    struct Task {
        enum Kind : uint8_t { NodeStep, Drain } kind = NodeStep;
        uint32_t a = 0, b = 0; // NodeStep: pending node; Drain: (table, consumer)
    };

    // scheduling
    void push_task(Task t);
    void push_node_task(Node&& n);
    std::optional<Task> pop_task();
    void run();
    void step_node(Node node);
    void drain_consumer(SgId table, size_t consumer_idx);
    SgId table_for(const Atom& call);
    void seed_table(SgId t);
    void produce_answer(SgId t, Node&& node);
    bool complete_scc_pass(); // returns whether any state changed
    void resolve_negative(Node&& node, SgId t, const Atom& ground_atom);
    void simplify();
    void answer_completion();
    void delete_answer(SgId t, uint32_t idx);

    // helpers
    Atom canonicalize(const Atom& a, std::unordered_map<uint32_t, uint32_t>& renaming) const;
    std::string atom_key(const Atom& a) const;
    std::string answer_key(const Atom& head, const std::vector<DelayElt>& delays) const;
    bool covers(SgId t, const Atom& ground_atom, bool* unconditional, bool* any_live) const;

    const SymbolTable& syms_;
    std::vector<Rule> rules_;
    std::unordered_map<PredId, std::vector<uint32_t>> rules_by_pred_;
    // fact index: predicate -> first-arg constant -> rule ids (facts only)
    std::unordered_map<PredId, std::unordered_map<uint32_t, std::vector<uint32_t>>> fact_index_;
    std::unordered_map<PredId, std::vector<uint32_t>> nonfact_by_pred_;

    Strategy strategy_;
    uint64_t step_budget_;
    uint64_t steps_ = 0;

    std::vector<Table> tables_;
    std::unordered_map<std::string, SgId> table_ids_;

    std::deque<Task> queue_;
    std::vector<Node> pending_nodes_;
};

// Truth of a ground literal over original predicates: positive literals are
// queried directly, negative literals through the doubled predicate.
Truth query_literal(Engine& eng, const DoubledProgram& dp, const Literal& lit);

struct InconsistencyProbe {
    bool flagged = false;
    Truth value_a = Truth::False;
    Truth value_ad = Truth::False;
};

// Raised iff A is true while A$d is false.
InconsistencyProbe inconsistency_probe(Engine& eng, const DoubledProgram& dp,
                                       const Atom& a);

// Installs the query rule and returns all substitutions with value >=
// undefined, sorted by printed form.
std::vector<Engine::AnswerRow> answer_query(Engine& eng, const Rule& query_rule);

} // namespace slg
} // namespace mknf
