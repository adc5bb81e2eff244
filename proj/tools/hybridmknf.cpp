#include "mknf/classifier.hpp"
#include "mknf/kb.hpp"
#include "mknf/parser.hpp"
#include "mknf/slg.hpp"
#include "mknf/transform.hpp"
#include "mknf/wf.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace mknf;

namespace {

// exit codes: 0 ok/true, 1 query false, 2 parse error, 3 safety/constructor
// error, 4 undefined, 5 ontology inconsistent, 6 MKNF-inconsistency flagged
enum ExitCode {
    kOk = 0,
    kFalse = 1,
    kParseError = 2,
    kSafetyError = 3,
    kUndefined = 4,
    kOntologyInconsistent = 5,
    kMknfInconsistent = 6,
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KbError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    std::string file;
    std::string query_text;
    std::string format = "text";
    std::string strategy = "local";
    bool trace = false;
    size_t ground_cap = 2'000'000;
    size_t unfounded_cap = 14;
    uint64_t step_budget = 50'000'000;
};

Format out_format(const Options& o) {
    return o.format == "structured" ? Format::Structured : Format::Text;
}

slg::Strategy strategy_of(const Options& o) {
    return o.strategy == "batched" ? slg::Strategy::Batched : slg::Strategy::Local;
}

int cmd_classify(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    ClassificationMaps maps = classify(nt, kb.symbols);
    std::cout << serialize_classification(maps, kb.symbols,
                                          out_format(o) == Format::Structured);
    return kOk;
}

int cmd_reduce(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    ClassificationMaps maps = classify(nt, kb.symbols);
    std::vector<NormalAxiom> reduced = reduce_tbox(nt, maps);
    std::cout << serialize_tbox(reduced, kb.symbols, out_format(o));
    return kOk;
}

int cmd_translate(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    CompiledKB c = build_combined(kb);
    std::vector<std::string> tags = c.program.tag_names();
    std::cout << serialize_program(c.program.rules, c.program.symbols, out_format(o),
                                   &tags);
    return kOk;
}

int cmd_model(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    CompiledKB c = build_combined(kb);
    Program ground =
        ground_instantiation(c.program.rules, c.program.universe, o.ground_cap);
    GroundProgram gp = GroundProgram::build(ground, c.program.symbols);
    BottomUp wf(gp, c.program.symbols, Variant::Doubled);
    FixpointTrace t = wf.alternating(o.trace);
    if (o.trace) {
        for (size_t i = 0; i < t.p_seq.size(); ++i) {
            std::cout << "P_" << i << " =";
            for (uint32_t a : t.p_seq[i].members())
                std::cout << ' ' << gp.atom_name(a, c.program.symbols);
            std::cout << "\nN_" << i << " =";
            for (uint32_t a : t.n_seq[i].members())
                std::cout << ' ' << gp.atom_name(a, c.program.symbols);
            std::cout << '\n';
        }
    }
    ThreeValuedModel m = extract_model(t, gp, c.program);
    std::cout << serialize_model(m.entries, c.program.symbols, out_format(o));
    std::cout << "verdict: "
              << (m.mknf_inconsistent ? "mknf-inconsistent" : "consistent") << '\n';
    return m.mknf_inconsistent ? kMknfInconsistent : kOk;
}

int cmd_check(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    NormalizedTBox nt = normalize(kb.ontology.tbox, kb.symbols);
    ConsistencyResult oc = check_ontology_consistency(nt, kb.ontology, kb.symbols);
    if (!oc.consistent) {
        std::cout << "ontology inconsistent (witness: "
                  << kb.symbols.const_name(oc.witness) << ")\n";
        return kOntologyInconsistent;
    }
    ClassificationMaps maps = classify(nt, kb.symbols);
    std::vector<NormalAxiom> reduced = reduce_tbox(nt, maps);
    DlContext ctx(reduced, kb.ontology, kb.symbols);
    Program ground = ground_instantiation(kb, o.ground_cap);
    GroundProgram gp = GroundProgram::build(ground, kb.symbols);
    ctx.bind(gp, kb.symbols);
    BottomUp wf(gp, kb.symbols, Variant::Original, &ctx);
    FixpointTrace t = wf.alternating(o.trace);
    if (o.trace) {
        for (size_t i = 0; i < t.p_seq.size(); ++i) {
            std::cout << "P_" << i << " =";
            for (uint32_t a : t.p_seq[i].members())
                std::cout << ' ' << gp.atom_name(a, kb.symbols);
            std::cout << "\nN_" << i << " =";
            for (uint32_t a : t.n_seq[i].members())
                std::cout << ' ' << gp.atom_name(a, kb.symbols);
            std::cout << '\n';
        }
    }
    BottomUp::Verdict v = wf.consistency_check(t, true);
    if (v.consistent) {
        std::cout << "MKNF-consistent\n";
        return kOk;
    }
    std::cout << "MKNF-inconsistent (" << v.reason << ")\n";
    return kMknfInconsistent;
}

int run_query(slg::Engine& eng, const DoubledProgram& dp, HybridKB& kb,
              const std::string& text, bool structured) {
    ParsedQuery q = parse_query(text, kb);
    for (const std::string& w : q.warnings) std::cerr << "warning: " << w << '\n';
    if (q.answer_vars.empty() && q.rule.body.size() == 1 && q.rule.body[0].atom.ground()) {
        // single ground literal: answer through the doubled predicate space
        Truth v = slg::query_literal(eng, dp, q.rule.body[0]);
        if (structured)
            std::cout << "query.value " << truth_name(v) << '\n';
        else
            std::cout << truth_name(v) << '\n';
        return v == Truth::True ? kOk : (v == Truth::False ? kFalse : kUndefined);
    }
    auto rows = slg::answer_query(eng, q.rule);
    bool any_true = false, any_undef = false;
    for (const auto& r : rows) {
        any_true |= r.value == Truth::True;
        any_undef |= r.value == Truth::Undefined;
        std::string binding;
        for (size_t i = 0; i < q.answer_vars.size(); ++i) {
            if (i) binding += ", ";
            binding += kb.symbols.var_name(q.answer_vars[i]) + " = " +
                       to_string(r.head.args[i], kb.symbols);
        }
        if (binding.empty()) binding = "yes";
        if (structured)
            std::cout << "query.answer " << truth_name(r.value) << ' ' << binding << '\n';
        else
            std::cout << binding << " : " << truth_name(r.value) << '\n';
    }
    if (rows.empty() && !structured) std::cout << "no\n";
    return any_true ? kOk : (any_undef ? kUndefined : kFalse);
}

int cmd_query(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    CompiledKB c = build_combined(kb);
    // queries intern fresh predicates; the engine must share that table
    HybridKB shadow;
    shadow.symbols = c.program.symbols;
    slg::Engine eng(c.program.rules, shadow.symbols, strategy_of(o), o.step_budget);
    int rc = run_query(eng, c.program, shadow, o.query_text,
                       out_format(o) == Format::Structured);
    return rc;
}

int cmd_repl(const Options& o) {
    HybridKB kb = parse_kb(read_file(o.file));
    CompiledKB c = build_combined(kb);
    HybridKB shadow;
    shadow.symbols = c.program.symbols;
    slg::Engine eng(c.program.rules, shadow.symbols, strategy_of(o), o.step_budget);
    bool trace = o.trace;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        if (line == ":quit" || line == ":q") break;
        try {
            if (line == ":trace on") {
                trace = true;
                continue;
            }
            if (line == ":trace off") {
                trace = false;
                continue;
            }
            if (line.rfind(":probe ", 0) == 0) {
                ParsedQuery q = parse_query(line.substr(7), shadow);
                if (q.rule.body.size() != 1 || !q.rule.body[0].atom.ground() ||
                    !q.rule.body[0].positive) {
                    std::cout << "probe expects one ground atom\n";
                    continue;
                }
                auto p = slg::inconsistency_probe(eng, c.program, q.rule.body[0].atom);
                std::cout << (p.flagged ? "flagged: MKNF-inconsistency" : "not flagged")
                          << " (" << truth_name(p.value_a) << '/'
                          << truth_name(p.value_ad) << ")\n";
                continue;
            }
            run_query(eng, c.program, shadow, line, false);
            if (trace) std::cout << eng.export_forest();
        } catch (const ParseError& e) {
            std::cout << "error: " << e.what() << '\n';
        } catch (const KbError& e) {
            std::cout << "error: " << e.what() << '\n';
        }
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reasoner for hybrid knowledge bases: EL+ ontology + "
                 "non-monotonic rules, answered top-down (tabled SLG) and "
                 "bottom-up (alternating fixpoint)"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* cmd, bool with_query) {
        cmd->add_option("file", o.file, "knowledge base file")->required();
        if (with_query) cmd->add_option("query", o.query_text, "query text")->required();
        cmd->add_option("--format", o.format, "text|structured")
            ->check(CLI::IsMember({"text", "structured"}));
        cmd->add_option("--strategy", o.strategy, "local|batched")
            ->check(CLI::IsMember({"local", "batched"}));
        cmd->add_flag("--trace", o.trace, "dump evaluation traces");
        cmd->add_option("--ground-cap", o.ground_cap, "max ground rules");
        cmd->add_option("--unfounded-cap", o.unfounded_cap, "max atoms for the "
                                                            "unfounded-set checker");
        cmd->add_option("--step-budget", o.step_budget, "SLG operation budget");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "print the S and T maps");
    add_common(classify_cmd, false);
    CLI::App* reduce_cmd = app.add_subcommand("reduce", "print the reduced TBox");
    add_common(reduce_cmd, false);
    CLI::App* translate_cmd =
        app.add_subcommand("translate", "print the compiled doubled program");
    add_common(translate_cmd, false);
    CLI::App* model_cmd =
        app.add_subcommand("model", "bottom-up three-valued model of the compiled KB");
    add_common(model_cmd, false);
    CLI::App* check_cmd =
        app.add_subcommand("check", "MKNF consistency test (bottom-up)");
    add_common(check_cmd, false);
    CLI::App* query_cmd = app.add_subcommand("query", "answer one query top-down");
    add_common(query_cmd, true);
    CLI::App* repl_cmd = app.add_subcommand("repl", "interactive query loop");
    add_common(repl_cmd, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(classify_cmd)) return cmd_classify(o);
        if (app.got_subcommand(reduce_cmd)) return cmd_reduce(o);
        if (app.got_subcommand(translate_cmd)) return cmd_translate(o);
        if (app.got_subcommand(model_cmd)) return cmd_model(o);
        if (app.got_subcommand(check_cmd)) return cmd_check(o);
        if (app.got_subcommand(query_cmd)) return cmd_query(o);
        if (app.got_subcommand(repl_cmd)) return cmd_repl(o);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code;
    } catch (const OntologyInconsistentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOntologyInconsistent;
    } catch (const KbError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParseError;
    }
    return kOk;
}
