#pragma once

#include "mknf/kb.hpp"

#include <string>
#include <vector>

// Text format for hybrid knowledge bases and queries.
//
//   %tbox   C <= D.  C and E <= bot.  exists r.C <= D.  r o s <= t.
//   %abox   C(b).  r(a,b).
//   %rules  p(X) :- not D(X), o(X).  o(a).
//
// `#` starts a comment. `A <= not B` is sugar for `A and B <= bot`.
// Variables are uppercase identifiers in rule/query positions, constants
// lowercase. Whether a name is a concept or a role is inferred from use
// (exists-position, chains, binary assertions); DL-ness of a predicate is
// occurrence in %tbox/%abox.

namespace mknf {

class ParseError : public KbError {
public:
    ParseError(SourceLoc loc, const std::string& msg, int exit_code = 2)
        : KbError("line " + std::to_string(loc.line) + ":" + std::to_string(loc.col) +
                  ": " + msg),
          loc(loc), exit_code(exit_code) {}
    SourceLoc loc;
    int exit_code; // 2 syntax, 3 safety/constructor
};

HybridKB parse_kb(std::string_view text);

struct ParsedQuery {
    Rule rule;                      // head q(X...) with the answer variables
    std::vector<VarId> answer_vars; // in order of first occurrence
    std::vector<std::string> warnings;
};

// Wraps the literal list as a fresh rule and enforces DL-safety. Unknown
// predicates are interned as non-DL and reported as warnings.
ParsedQuery parse_query(std::string_view text, HybridKB& kb);

enum class Format { Text, Structured };

std::string serialize_program(const Program& p, const SymbolTable& syms,
                              Format format = Format::Text,
                              const std::vector<std::string>* tag_comments = nullptr);
std::string serialize_tbox(const std::vector<NormalAxiom>& axioms,
                           const SymbolTable& syms, Format format = Format::Text);

enum class Truth : uint8_t { True, Undefined, False };
const char* truth_name(Truth t);
Truth negate(Truth t); // flips true/false, fixes undefined

struct ModelEntry {
    Atom atom;
    Truth value = Truth::False;
    bool inconsistent = false; // true while the doubled atom is false
};

std::string serialize_model(const std::vector<ModelEntry>& entries,
                            const SymbolTable& syms, Format format = Format::Text);

} // namespace mknf
