#pragma once

#include <string>
#include <vector>

#include "lambdavec/term.hpp"
#include "lambdavec/type.hpp"

namespace lambdavec {

// Parses a single term / type; throws ParseError (with line:col) on
// malformed input or trailing garbage.
TermPtr parse_term(const std::string& text);
TypePtr parse_type(const std::string& text);

// A named top-level definition. `term` has all previously defined names
// already substituted in (definitions are macros, resolved at parse time;
// lambda binders shadow definition names as usual).
struct Def {
    std::string name;
    TermPtr term;
};

struct Program {
    std::vector<Def> defs;
};

// Parses a `.lvec` file: a sequence of `let name = term ;` definitions.
// Redefining a name replaces the earlier entry for later splices.
Program parse_program(const std::string& text);

// Substitutes every definition's body for free occurrences of its name.
TermPtr splice(const TermPtr& t, const std::vector<Def>& defs);

}  // namespace lambdavec
