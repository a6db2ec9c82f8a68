#pragma once

#include <map>
#include <string>
#include <vector>

#include "lambdavec/checker.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/rewrite.hpp"

namespace lambdavec {

struct SessionOptions {
    long fuel = 100000;
    bool no_factor = false;
};

// The prelude plus user definitions. Definitions are macros: each stored body
// has all previously known names substituted in, and every stored definition
// carries a derivation that replays.
class Session {
  public:
    explicit Session(SessionOptions opts = {});

    const SessionOptions& options() const { return opts_; }
    void set_fuel(long fuel) { opts_.fuel = fuel; }
    void set_no_factor(bool on) { opts_.no_factor = on; }

    // Parses `let name = term ;` definitions, resolves known names, infers
    // and stores each one. Returns the new names in file order. Throws
    // ParseError/TypeError on the first offending definition.
    std::vector<std::string> load(const std::string& text);

    // Stores one definition from an already resolved body.
    void define(const std::string& name, const TermPtr& body);

    bool has(const std::string& name) const;
    const TermPtr& term(const std::string& name) const;        // throws std::out_of_range
    const DerivPtr& derivation(const std::string& name) const;
    const std::vector<Def>& defs() const { return defs_; }

    // Substitutes every stored definition into a standalone expression.
    TermPtr resolve(const TermPtr& expr) const;

    struct Reduction {
        Trace trace;
        bool exhausted = false;  // a redex remains after the fuel ran out
    };
    // Innermost normalization under the session options; never throws on
    // fuel, the partial trace is in the result.
    Reduction reduce(const TermPtr& expr) const;

    // Prints a term as a canonically ordered sum: summands sorted by their
    // printed form, cores alpha-equal to a stored definition folded back to
    // the definition's name.
    std::string show(const TermPtr& t) const;

    // Canonical type of the term, inferred in the empty context.
    std::string show_type(const TermPtr& t) const;

  private:
    TermPtr fold(const TermPtr& core) const;

    SessionOptions opts_;
    std::vector<Def> defs_;
    std::map<std::string, DerivPtr> derivs_;
};

}  // namespace lambdavec
