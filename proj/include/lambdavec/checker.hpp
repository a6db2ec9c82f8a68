#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lambdavec/rewrite.hpp"
#include "lambdavec/term.hpp"
#include "lambdavec/type.hpp"
#include "lambdavec/typesys.hpp"

namespace lambdavec {

// Typing context: term variables to unit types. Binding an already-present
// name replaces it (lexical shadowing).
struct Context {
    std::map<std::string, TypePtr> vars;

    const TypePtr* lookup(const std::string& x) const;
    Context extended(const std::string& x, const TypePtr& u) const;
    std::set<std::string> free_type_vars() const;
    bool operator==(const Context& o) const;
    std::string to_string() const;
};

enum class Rule { Ax, ZeroI, ArrowI, ArrowE, ForallI, ForallE, ScaleI, SumI, Equiv };
const char* rule_name(Rule r);

// Payload of an application node: the function type decomposed as
//   sum_i fun_coeffs[i] . !prefix...(domain -> results[i])
// the argument as sum_j arg_coeffs[j] . arg_units[j], and for each argument
// summand the unit types substituted for the prefix variables.
struct ArrowEData {
    std::vector<std::string> prefix;
    TypePtr domain;
    std::vector<Scalar> fun_coeffs;
    std::vector<TypePtr> results;
    std::vector<Scalar> arg_coeffs;
    std::vector<TypePtr> arg_units;
    std::vector<std::vector<TypePtr>> substs;  // substs[j][d] replaces prefix[d]
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// One node of a typing derivation. The subject term is erased; premises of
// every rule except ArrowI share the conclusion's context.
struct Derivation {
    Rule rule;
    Context ctx;
    TermPtr term;
    TypePtr type;
    std::vector<DerivPtr> premises;
    std::shared_ptr<const ArrowEData> arrow_e;  // ArrowE only
    std::string binder;                         // ForallI only
    TypePtr inst;                               // ForallE only
};

// Syntax-directed reconstruction over fully annotated terms. Throws
// TypeError. Conclusions are kept in canonical embedded form; a trailing
// equivalence node is appended whenever canonicalization changes the rule's
// natural result type.
DerivPtr infer(const Context& ctx, const TermPtr& t);

struct CheckResult {
    DerivPtr deriv;
    bool exact;      // the inferred type is equivalent to the requested one
    int prec_steps;  // 0 when exact, else length of the precision chain found
};

// infer, then compare with `want`: equivalence re-concludes the derivation at
// `want`; failing that (and when allow_subsumption), a precision chain from
// the inferred type to `want` is searched. Throws TypeError(TypeMismatch)
// with both canonical forms when neither applies.
CheckResult check(const Context& ctx, const TermPtr& t, const TypePtr& want,
                  bool allow_subsumption = true);

// Independent validation: every node is re-checked locally, no search. On
// failure returns false and, when `why` is non-null, stores a node path such
// as root.1.0 with the reason.
bool replay(const DerivPtr& d, std::string* why = nullptr);

// The order on types with factoring evidence supplied as derivations: both
// must replay, share one context, and type the same erased term once scaling
// and equivalence nodes are peeled. Throws MissingEvidence as the fact-based
// overload does.
bool order_leq(const TypePtr& s, const TypePtr& t,
               const std::optional<std::pair<DerivPtr, DerivPtr>>& evidence,
               int budget = kOrderBudget);

// Indented rendering, one sequent per line.
std::string print_derivation(const DerivPtr& d);

// Rewrite callback that instantiates quantifier wrappers of an applied
// function by inferring the argument's (unit) type and matching it against
// the binder annotation. Unconstrained binders become fresh variables; a
// nullopt tells the rewriter the application does not type.
PolyHook checker_poly_hook();

}  // namespace lambdavec
