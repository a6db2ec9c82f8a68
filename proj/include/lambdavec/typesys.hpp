#pragma once

#include <optional>
#include <vector>

#include "lambdavec/term.hpp"
#include "lambdavec/type.hpp"

namespace lambdavec {

// One summand of a canonical decomposition. `unit` has canonicalized arrow
// codomains; `key` is its alpha-invariant serialization (bound variables as
// de Bruijn indices, codomain summands in key order).
struct CanonSummand {
    Scalar coeff;
    TypePtr unit;
    std::string key;
};

// Sum of scaled unit types with pairwise distinct units, sorted by key.
// Zero coefficients are kept: 0 . T is a type of its own, never absorbed.
struct CanonType {
    std::vector<CanonSummand> parts;

    std::string key() const;  // coefficients + unit keys; equality = equivalence
    bool operator==(const CanonType& o) const { return key() == o.key(); }
};

CanonType canon(const TypePtr& t);
TypePtr embed(const CanonType& c);  // in key order; coefficient 1 prints bare
std::string to_string(const CanonType& c);  // display order: printed unit text

// Type equivalence: the least congruence with 1.T = T, a.(b.T) = ab.T,
// a.T + b.T = (a+b).T, a.T + a.R = a.(T+R), commutativity, associativity.
bool equiv(const TypePtr& t, const TypePtr& r);

// First-order matching of the unit `pattern` against the unit `target`:
// pattern variables from `vars` bind to unit types; everything else must
// agree up to alpha and up to equivalence inside arrow codomains. Variables
// of `vars` that do not occur in `pattern` are simply absent from the result.
std::optional<std::map<std::string, TypePtr>> match_unit(
    const TypePtr& pattern, const TypePtr& target, const std::set<std::string>& vars);

// One step of the precision preorder on types, in both directions:
//  (a) generalization, wrapping every canonical summand in !X for X drawn
//      from gen_vars (skipped when X appears in gen_avoid);
//  (b) instantiation, when every summand is forall-headed, substituting each
//      candidate from inst_candidates (unit types) for the bound variable.
std::vector<TypePtr> prec_step(const TypePtr& t,
                               const std::vector<TypePtr>& inst_candidates,
                               const std::vector<std::string>& gen_vars,
                               const std::set<std::string>& gen_avoid = {});

inline constexpr int kPreceqBudget = 4096;
inline constexpr int kOrderBudget = 2048;

// Bounded search for a chain of prec steps from t to r, modulo equivalence.
// Instantiation candidates are the unit subterms of both sides plus a fresh
// variable. Sound; incomplete beyond the budget. On success, chain_out (when
// given) receives the number of prec steps in the chain found (0 when t = r
// already holds up to equivalence).
bool preceq(const TypePtr& t, const TypePtr& r, int budget = kPreceqBudget,
            int* chain_out = nullptr);

// Evidence backing an order rule-1 instance: some erased term types both as
// A and as B in one context (conclusions of two replay-valid derivations).
// Scaling both typings justifies (a+b).A below a.A + b.B for any scalars.
struct OrderFact {
    CanonType left;
    CanonType right;
};

// The order on types: bounded derivation search over
//   rule 1  (a+b).A below a.A + b.B      (needs an OrderFact)
//   rule 2  T below T + 0.R
//   rule 3  preceq implies the order
//   rule 4  congruence through +, scaling, arrow codomains, forall bodies
// Sound; incomplete beyond budget. Throws MissingEvidence when the search
// fails, no facts were supplied, and the residual gap has rule-1 shape
// (right side holds extra non-zero summands over shared units).
bool order_leq(const TypePtr& s, const TypePtr& t,
               const std::vector<OrderFact>& facts = {}, int budget = kOrderBudget);

// Order characterisation data for R below T = sum of bj.Vj: R is equivalent
// to delta.W + the kept summands of T, the coefficients balance, and W is
// below V_k in the precision preorder. Extractable for the derivation shapes
// the search actually finds (equivalence, zero padding, single-unit preceq);
// returns nullopt otherwise.
struct OrderSplit {
    Scalar delta;
    TypePtr unit_w;
    std::vector<std::size_t> kept;  // indices into canon(T).parts
    std::size_t k;                  // index with preceq(unit_w, V_k)
};
std::optional<OrderSplit> order_decomposition(const TypePtr& r, const TypePtr& t,
                                              const std::vector<OrderFact>& facts = {},
                                              int budget = kOrderBudget);

// All unit-type subterms (deduplicated), used for instantiation candidates.
std::vector<TypePtr> collect_unit_subterms(const TypePtr& t);

}  // namespace lambdavec
