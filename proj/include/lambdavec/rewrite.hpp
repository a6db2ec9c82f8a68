#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lambdavec/term.hpp"
#include "lambdavec/type.hpp"

namespace lambdavec {

// The sixteen reduction rules plus the annotation-level steps (group N) that
// resolve type applications and push quantifier abstractions through linear
// combinations. Group N steps erase to the identity.
enum class RuleId {
    E1,  // 0.t -> 0 (witnessing t)
    E2,  // 1.t -> t
    E3,  // a.0 -> 0
    E4,  // a.(b.t) -> (ab).t
    E5,  // a.(t+r) -> a.t + a.r (over all flattened summands)
    F1,  // a.t + b.t -> (a+b).t
    F2,  // a.t + t -> (a+1).t
    F3,  // t + t -> (1+1).t
    F4,  // t + 0 -> t
    B,   // (\x.t) b -> t[b/x], b a basis term
    A1,  // (t+r) u -> (t)u + (r)u
    A2,  // (t)(r+u) -> (t)r + (t)u
    A3,  // (a.t) r -> a.(t)r
    A4,  // (t)(a.r) -> a.(t)r
    A5,  // (0) t -> 0
    A6,  // (t) 0 -> 0
    NTyBeta,   // (/\X.t)[U] -> t[U/X]
    NTyAppSum,    // (t+r)[U] -> t[U] + r[U]
    NTyAppScale,  // (a.t)[U] -> a.(t[U])
    NTyAppZero,   // 0<w>[U] -> 0<w[U]>
    NTyLamSum,    // /\X.(t+r) -> /\X.t + /\X.r
    NTyLamScale,  // /\X.(a.t) -> a./\X.t
    NTyLamZero,   // /\X.0<w> -> 0</\X.w>
};

enum class RuleGroup { E, F, B, A, N };
RuleGroup group(RuleId r);
const char* rule_id_name(RuleId r);

// A path selects a subterm: abstractions, scalings, type nodes descend with
// 0; applications use 0 (function) and 1 (argument); a sum node addresses its
// flattened summands directly, so reassociation does not move positions.
using Path = std::vector<int>;
std::string path_string(const Path& p);
TermPtr subterm_at(const TermPtr& t, const Path& p);

struct RewriteStep {
    RuleId rule;
    Path path;
    TermPtr before;      // whole term
    TermPtr after;       // whole term
    TermPtr redex;       // the matched subterm (binary view for sum pairs)
    TermPtr contractum;  // what replaced it
    // For F1-F3 only: the two matched cores, unscaled, for typing evidence.
    TermPtr f_left;
    TermPtr f_right;
};

struct Trace {
    TermPtr initial;
    std::vector<RewriteStep> steps;
    TermPtr final_term;
};
std::string to_string(const Trace& tr);  // one line per step

// Callback instantiating the quantifier wrappers of an applied function:
// given the wrapper binders, the bound variable's annotation, the basis
// argument, and the annotations of enclosing binders, returns the unit types
// to substitute for the binders, or nullopt when the application does not
// type. Without it, beta through quantifier wrappers is unavailable.
using PolyHook = std::function<std::optional<std::vector<TypePtr>>(
    const std::vector<std::string>& binders, const TypePtr& ann, const TermPtr& arg,
    const std::map<std::string, TypePtr>& enclosing)>;

enum class Strategy {
    Innermost,    // deepest position first, algebraic before beta at a node
    FactorFirst,  // any factoring step anywhere first
    UnfoldFirst,  // any beta step anywhere first
};
enum class RuleFilter { All, NoFactor };  // NoFactor drops F1-F3, keeps F4

// Every redex of the term under the context closure, sums matched modulo
// associativity and commutativity. Empty means normal form.
std::vector<RewriteStep> one_step(const TermPtr& t, const PolyHook& hook = {});

// The first step under the strategy, or nullopt at a (filtered) normal form.
std::optional<RewriteStep> pick_step(const TermPtr& t, Strategy s, RuleFilter f,
                                     const PolyHook& hook = {});

// Repeated pick_step until normal form. Throws FuelExhausted past `fuel`
// steps.
Trace normalize(const TermPtr& t, long fuel, Strategy s = Strategy::Innermost,
                const PolyHook& hook = {});
Trace normalize_no_F(const TermPtr& t, long fuel, Strategy s = Strategy::Innermost,
                     const PolyHook& hook = {});

// Canonical key of the erased form modulo reassociation, commutativity and
// renaming; equal keys identify terms up to AC and alpha.
std::string ac_key(const TermPtr& t);
// As above with annotations and zero witnesses participating.
std::string ac_key_annotated(const TermPtr& t);

// Breadth-first search of both reduction closures for a common reduct modulo
// AC and alpha of the erased forms. nullopt means not found within fuel.
std::optional<TermPtr> join(const TermPtr& a, const TermPtr& b, long fuel,
                            const PolyHook& hook = {});

// Re-derives the step from its before term: same rule, same position, same
// result up to annotated AC and alpha.
bool replay_step(const RewriteStep& s, const PolyHook& hook = {});

}  // namespace lambdavec
