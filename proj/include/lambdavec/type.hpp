#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>

#include "lambdavec/scalar.hpp"

namespace lambdavec {

// Two-level type grammar:
//   unit types  U ::= X | U -> T | !X.U
//   types       T ::= U | s . T | T + T
// Arrow domains and forall bodies are always unit types; arrow codomains are
// general types. Scale/Sum nodes never satisfy is_unit.
enum class TypeKind { Var, Arrow, Forall, Scale, Sum };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    TypeKind kind;
    std::string name;  // Var: the variable; Forall: the binder
    Scalar coeff;      // Scale only
    TypePtr a;         // Arrow domain / Forall body / Scale body / Sum left
    TypePtr b;         // Arrow codomain / Sum right
};

TypePtr tvar(std::string name);
TypePtr arrow(TypePtr domain, TypePtr codomain);   // domain must be unit
TypePtr forall(std::string binder, TypePtr body);  // body must be unit
TypePtr scale(const Scalar& coeff, TypePtr body);
TypePtr sum(TypePtr left, TypePtr right);

bool is_unit(const TypePtr& t);

std::set<std::string> free_type_vars(const TypePtr& t);

// Capture-avoiding substitution of a unit type for a type variable.
TypePtr subst_type(const TypePtr& t, const std::string& x, const TypePtr& u);

// Structural equality up to bound-name renaming. Commutativity and the
// scalar identities of type equivalence live in typesys, not here.
bool alpha_eq_ty(const TypePtr& t, const TypePtr& r);

// Same, but under a pre-seeded binder correspondence (left-to-right and
// right-to-left). Lets term alpha-equality compare annotations under the
// type binders already matched by enclosing type abstractions.
bool alpha_eq_ty_under(const TypePtr& t, const TypePtr& r,
                       std::map<std::string, std::string> lr,
                       std::map<std::string, std::string> rl);

// Concrete syntax, parseable back by parse_type:
//   !X.!Y.X->(Y->X)      sqrt2/2 . U + sqrt2/2 . V      0 . X
std::string to_string(const TypePtr& t);

// Picks a name not in `avoid`, derived from `base` by numeric suffix.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace lambdavec
