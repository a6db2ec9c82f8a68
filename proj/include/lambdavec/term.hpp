#pragma once

#include <memory>
#include <set>
#include <string>

#include "lambdavec/scalar.hpp"
#include "lambdavec/type.hpp"

namespace lambdavec {

// One AST serves both term flavors.
//
// Erased terms (the reduction calculus): Lam has no annotation, Zero has no
// witness, and TyLam/TyApp do not occur.
//
// Annotated terms (the surface language): Lam carries a unit-type annotation,
// Zero carries a witness term, and TyLam/TyApp mark where the type checker
// introduces and eliminates foralls.
enum class TermKind { Var, Lam, App, Zero, Scale, Sum, TyLam, TyApp };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    std::string name;  // Var: the variable; Lam: the binder; TyLam: the type binder
    Scalar coeff;      // Scale only
    TermPtr s;         // Lam/TyLam body, App fun, Zero witness (may be null), Scale body, Sum left, TyApp fun
    TermPtr t;         // App arg, Sum right
    TypePtr ann;       // Lam annotation (null if erased); TyApp type argument (unit)
};

TermPtr var(std::string name);
TermPtr lam(std::string binder, TypePtr ann, TermPtr body);  // ann may be null
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr zero(TermPtr witness);  // witness may be null
TermPtr scale(const Scalar& coeff, TermPtr body);
TermPtr sum(TermPtr left, TermPtr right);
TermPtr tylam(std::string binder, TermPtr body);
TermPtr tyapp(TermPtr fun, TypePtr targ);  // targ must be unit

// Basis terms are variables and abstractions; beta only fires on these.
bool is_basis(const TermPtr& t);

// True when no annotation, witness, TyLam or TyApp occurs anywhere.
bool is_erased(const TermPtr& t);

// Drops TyLam/TyApp wrappers, annotations and zero witnesses.
TermPtr erase(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_type_vars_in_term(const TermPtr& t);

// Capture-avoiding substitution of a term for a term variable. Homomorphic
// through Scale and Sum; zeros are unchanged apart from their witnesses.
TermPtr subst_term(const TermPtr& t, const std::string& x, const TermPtr& b);

// Capture-avoiding substitution of a unit type for a type variable, applied
// to every annotation and type argument in the term.
TermPtr subst_type_in_term(const TermPtr& t, const std::string& x, const TypePtr& u);

// Equality up to renaming of bound term and type variables. Annotations and
// witnesses participate; erase both sides first for erased comparison.
bool alpha_eq(const TermPtr& t, const TermPtr& r);

// Node count of the term as written.
std::size_t term_size(const TermPtr& t);

// Concrete syntax, parseable back by parse_term:
//   (\x:X.x) y      sqrt2/2 . (true + false)      0<x>      (/\X.x)[Y]
std::string to_string(const TermPtr& t);

}  // namespace lambdavec
