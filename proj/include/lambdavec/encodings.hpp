#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lambdavec/checker.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/scalar.hpp"
#include "lambdavec/term.hpp"
#include "lambdavec/type.hpp"

namespace lambdavec {

// The standard programs: booleans, the polymorphic identity, a homogeneous
// conditional, pairs with their projections, the Hadamard map and the
// booleans instantiated for it. Loaded from one source text; every
// definition is inferred in the empty context and its derivation replayed.
struct Prelude {
    std::vector<Def> defs;  // file order, bodies fully spliced
    std::map<std::string, TermPtr> by_name;
    std::map<std::string, DerivPtr> derivs;

    const TermPtr& term(const std::string& name) const;  // throws std::out_of_range
    TypePtr type_of(const std::string& name) const;
    bool has(const std::string& name) const { return by_name.count(name) != 0; }
};

// The embedded source text; assets/prelude.lvec carries the same bytes.
extern const char* const kPreludeSource;

Prelude load_prelude(const std::string& source);
const Prelude& prelude();  // embedded source, loaded once

// {t}: freezes t under a fresh unused binder of the identity type.
TermPtr thunk(const TermPtr& t);
// releases a thunk by applying it to the polymorphic identity.
TermPtr release(const TermPtr& t);

// The 2x2 linear map sending true to a.true + b.false and false to
// c.true + d.false, as one polymorphic function over thunked images.
TermPtr encode_map2(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d);
// The domain types a boolean must be instantiated at to feed encode_map2.
std::pair<TypePtr, TypePtr> map2_domain_types(const Scalar& a, const Scalar& b,
                                              const Scalar& c, const Scalar& d);

// The linear conditional: r instantiated at the branch thunk types, applied
// to both frozen branches, released.
TermPtr encode_if(const TermPtr& r, const TermPtr& s, const TermPtr& t);

// basis_n_i = /\X1.../\Xn.\x1:X1...\xn:Xn.xi, 1-based i.
TermPtr basis_term(std::size_t n, std::size_t i);
TypePtr basis_type(std::size_t n, std::size_t i);

struct MatrixEncoding {
    std::size_t n = 0;
    std::vector<std::vector<Scalar>> entries;  // entries[i][j]: row i, column j
    TermPtr term;
    TypePtr type;
};

// One function holding the n thunked column images; applying it to an
// instantiated basis term selects a column.
MatrixEncoding encode_matrix(std::size_t n, const std::vector<std::vector<Scalar>>& entries);

// Applies the encoding to sum_j v_j . basis_n_j (instantiated), releases,
// normalizes without factoring, and reads the coefficient of every basis
// term off the resulting sum. Throws NonNormalizable (fuel) and
// NotABasisCombination (foreign summand in the normal form).
std::vector<Scalar> apply_encoded(const MatrixEncoding& m, const std::vector<Scalar>& v,
                                  long fuel = 100000);

// Plain text: first line n, then n rows of n scalars, whitespace-separated.
MatrixEncoding parse_matrix(const std::string& text);

}  // namespace lambdavec
