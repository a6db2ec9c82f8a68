#include "lambdavec/encodings.hpp"

#include <sstream>
#include <stdexcept>

#include "lambdavec/error.hpp"
#include "lambdavec/rewrite.hpp"
#include "lambdavec/typesys.hpp"

namespace lambdavec {

namespace {

TypePtr identity_type() { return forall("Z", arrow(tvar("Z"), tvar("Z"))); }

TermPtr identity_term() { return tylam("Z", lam("z", tvar("Z"), var("z"))); }

TypePtr bool_true_type() {
    return forall("X", forall("Y", arrow(tvar("X"), arrow(tvar("Y"), tvar("X")))));
}

TypePtr bool_false_type() {
    return forall("X", forall("Y", arrow(tvar("X"), arrow(tvar("Y"), tvar("Y")))));
}

// sum_i entries[i][j] . basis_n_i, as a term and as its type
TermPtr column_term(std::size_t n, const std::vector<std::vector<Scalar>>& entries,
                    std::size_t j) {
    TermPtr acc;
    for (std::size_t i = 0; i < n; ++i) {
        TermPtr part = scale(entries[i][j], basis_term(n, i + 1));
        acc = acc ? sum(acc, part) : part;
    }
    return acc;
}

TypePtr column_type(std::size_t n, const std::vector<std::vector<Scalar>>& entries,
                    std::size_t j) {
    TypePtr acc;
    for (std::size_t i = 0; i < n; ++i) {
        TypePtr part = scale(entries[i][j], basis_type(n, i + 1));
        acc = acc ? sum(acc, part) : part;
    }
    return acc;
}

TypePtr thunked_column_type(std::size_t n, const std::vector<std::vector<Scalar>>& entries,
                            std::size_t j) {
    return arrow(identity_type(), column_type(n, entries, j));
}

std::vector<TermPtr> flatten_sum(const TermPtr& t) {
    std::vector<TermPtr> out;
    std::vector<TermPtr> stack{t};
    while (!stack.empty()) {
        TermPtr cur = stack.back();
        stack.pop_back();
        if (cur->kind == TermKind::Sum) {
            stack.push_back(cur->t);
            stack.push_back(cur->s);
        } else {
            out.push_back(cur);
        }
    }
    return out;
}

}  // namespace

const TermPtr& Prelude::term(const std::string& name) const { return by_name.at(name); }

TypePtr Prelude::type_of(const std::string& name) const { return derivs.at(name)->type; }

Prelude load_prelude(const std::string& source) {
    Prelude out;
    out.defs = parse_program(source).defs;
    for (const auto& d : out.defs) {
        DerivPtr deriv = infer(Context{}, d.term);
        std::string why;
        if (!replay(deriv, &why))
            throw TypeError(TypeErrorKind::TypeMismatch,
                            "prelude definition '" + d.name + "' failed replay: " + why);
        out.by_name[d.name] = d.term;
        out.derivs[d.name] = deriv;
    }
    return out;
}

const Prelude& prelude() {
    static const Prelude p = load_prelude(kPreludeSource);
    return p;
}

TermPtr thunk(const TermPtr& t) {
    return lam(fresh_name("u", free_vars(t)), identity_type(), t);
}

TermPtr release(const TermPtr& t) { return app(t, identity_term()); }

std::pair<TypePtr, TypePtr> map2_domain_types(const Scalar& a, const Scalar& b, const Scalar& c,
                                              const Scalar& d) {
    auto dom = [](const Scalar& x, const Scalar& y) {
        return arrow(identity_type(),
                     sum(scale(x, bool_true_type()), scale(y, bool_false_type())));
    };
    return {dom(a, b), dom(c, d)};
}

TermPtr encode_map2(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) {
    const TermPtr& tt = prelude().term("true");
    const TermPtr& ff = prelude().term("false");
    TermPtr psi1 = sum(scale(a, tt), scale(b, ff));
    TermPtr psi2 = sum(scale(c, tt), scale(d, ff));
    auto [dom1, dom2] = map2_domain_types(a, b, c, d);
    TermPtr body = app(app(var("x"), thunk(psi1)), thunk(psi2));
    return tylam("T", lam("x", arrow(dom1, arrow(dom2, tvar("T"))), body));
}

TermPtr encode_if(const TermPtr& r, const TermPtr& s, const TermPtr& t) {
    TypePtr st = infer(Context{}, s)->type;
    TypePtr tt = infer(Context{}, t)->type;
    TermPtr rr = tyapp(tyapp(r, arrow(identity_type(), st)), arrow(identity_type(), tt));
    return release(app(app(rr, thunk(s)), thunk(t)));
}

TermPtr basis_term(std::size_t n, std::size_t i) {
    if (n == 0 || i == 0 || i > n) throw std::invalid_argument("basis index out of range");
    TermPtr t = var("x" + std::to_string(i));
    for (std::size_t k = n; k >= 1; --k)
        t = lam("x" + std::to_string(k), tvar("X" + std::to_string(k)), t);
    for (std::size_t k = n; k >= 1; --k) t = tylam("X" + std::to_string(k), t);
    return t;
}

TypePtr basis_type(std::size_t n, std::size_t i) {
    if (n == 0 || i == 0 || i > n) throw std::invalid_argument("basis index out of range");
    TypePtr t = tvar("X" + std::to_string(i));
    for (std::size_t k = n; k >= 1; --k) t = arrow(tvar("X" + std::to_string(k)), t);
    for (std::size_t k = n; k >= 1; --k) t = forall("X" + std::to_string(k), t);
    return t;
}

MatrixEncoding encode_matrix(std::size_t n, const std::vector<std::vector<Scalar>>& entries) {
    if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
    if (entries.size() != n) throw std::invalid_argument("matrix needs n rows");
    for (const auto& row : entries)
        if (row.size() != n) throw std::invalid_argument("matrix rows need n entries");

    MatrixEncoding out;
    out.n = n;
    out.entries = entries;

    TermPtr body = var("x");
    for (std::size_t j = 0; j < n; ++j) body = app(body, thunk(column_term(n, entries, j)));
    TypePtr dom = tvar("X");
    for (std::size_t j = n; j >= 1; --j)
        dom = arrow(thunked_column_type(n, entries, j - 1), dom);
    out.term = tylam("X", lam("x", dom, body));
    out.type = infer(Context{}, out.term)->type;
    return out;
}

std::vector<Scalar> apply_encoded(const MatrixEncoding& m, const std::vector<Scalar>& v,
                                  long fuel) {
    if (v.size() != m.n) throw std::invalid_argument("vector length must match the dimension");

    TermPtr arg;
    for (std::size_t j = 0; j < m.n; ++j) {
        TermPtr bj = basis_term(m.n, j + 1);
        for (std::size_t k = 0; k < m.n; ++k)
            bj = tyapp(bj, thunked_column_type(m.n, m.entries, k));
        TermPtr part = scale(v[j], bj);
        arg = arg ? sum(arg, part) : part;
    }
    TermPtr whole = release(app(m.term, arg));

    TermPtr nf;
    try {
        nf = normalize_no_F(whole, fuel, Strategy::Innermost, checker_poly_hook()).final_term;
    } catch (const FuelExhausted& e) {
        throw NonNormalizable(std::string("matrix application did not normalize: ") + e.what());
    }

    std::vector<TermPtr> erased_basis(m.n);
    for (std::size_t i = 0; i < m.n; ++i) erased_basis[i] = erase(basis_term(m.n, i + 1));

    std::vector<Scalar> out(m.n, Scalar::zero());
    for (const TermPtr& summand : flatten_sum(nf)) {
        Scalar c = Scalar::one();
        TermPtr core = summand;
        while (core->kind == TermKind::Scale) {
            c = c * core->coeff;
            core = core->s;
        }
        if (core->kind == TermKind::Zero) continue;
        TermPtr ec = erase(core);
        bool matched = false;
        for (std::size_t i = 0; i < m.n; ++i) {
            if (alpha_eq(ec, erased_basis[i])) {
                out[i] = out[i] + c;
                matched = true;
                break;
            }
        }
        if (!matched)
            throw NotABasisCombination("normal form summand is not a basis term: " +
                                       to_string(core));
    }
    return out;
}

MatrixEncoding parse_matrix(const std::string& text) {
    std::istringstream in(text);
    long n = 0;
    if (!(in >> n) || n < 1) throw ParseError("matrix header must be a positive dimension");
    std::vector<std::vector<Scalar>> entries(static_cast<std::size_t>(n),
                                             std::vector<Scalar>(static_cast<std::size_t>(n)));
    for (auto& row : entries) {
        for (auto& cell : row) {
            std::string tok;
            if (!(in >> tok)) throw ParseError("matrix needs n rows of n scalars");
            cell = parse_scalar(tok);
        }
    }
    std::string extra;
    if (in >> extra) throw ParseError("unexpected trailing input after the matrix: '" + extra + "'");
    return encode_matrix(static_cast<std::size_t>(n), entries);
}

}  // namespace lambdavec
