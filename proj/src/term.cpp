#include "lambdavec/term.hpp"

#include <cassert>
#include <map>

namespace lambdavec {

TermPtr var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr lam(std::string binder, TypePtr ann, TermPtr body) {
    assert(!ann || is_unit(ann));
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Lam;
    t->name = std::move(binder);
    t->ann = std::move(ann);
    t->s = std::move(body);
    return t;
}

TermPtr app(TermPtr fun, TermPtr arg) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::App;
    t->s = std::move(fun);
    t->t = std::move(arg);
    return t;
}

TermPtr zero(TermPtr witness) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Zero;
    t->s = std::move(witness);
    return t;
}

TermPtr scale(const Scalar& coeff, TermPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Scale;
    t->coeff = coeff;
    t->s = std::move(body);
    return t;
}

TermPtr sum(TermPtr left, TermPtr right) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Sum;
    t->s = std::move(left);
    t->t = std::move(right);
    return t;
}

TermPtr tylam(std::string binder, TermPtr body) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::TyLam;
    t->name = std::move(binder);
    t->s = std::move(body);
    return t;
}

TermPtr tyapp(TermPtr fun, TypePtr targ) {
    assert(is_unit(targ));
    auto t = std::make_shared<Term>();
    t->kind = TermKind::TyApp;
    t->s = std::move(fun);
    t->ann = std::move(targ);
    return t;
}

bool is_basis(const TermPtr& t) {
    return t->kind == TermKind::Var || t->kind == TermKind::Lam;
}

bool is_erased(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return true;
        case TermKind::Lam:
            return !t->ann && is_erased(t->s);
        case TermKind::App:
        case TermKind::Sum:
            return is_erased(t->s) && is_erased(t->t);
        case TermKind::Zero:
            return !t->s;
        case TermKind::Scale:
            return is_erased(t->s);
        case TermKind::TyLam:
        case TermKind::TyApp:
            return false;
    }
    return false;
}

TermPtr erase(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return t;
        case TermKind::Lam:
            return lam(t->name, nullptr, erase(t->s));
        case TermKind::App:
            return app(erase(t->s), erase(t->t));
        case TermKind::Zero:
            return zero(nullptr);
        case TermKind::Scale:
            return scale(t->coeff, erase(t->s));
        case TermKind::Sum:
            return sum(erase(t->s), erase(t->t));
        case TermKind::TyLam:
            return erase(t->s);
        case TermKind::TyApp:
            return erase(t->s);
    }
    return t;
}

namespace {

void collect_fv(const TermPtr& t, std::set<std::string>& bound,
                std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            return;
        case TermKind::Lam: {
            bool fresh = bound.insert(t->name).second;
            collect_fv(t->s, bound, out);
            if (fresh) bound.erase(t->name);
            return;
        }
        case TermKind::App:
        case TermKind::Sum:
            collect_fv(t->s, bound, out);
            collect_fv(t->t, bound, out);
            return;
        case TermKind::Zero:
            if (t->s) collect_fv(t->s, bound, out);
            return;
        case TermKind::Scale:
        case TermKind::TyLam:
        case TermKind::TyApp:
            collect_fv(t->s, bound, out);
            return;
    }
}

void collect_ftv_term(const TermPtr& t, std::set<std::string>& bound,
                      std::set<std::string>& out) {
    auto add_type = [&](const TypePtr& ty) {
        if (!ty) return;
        for (const auto& x : free_type_vars(ty)) {
            if (!bound.count(x)) out.insert(x);
        }
    };
    switch (t->kind) {
        case TermKind::Var:
            return;
        case TermKind::Lam:
            add_type(t->ann);
            collect_ftv_term(t->s, bound, out);
            return;
        case TermKind::App:
        case TermKind::Sum:
            collect_ftv_term(t->s, bound, out);
            collect_ftv_term(t->t, bound, out);
            return;
        case TermKind::Zero:
            if (t->s) collect_ftv_term(t->s, bound, out);
            return;
        case TermKind::Scale:
            collect_ftv_term(t->s, bound, out);
            return;
        case TermKind::TyLam: {
            bool fresh = bound.insert(t->name).second;
            collect_ftv_term(t->s, bound, out);
            if (fresh) bound.erase(t->name);
            return;
        }
        case TermKind::TyApp:
            add_type(t->ann);
            collect_ftv_term(t->s, bound, out);
            return;
    }
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> bound, out;
    collect_fv(t, bound, out);
    return out;
}

std::set<std::string> free_type_vars_in_term(const TermPtr& t) {
    std::set<std::string> bound, out;
    collect_ftv_term(t, bound, out);
    return out;
}

TermPtr subst_term(const TermPtr& t, const std::string& x, const TermPtr& b) {
    switch (t->kind) {
        case TermKind::Var:
            return t->name == x ? b : t;
        case TermKind::Lam: {
            if (t->name == x) return t;
            std::set<std::string> fvb = free_vars(b);
            if (fvb.count(t->name)) {
                std::set<std::string> avoid = fvb;
                for (const auto& v : free_vars(t->s)) avoid.insert(v);
                avoid.insert(x);
                std::string nb = fresh_name(t->name, avoid);
                TermPtr renamed = subst_term(t->s, t->name, var(nb));
                return lam(nb, t->ann, subst_term(renamed, x, b));
            }
            return lam(t->name, t->ann, subst_term(t->s, x, b));
        }
        case TermKind::App:
            return app(subst_term(t->s, x, b), subst_term(t->t, x, b));
        case TermKind::Zero:
            return t->s ? zero(subst_term(t->s, x, b)) : t;
        case TermKind::Scale:
            return scale(t->coeff, subst_term(t->s, x, b));
        case TermKind::Sum:
            return sum(subst_term(t->s, x, b), subst_term(t->t, x, b));
        case TermKind::TyLam: {
            // The substituted term may mention type variables free; keep them
            // from being captured by this type binder.
            std::set<std::string> ftvb = free_type_vars_in_term(b);
            if (ftvb.count(t->name)) {
                std::set<std::string> avoid = ftvb;
                for (const auto& v : free_type_vars_in_term(t->s)) avoid.insert(v);
                std::string nb = fresh_name(t->name, avoid);
                TermPtr renamed = subst_type_in_term(t->s, t->name, tvar(nb));
                return tylam(nb, subst_term(renamed, x, b));
            }
            return tylam(t->name, subst_term(t->s, x, b));
        }
        case TermKind::TyApp:
            return tyapp(subst_term(t->s, x, b), t->ann);
    }
    return t;
}

TermPtr subst_type_in_term(const TermPtr& t, const std::string& x, const TypePtr& u) {
    switch (t->kind) {
        case TermKind::Var:
            return t;
        case TermKind::Lam:
            return lam(t->name, t->ann ? subst_type(t->ann, x, u) : nullptr,
                       subst_type_in_term(t->s, x, u));
        case TermKind::App:
            return app(subst_type_in_term(t->s, x, u), subst_type_in_term(t->t, x, u));
        case TermKind::Zero:
            return t->s ? zero(subst_type_in_term(t->s, x, u)) : t;
        case TermKind::Scale:
            return scale(t->coeff, subst_type_in_term(t->s, x, u));
        case TermKind::Sum:
            return sum(subst_type_in_term(t->s, x, u), subst_type_in_term(t->t, x, u));
        case TermKind::TyLam: {
            if (t->name == x) return t;
            std::set<std::string> fvu = free_type_vars(u);
            if (fvu.count(t->name)) {
                std::set<std::string> avoid = fvu;
                for (const auto& v : free_type_vars_in_term(t->s)) avoid.insert(v);
                avoid.insert(x);
                std::string nb = fresh_name(t->name, avoid);
                TermPtr renamed = subst_type_in_term(t->s, t->name, tvar(nb));
                return tylam(nb, subst_type_in_term(renamed, x, u));
            }
            return tylam(t->name, subst_type_in_term(t->s, x, u));
        }
        case TermKind::TyApp:
            return tyapp(subst_type_in_term(t->s, x, u), subst_type(t->ann, x, u));
    }
    return t;
}

namespace {

using NameMap = std::map<std::string, std::string>;

struct AlphaCtx {
    NameMap term_lr, term_rl;  // term binders
    NameMap ty_lr, ty_rl;      // type binders
};

bool var_match(const std::string& a, const std::string& b, const NameMap& lr,
               const NameMap& rl) {
    auto it = lr.find(a);
    auto ir = rl.find(b);
    if (it != lr.end() || ir != rl.end()) {
        return it != lr.end() && ir != rl.end() && it->second == b && ir->second == a;
    }
    return a == b;
}

bool alpha_rec(const TermPtr& t, const TermPtr& r, AlphaCtx& cx) {
    if (t->kind != r->kind) return false;
    switch (t->kind) {
        case TermKind::Var:
            return var_match(t->name, r->name, cx.term_lr, cx.term_rl);
        case TermKind::Lam: {
            if (static_cast<bool>(t->ann) != static_cast<bool>(r->ann)) return false;
            if (t->ann && !alpha_eq_ty_under(t->ann, r->ann, cx.ty_lr, cx.ty_rl)) {
                return false;
            }
            AlphaCtx inner = cx;
            inner.term_lr[t->name] = r->name;
            inner.term_rl[r->name] = t->name;
            return alpha_rec(t->s, r->s, inner);
        }
        case TermKind::App:
        case TermKind::Sum:
            return alpha_rec(t->s, r->s, cx) && alpha_rec(t->t, r->t, cx);
        case TermKind::Zero:
            if (static_cast<bool>(t->s) != static_cast<bool>(r->s)) return false;
            return !t->s || alpha_rec(t->s, r->s, cx);
        case TermKind::Scale:
            return t->coeff == r->coeff && alpha_rec(t->s, r->s, cx);
        case TermKind::TyLam: {
            AlphaCtx inner = cx;
            inner.ty_lr[t->name] = r->name;
            inner.ty_rl[r->name] = t->name;
            return alpha_rec(t->s, r->s, inner);
        }
        case TermKind::TyApp:
            return alpha_eq_ty_under(t->ann, r->ann, cx.ty_lr, cx.ty_rl) &&
                   alpha_rec(t->s, r->s, cx);
    }
    return false;
}

std::string print_term(const TermPtr& t);

std::string print_arg(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::Zero:
        case TermKind::TyApp:
            return print_term(t);
        default:
            return "(" + print_term(t) + ")";
    }
}

std::string print_operand(const TermPtr& t) {
    // Sum/Lam/TyLam would swallow a following "+ ..."; keep them bracketed.
    switch (t->kind) {
        case TermKind::Sum:
        case TermKind::Lam:
        case TermKind::TyLam:
            return "(" + print_term(t) + ")";
        default:
            return print_term(t);
    }
}

std::string print_ann(const TypePtr& ty) {
    if (ty->kind == TypeKind::Var) return ty->name;
    return "(" + to_string(ty) + ")";
}

// Coefficients that print as sums would fuse with the surrounding term sum;
// bracket them so the reparse sees one scalar product.
std::string coeff_string(const Scalar& s) {
    std::string txt = s.to_string();
    if (txt.find(" + ") != std::string::npos || txt.find(" - ") != std::string::npos) {
        return "(" + txt + ")";
    }
    return txt;
}

std::string print_term(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return t->name;
        case TermKind::Lam:
            return "\\" + t->name + (t->ann ? ":" + print_ann(t->ann) : "") + "." +
                   print_term(t->s);
        case TermKind::App:
            return "(" + print_term(t->s) + ") " + print_arg(t->t);
        case TermKind::Zero:
            return t->s ? "0<" + print_term(t->s) + ">" : "0";
        case TermKind::Scale:
            return coeff_string(t->coeff) + " . " + print_operand(t->s);
        case TermKind::Sum: {
            std::string left = t->s->kind == TermKind::Sum ? print_term(t->s)
                                                           : print_operand(t->s);
            return left + " + " + print_operand(t->t);
        }
        case TermKind::TyLam:
            return "/\\" + t->name + "." + print_term(t->s);
        case TermKind::TyApp: {
            std::string fun = (t->s->kind == TermKind::Var || t->s->kind == TermKind::TyApp)
                                  ? print_term(t->s)
                                  : "(" + print_term(t->s) + ")";
            return fun + "[" + to_string(t->ann) + "]";
        }
    }
    return "?";
}

}  // namespace

bool alpha_eq(const TermPtr& t, const TermPtr& r) {
    AlphaCtx cx;
    return alpha_rec(t, r, cx);
}

std::size_t term_size(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return 1;
        case TermKind::Zero:
            return 1 + (t->s ? term_size(t->s) : 0);
        case TermKind::Lam:
        case TermKind::Scale:
        case TermKind::TyLam:
        case TermKind::TyApp:
            return 1 + term_size(t->s);
        case TermKind::App:
        case TermKind::Sum:
            return 1 + term_size(t->s) + term_size(t->t);
    }
    return 1;
}

std::string to_string(const TermPtr& t) { return print_term(t); }

}  // namespace lambdavec
