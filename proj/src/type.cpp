#include "lambdavec/type.hpp"

#include <cassert>
#include <map>

namespace lambdavec {

TypePtr tvar(std::string name) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Var;
    t->name = std::move(name);
    return t;
}

TypePtr arrow(TypePtr domain, TypePtr codomain) {
    assert(is_unit(domain));
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Arrow;
    t->a = std::move(domain);
    t->b = std::move(codomain);
    return t;
}

TypePtr forall(std::string binder, TypePtr body) {
    assert(is_unit(body));
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Forall;
    t->name = std::move(binder);
    t->a = std::move(body);
    return t;
}

TypePtr scale(const Scalar& coeff, TypePtr body) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Scale;
    t->coeff = coeff;
    t->a = std::move(body);
    return t;
}

TypePtr sum(TypePtr left, TypePtr right) {
    auto t = std::make_shared<Type>();
    t->kind = TypeKind::Sum;
    t->a = std::move(left);
    t->b = std::move(right);
    return t;
}

bool is_unit(const TypePtr& t) {
    return t->kind == TypeKind::Var || t->kind == TypeKind::Arrow ||
           t->kind == TypeKind::Forall;
}

namespace {

void collect_ftv(const TypePtr& t, std::set<std::string>& bound,
                 std::set<std::string>& out) {
    switch (t->kind) {
        case TypeKind::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            return;
        case TypeKind::Arrow:
            collect_ftv(t->a, bound, out);
            collect_ftv(t->b, bound, out);
            return;
        case TypeKind::Forall: {
            bool fresh = bound.insert(t->name).second;
            collect_ftv(t->a, bound, out);
            if (fresh) bound.erase(t->name);
            return;
        }
        case TypeKind::Scale:
            collect_ftv(t->a, bound, out);
            return;
        case TypeKind::Sum:
            collect_ftv(t->a, bound, out);
            collect_ftv(t->b, bound, out);
            return;
    }
}

}  // namespace

std::set<std::string> free_type_vars(const TypePtr& t) {
    std::set<std::string> bound, out;
    collect_ftv(t, bound, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    if (!avoid.count(base)) return base;
    for (int k = 1;; ++k) {
        std::string cand = base + std::to_string(k);
        if (!avoid.count(cand)) return cand;
    }
}

TypePtr subst_type(const TypePtr& t, const std::string& x, const TypePtr& u) {
    switch (t->kind) {
        case TypeKind::Var:
            return t->name == x ? u : t;
        case TypeKind::Arrow:
            return arrow(subst_type(t->a, x, u), subst_type(t->b, x, u));
        case TypeKind::Forall: {
            if (t->name == x) return t;
            std::set<std::string> fvu = free_type_vars(u);
            if (fvu.count(t->name)) {
                std::set<std::string> avoid = fvu;
                for (const auto& v : free_type_vars(t->a)) avoid.insert(v);
                avoid.insert(x);
                std::string nb = fresh_name(t->name, avoid);
                TypePtr renamed = subst_type(t->a, t->name, tvar(nb));
                return forall(nb, subst_type(renamed, x, u));
            }
            return forall(t->name, subst_type(t->a, x, u));
        }
        case TypeKind::Scale:
            return scale(t->coeff, subst_type(t->a, x, u));
        case TypeKind::Sum:
            return sum(subst_type(t->a, x, u), subst_type(t->b, x, u));
    }
    return t;
}

namespace {

bool alpha_eq_ty_rec(const TypePtr& t, const TypePtr& r,
                     std::map<std::string, std::string>& lr,
                     std::map<std::string, std::string>& rl) {
    if (t->kind != r->kind) return false;
    switch (t->kind) {
        case TypeKind::Var: {
            auto it = lr.find(t->name);
            auto ir = rl.find(r->name);
            if (it != lr.end() || ir != rl.end()) {
                return it != lr.end() && ir != rl.end() && it->second == r->name &&
                       ir->second == t->name;
            }
            return t->name == r->name;
        }
        case TypeKind::Arrow:
            return alpha_eq_ty_rec(t->a, r->a, lr, rl) &&
                   alpha_eq_ty_rec(t->b, r->b, lr, rl);
        case TypeKind::Forall: {
            auto saved_l = lr;
            auto saved_r = rl;
            lr[t->name] = r->name;
            rl[r->name] = t->name;
            bool ok = alpha_eq_ty_rec(t->a, r->a, lr, rl);
            lr = saved_l;
            rl = saved_r;
            return ok;
        }
        case TypeKind::Scale:
            return t->coeff == r->coeff && alpha_eq_ty_rec(t->a, r->a, lr, rl);
        case TypeKind::Sum:
            return alpha_eq_ty_rec(t->a, r->a, lr, rl) &&
                   alpha_eq_ty_rec(t->b, r->b, lr, rl);
    }
    return false;
}

// Precedence contexts for printing.
std::string print_ty(const TypePtr& t);

std::string print_atomish(const TypePtr& t) {
    // A position where only a variable can stay bare (arrow domain, operands
    // that must reparse unambiguously).
    if (t->kind == TypeKind::Var) return t->name;
    return "(" + print_ty(t) + ")";
}

std::string print_scale_body(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Var:
        case TypeKind::Arrow:
        case TypeKind::Forall:
        case TypeKind::Scale:
            return print_ty(t);
        case TypeKind::Sum:
            return "(" + print_ty(t) + ")";
    }
    return print_ty(t);
}

std::string ty_coeff_string(const Scalar& s) {
    // Sum-shaped coefficients must stay one scalar product under reparse.
    std::string txt = s.to_string();
    if (txt.find(" + ") != std::string::npos || txt.find(" - ") != std::string::npos) {
        return "(" + txt + ")";
    }
    return txt;
}

std::string print_ty(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Var:
            return t->name;
        case TypeKind::Arrow:
            return print_atomish(t->a) + "->" + print_atomish(t->b);
        case TypeKind::Forall:
            return "!" + t->name + "." + print_ty(t->a);
        case TypeKind::Scale:
            return ty_coeff_string(t->coeff) + " . " + print_scale_body(t->a);
        case TypeKind::Sum: {
            std::string left = t->a->kind == TypeKind::Sum ? print_ty(t->a)
                                                           : print_scale_body(t->a);
            return left + " + " + print_scale_body(t->b);
        }
    }
    return "?";
}

}  // namespace

bool alpha_eq_ty(const TypePtr& t, const TypePtr& r) {
    std::map<std::string, std::string> lr, rl;
    return alpha_eq_ty_rec(t, r, lr, rl);
}

bool alpha_eq_ty_under(const TypePtr& t, const TypePtr& r,
                       std::map<std::string, std::string> lr,
                       std::map<std::string, std::string> rl) {
    return alpha_eq_ty_rec(t, r, lr, rl);
}

std::string to_string(const TypePtr& t) { return print_ty(t); }

}  // namespace lambdavec
