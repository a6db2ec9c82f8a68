#include "lambdavec/checker.hpp"

#include <cassert>

#include "lambdavec/error.hpp"

namespace lambdavec {

const TypePtr* Context::lookup(const std::string& x) const {
    auto it = vars.find(x);
    return it == vars.end() ? nullptr : &it->second;
}

Context Context::extended(const std::string& x, const TypePtr& u) const {
    Context out = *this;
    out.vars[x] = u;
    return out;
}

std::set<std::string> Context::free_type_vars() const {
    std::set<std::string> out;
    for (const auto& [name, u] : vars) {
        auto fv = lambdavec::free_type_vars(u);
        out.insert(fv.begin(), fv.end());
    }
    return out;
}

bool Context::operator==(const Context& o) const {
    if (vars.size() != o.vars.size()) return false;
    auto it = o.vars.begin();
    for (const auto& [name, u] : vars) {
        if (it->first != name || !alpha_eq_ty(it->second, u)) return false;
        ++it;
    }
    return true;
}

std::string Context::to_string() const {
    std::string out;
    for (const auto& [name, u] : vars) {
        if (!out.empty()) out += ", ";
        out += name + ":" + lambdavec::to_string(u);
    }
    return out;
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Ax: return "ax";
        case Rule::ZeroI: return "0_I";
        case Rule::ArrowI: return "->I";
        case Rule::ArrowE: return "->E";
        case Rule::ForallI: return "!I";
        case Rule::ForallE: return "!E";
        case Rule::ScaleI: return "a_I";
        case Rule::SumI: return "+_I";
        case Rule::Equiv: return "eq";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(TypeErrorKind k, const std::string& msg) { throw TypeError(k, msg); }

std::shared_ptr<Derivation> node(Rule r, Context ctx, TermPtr term, TypePtr type,
                                 std::vector<DerivPtr> premises) {
    auto d = std::make_shared<Derivation>();
    d->rule = r;
    d->ctx = std::move(ctx);
    d->term = std::move(term);
    d->type = std::move(type);
    d->premises = std::move(premises);
    return d;
}

// Append a trailing equivalence node unless the type is already canonical.
DerivPtr finish(DerivPtr d) {
    TypePtr e = embed(canon(d->type));
    if (alpha_eq_ty(e, d->type)) return d;
    return node(Rule::Equiv, d->ctx, d->term, e, {d});
}

// Rebuilds !prefix...(domain -> result) for comparisons against summands.
TypePtr wrap_prefix(const std::vector<std::string>& prefix, const TypePtr& domain,
                    const TypePtr& result) {
    TypePtr u = arrow(domain, result);
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) u = forall(*it, u);
    return u;
}

DerivPtr infer_app(const Context& ctx, const TermPtr& t) {
    DerivPtr df = infer(ctx, t->s);
    DerivPtr da = infer(ctx, t->t);
    CanonType cf = canon(df->type);
    CanonType ca = canon(da->type);

    std::set<std::string> avoid = ctx.free_type_vars();
    for (const auto& p : cf.parts) {
        auto fv = free_type_vars(p.unit);
        avoid.insert(fv.begin(), fv.end());
    }
    for (const auto& p : ca.parts) {
        auto fv = free_type_vars(p.unit);
        avoid.insert(fv.begin(), fv.end());
    }

    // Align every function summand on one fresh quantifier prefix.
    std::size_t k = 0;
    for (TypePtr u = cf.parts[0].unit; u->kind == TypeKind::Forall; u = u->a) ++k;
    std::vector<std::string> prefix;
    for (std::size_t d = 0; d < k; ++d) {
        std::string x = fresh_name("X", avoid);
        avoid.insert(x);
        prefix.push_back(x);
    }

    TypePtr domain;
    std::vector<Scalar> fun_coeffs;
    std::vector<TypePtr> results;
    for (const auto& p : cf.parts) {
        TypePtr u = p.unit;
        for (std::size_t d = 0; d < k; ++d) {
            if (u->kind != TypeKind::Forall)
                fail(TypeErrorKind::HeterogeneousFunctionSummands,
                     "function summands disagree on their quantifier prefix: " +
                         to_string(cf.parts[0].unit) + " vs " + to_string(p.unit));
            u = subst_type(u->a, u->name, tvar(prefix[d]));
        }
        if (u->kind == TypeKind::Forall)
            fail(TypeErrorKind::HeterogeneousFunctionSummands,
                 "function summands disagree on their quantifier prefix: " +
                     to_string(cf.parts[0].unit) + " vs " + to_string(p.unit));
        if (u->kind != TypeKind::Arrow)
            fail(TypeErrorKind::NotAnArrow, "function summand is not an arrow: " + to_string(p.unit));
        if (!domain) {
            domain = u->a;
        } else if (!equiv(domain, u->a)) {
            fail(TypeErrorKind::HeterogeneousFunctionSummands,
                 "function summands disagree on the domain: " + to_string(domain) + " vs " +
                     to_string(u->a));
        }
        fun_coeffs.push_back(p.coeff);
        results.push_back(u->b);
    }

    // Match every argument summand against the shared domain.
    std::set<std::string> pattern_vars(prefix.begin(), prefix.end());
    std::vector<Scalar> arg_coeffs;
    std::vector<TypePtr> arg_units;
    std::vector<std::vector<TypePtr>> substs;
    for (std::size_t j = 0; j < ca.parts.size(); ++j) {
        const auto& q = ca.parts[j];
        auto m = match_unit(domain, q.unit, pattern_vars);
        if (!m)
            fail(TypeErrorKind::DomainMismatch,
                 "argument summand " + std::to_string(j) + " has type " + to_string(q.unit) +
                     " which does not match the domain " + to_string(domain));
        std::vector<TypePtr> w;
        for (const auto& x : prefix) {
            auto it = m->find(x);
            if (it != m->end()) {
                w.push_back(it->second);
            } else {
                // Unconstrained prefix variable: any unit works, take a fresh one.
                std::string f = fresh_name("Z", avoid);
                avoid.insert(f);
                w.push_back(tvar(f));
            }
        }
        arg_coeffs.push_back(q.coeff);
        arg_units.push_back(q.unit);
        substs.push_back(std::move(w));
    }

    TypePtr out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = 0; j < arg_units.size(); ++j) {
            TypePtr ti = results[i];
            for (std::size_t d = 0; d < prefix.size(); ++d)
                ti = subst_type(ti, prefix[d], substs[j][d]);
            TypePtr part = scale(fun_coeffs[i] * arg_coeffs[j], ti);
            out = out ? sum(out, part) : part;
        }
    }

    auto data = std::make_shared<ArrowEData>();
    data->prefix = std::move(prefix);
    data->domain = domain;
    data->fun_coeffs = std::move(fun_coeffs);
    data->results = std::move(results);
    data->arg_coeffs = std::move(arg_coeffs);
    data->arg_units = std::move(arg_units);
    data->substs = std::move(substs);

    auto d = node(Rule::ArrowE, ctx, app(df->term, da->term), out, {df, da});
    d->arrow_e = data;
    return d;
}

}  // namespace

DerivPtr infer(const Context& ctx, const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var: {
            const TypePtr* u = ctx.lookup(t->name);
            if (!u) fail(TypeErrorKind::UnboundVariable, "unbound variable: " + t->name);
            return finish(node(Rule::Ax, ctx, t, *u, {}));
        }
        case TermKind::Lam: {
            if (!t->ann)
                fail(TypeErrorKind::TypeMismatch, "missing annotation on binder " + t->name);
            DerivPtr body = infer(ctx.extended(t->name, t->ann), t->s);
            return finish(node(Rule::ArrowI, ctx, lam(t->name, nullptr, body->term),
                               arrow(t->ann, body->type), {body}));
        }
        case TermKind::App:
            return finish(infer_app(ctx, t));
        case TermKind::Zero: {
            if (!t->s)
                fail(TypeErrorKind::TypeMismatch, "a zero without a witness cannot be typed");
            DerivPtr w = infer(ctx, t->s);
            return finish(
                node(Rule::ZeroI, ctx, zero(nullptr), scale(Scalar::zero(), w->type), {w}));
        }
        case TermKind::Scale: {
            DerivPtr body = infer(ctx, t->s);
            return finish(node(Rule::ScaleI, ctx, scale(t->coeff, body->term),
                               scale(t->coeff, body->type), {body}));
        }
        case TermKind::Sum: {
            DerivPtr l = infer(ctx, t->s);
            DerivPtr r = infer(ctx, t->t);
            return finish(node(Rule::SumI, ctx, sum(l->term, r->term), sum(l->type, r->type),
                               {l, r}));
        }
        case TermKind::TyLam: {
            if (ctx.free_type_vars().count(t->name))
                fail(TypeErrorKind::EscapingTypeVar,
                     "type variable " + t->name + " is free in the context");
            DerivPtr body = infer(ctx, t->s);
            CanonType cb = canon(body->type);
            TypePtr out;
            for (const auto& p : cb.parts) {
                TypePtr u = forall(t->name, p.unit);
                TypePtr summand = p.coeff.is_one() ? u : scale(p.coeff, u);
                out = out ? sum(out, summand) : summand;
            }
            auto d = node(Rule::ForallI, ctx, body->term, out, {body});
            d->binder = t->name;
            return finish(d);
        }
        case TermKind::TyApp: {
            if (!t->ann || !is_unit(t->ann))
                fail(TypeErrorKind::TypeMismatch, "type arguments must be unit types");
            DerivPtr body = infer(ctx, t->s);
            CanonType cb = canon(body->type);
            TypePtr out;
            for (const auto& p : cb.parts) {
                if (p.unit->kind != TypeKind::Forall)
                    fail(TypeErrorKind::ForallExpected,
                         "type application on an unquantified summand: " + to_string(p.unit));
                TypePtr u = subst_type(p.unit->a, p.unit->name, t->ann);
                TypePtr summand = p.coeff.is_one() ? u : scale(p.coeff, u);
                out = out ? sum(out, summand) : summand;
            }
            auto d = node(Rule::ForallE, ctx, body->term, out, {body});
            d->inst = t->ann;
            return finish(d);
        }
    }
    fail(TypeErrorKind::TypeMismatch, "malformed term");
}

CheckResult check(const Context& ctx, const TermPtr& t, const TypePtr& want,
                  bool allow_subsumption) {
    DerivPtr d = infer(ctx, t);
    if (equiv(d->type, want)) {
        if (!alpha_eq_ty(d->type, want)) d = node(Rule::Equiv, ctx, d->term, want, {d});
        return {d, true, 0};
    }
    if (allow_subsumption) {
        int steps = 0;
        if (preceq(d->type, want, kPreceqBudget, &steps)) return {d, false, steps};
    }
    fail(TypeErrorKind::TypeMismatch, "inferred " + to_string(canon(d->type)) +
                                          " where " + to_string(canon(want)) + " was expected");
}

namespace {

struct Replayer {
    std::string* why;

    bool bad(const std::string& path, const std::string& reason) {
        if (why) *why = path + ": " + reason;
        return false;
    }

    bool run(const DerivPtr& d, const std::string& path) {
        if (!d) return bad(path, "missing node");
        for (std::size_t i = 0; i < d->premises.size(); ++i) {
            if (!run(d->premises[i], path + "." + std::to_string(i))) return false;
        }
        switch (d->rule) {
            case Rule::Ax: {
                if (!d->premises.empty()) return bad(path, "axioms take no premises");
                if (d->term->kind != TermKind::Var) return bad(path, "subject is not a variable");
                const TypePtr* u = d->ctx.lookup(d->term->name);
                if (!u) return bad(path, "variable not bound in the context");
                if (!alpha_eq_ty(*u, d->type)) return bad(path, "type differs from the binding");
                return true;
            }
            case Rule::ZeroI: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (!(p->ctx == d->ctx)) return bad(path, "premise context differs");
                if (d->term->kind != TermKind::Zero || d->term->s)
                    return bad(path, "subject is not an erased zero");
                if (!alpha_eq_ty(d->type, scale(Scalar::zero(), p->type)))
                    return bad(path, "type is not the zero-scaled witness type");
                return true;
            }
            case Rule::ArrowI: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (d->term->kind != TermKind::Lam || d->term->ann)
                    return bad(path, "subject is not an erased abstraction");
                if (d->type->kind != TypeKind::Arrow) return bad(path, "type is not an arrow");
                if (!(p->ctx == d->ctx.extended(d->term->name, d->type->a)))
                    return bad(path, "premise context is not the extension by the binder");
                if (!alpha_eq_ty(p->type, d->type->b))
                    return bad(path, "codomain differs from the body type");
                if (!alpha_eq(p->term, d->term->s)) return bad(path, "body differs");
                return true;
            }
            case Rule::ArrowE:
                return arrow_e(d, path);
            case Rule::ForallI: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (!(p->ctx == d->ctx)) return bad(path, "premise context differs");
                if (!alpha_eq(p->term, d->term)) return bad(path, "subject differs");
                if (d->binder.empty()) return bad(path, "missing binder");
                if (d->ctx.free_type_vars().count(d->binder))
                    return bad(path, "binder is free in the context");
                CanonType cb = canon(p->type);
                TypePtr out;
                for (const auto& q : cb.parts) {
                    TypePtr u = forall(d->binder, q.unit);
                    TypePtr summand = q.coeff.is_one() ? u : scale(q.coeff, u);
                    out = out ? sum(out, summand) : summand;
                }
                if (!alpha_eq_ty(d->type, out))
                    return bad(path, "type is not the quantified premise type");
                return true;
            }
            case Rule::ForallE: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (!(p->ctx == d->ctx)) return bad(path, "premise context differs");
                if (!alpha_eq(p->term, d->term)) return bad(path, "subject differs");
                if (!d->inst || !is_unit(d->inst)) return bad(path, "missing unit instantiation");
                CanonType cb = canon(p->type);
                TypePtr out;
                for (const auto& q : cb.parts) {
                    if (q.unit->kind != TypeKind::Forall)
                        return bad(path, "premise summand is not quantified");
                    TypePtr u = subst_type(q.unit->a, q.unit->name, d->inst);
                    TypePtr summand = q.coeff.is_one() ? u : scale(q.coeff, u);
                    out = out ? sum(out, summand) : summand;
                }
                if (!alpha_eq_ty(d->type, out))
                    return bad(path, "type is not the instantiated premise type");
                return true;
            }
            case Rule::ScaleI: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (!(p->ctx == d->ctx)) return bad(path, "premise context differs");
                if (d->term->kind != TermKind::Scale) return bad(path, "subject is not scaled");
                if (!alpha_eq(d->term->s, p->term)) return bad(path, "body differs");
                if (!alpha_eq_ty(d->type, scale(d->term->coeff, p->type)))
                    return bad(path, "type is not the scaled premise type");
                return true;
            }
            case Rule::SumI: {
                if (d->premises.size() != 2) return bad(path, "expected two premises");
                const auto& l = d->premises[0];
                const auto& r = d->premises[1];
                if (!(l->ctx == d->ctx) || !(r->ctx == d->ctx))
                    return bad(path, "premise context differs");
                if (d->term->kind != TermKind::Sum) return bad(path, "subject is not a sum");
                if (!alpha_eq(d->term->s, l->term) || !alpha_eq(d->term->t, r->term))
                    return bad(path, "operands differ");
                if (!alpha_eq_ty(d->type, sum(l->type, r->type)))
                    return bad(path, "type is not the sum of the premise types");
                return true;
            }
            case Rule::Equiv: {
                if (d->premises.size() != 1) return bad(path, "expected one premise");
                const auto& p = d->premises[0];
                if (!(p->ctx == d->ctx)) return bad(path, "premise context differs");
                if (!alpha_eq(p->term, d->term)) return bad(path, "subject differs");
                if (!equiv(d->type, p->type)) return bad(path, "types are not equivalent");
                return true;
            }
        }
        return bad(path, "unknown rule");
    }

    bool arrow_e(const DerivPtr& d, const std::string& path) {
        if (d->premises.size() != 2) return bad(path, "expected two premises");
        if (!d->arrow_e) return bad(path, "missing application payload");
        const ArrowEData& ae = *d->arrow_e;
        const auto& f = d->premises[0];
        const auto& a = d->premises[1];
        if (!(f->ctx == d->ctx) || !(a->ctx == d->ctx))
            return bad(path, "premise context differs");
        if (d->term->kind != TermKind::App) return bad(path, "subject is not an application");
        if (!alpha_eq(d->term->s, f->term) || !alpha_eq(d->term->t, a->term))
            return bad(path, "operands differ");

        CanonType cf = canon(f->type);
        if (cf.parts.size() != ae.fun_coeffs.size() || cf.parts.size() != ae.results.size())
            return bad(path, "function decomposition has the wrong arity");
        if (!ae.domain || !is_unit(ae.domain)) return bad(path, "domain is not a unit type");
        for (std::size_t i = 0; i < cf.parts.size(); ++i) {
            if (!(cf.parts[i].coeff == ae.fun_coeffs[i]))
                return bad(path, "function coefficient differs");
            if (!alpha_eq_ty(cf.parts[i].unit, wrap_prefix(ae.prefix, ae.domain, ae.results[i])))
                return bad(path, "function summand differs from the decomposition");
        }

        CanonType ca = canon(a->type);
        if (ca.parts.size() != ae.arg_coeffs.size() || ca.parts.size() != ae.arg_units.size() ||
            ca.parts.size() != ae.substs.size())
            return bad(path, "argument decomposition has the wrong arity");
        for (std::size_t j = 0; j < ca.parts.size(); ++j) {
            if (!(ca.parts[j].coeff == ae.arg_coeffs[j]))
                return bad(path, "argument coefficient differs");
            if (!alpha_eq_ty(ca.parts[j].unit, ae.arg_units[j]))
                return bad(path, "argument summand differs from the decomposition");
            if (ae.substs[j].size() != ae.prefix.size())
                return bad(path, "substitution has the wrong arity");
            TypePtr dom = ae.domain;
            for (std::size_t k = 0; k < ae.prefix.size(); ++k) {
                if (!ae.substs[j][k] || !is_unit(ae.substs[j][k]))
                    return bad(path, "substituted type is not a unit type");
                dom = subst_type(dom, ae.prefix[k], ae.substs[j][k]);
            }
            if (!equiv(dom, ae.arg_units[j]))
                return bad(path, "substituted domain does not match argument summand " +
                                     std::to_string(j));
        }

        TypePtr out;
        for (std::size_t i = 0; i < ae.results.size(); ++i) {
            for (std::size_t j = 0; j < ae.arg_units.size(); ++j) {
                TypePtr ti = ae.results[i];
                for (std::size_t k = 0; k < ae.prefix.size(); ++k)
                    ti = subst_type(ti, ae.prefix[k], ae.substs[j][k]);
                TypePtr part = scale(ae.fun_coeffs[i] * ae.arg_coeffs[j], ti);
                out = out ? sum(out, part) : part;
            }
        }
        if (!alpha_eq_ty(d->type, out)) return bad(path, "conclusion type differs");
        return true;
    }
};

DerivPtr peel_scaling(DerivPtr d) {
    while (d && (d->rule == Rule::Equiv || d->rule == Rule::ScaleI)) d = d->premises[0];
    return d;
}

}  // namespace

bool replay(const DerivPtr& d, std::string* why) { return Replayer{why}.run(d, "root"); }

bool order_leq(const TypePtr& s, const TypePtr& t,
               const std::optional<std::pair<DerivPtr, DerivPtr>>& evidence, int budget) {
    std::vector<OrderFact> facts;
    if (evidence) {
        const DerivPtr& d1 = evidence->first;
        const DerivPtr& d2 = evidence->second;
        if (replay(d1) && replay(d2)) {
            DerivPtr p1 = peel_scaling(d1);
            DerivPtr p2 = peel_scaling(d2);
            if (p1 && p2 && p1->ctx == p2->ctx && alpha_eq(p1->term, p2->term))
                facts.push_back(OrderFact{canon(p1->type), canon(p2->type)});
        }
    }
    return order_leq(s, t, facts, budget);
}

namespace {

void print_rec(const DerivPtr& d, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += rule_name(d->rule);
    out += ": ";
    std::string c = d->ctx.to_string();
    if (!c.empty()) {
        out += c;
        out += " ";
    }
    out += "|- " + to_string(d->term) + " : " + to_string(d->type) + "\n";
    for (const auto& p : d->premises) print_rec(p, depth + 1, out);
}

}  // namespace

std::string print_derivation(const DerivPtr& d) {
    std::string out;
    print_rec(d, 0, out);
    return out;
}

PolyHook checker_poly_hook() {
    return [](const std::vector<std::string>& binders, const TypePtr& ann, const TermPtr& arg,
              const std::map<std::string, TypePtr>& enclosing)
               -> std::optional<std::vector<TypePtr>> {
        if (!ann) return std::nullopt;
        TypePtr v;
        try {
            Context ctx;
            ctx.vars = enclosing;
            CanonType c = canon(infer(ctx, arg)->type);
            if (c.parts.size() != 1 || !c.parts[0].coeff.is_one()) return std::nullopt;
            v = c.parts[0].unit;
        } catch (const TypeError&) {
            return std::nullopt;
        }
        std::set<std::string> vars(binders.begin(), binders.end());
        auto m = match_unit(ann, v, vars);
        if (!m) return std::nullopt;
        std::set<std::string> avoid = free_type_vars(ann);
        auto fv = free_type_vars(v);
        avoid.insert(fv.begin(), fv.end());
        std::vector<TypePtr> out;
        for (const auto& b : binders) {
            auto it = m->find(b);
            if (it != m->end()) {
                out.push_back(it->second);
            } else {
                std::string f = fresh_name("Z", avoid);
                avoid.insert(f);
                out.push_back(tvar(f));
            }
        }
        return out;
    };
}

}  // namespace lambdavec
