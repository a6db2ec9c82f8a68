#include "lambdavec/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "lambdavec/error.hpp"
#include "lambdavec/typesys.hpp"

namespace lambdavec {

RuleGroup group(RuleId r) {
    switch (r) {
        case RuleId::E1:
        case RuleId::E2:
        case RuleId::E3:
        case RuleId::E4:
        case RuleId::E5:
            return RuleGroup::E;
        case RuleId::F1:
        case RuleId::F2:
        case RuleId::F3:
        case RuleId::F4:
            return RuleGroup::F;
        case RuleId::B:
            return RuleGroup::B;
        case RuleId::A1:
        case RuleId::A2:
        case RuleId::A3:
        case RuleId::A4:
        case RuleId::A5:
        case RuleId::A6:
            return RuleGroup::A;
        default:
            return RuleGroup::N;
    }
}

const char* rule_id_name(RuleId r) {
    switch (r) {
        case RuleId::E1: return "E1";
        case RuleId::E2: return "E2";
        case RuleId::E3: return "E3";
        case RuleId::E4: return "E4";
        case RuleId::E5: return "E5";
        case RuleId::F1: return "F1";
        case RuleId::F2: return "F2";
        case RuleId::F3: return "F3";
        case RuleId::F4: return "F4";
        case RuleId::B: return "B";
        case RuleId::A1: return "A1";
        case RuleId::A2: return "A2";
        case RuleId::A3: return "A3";
        case RuleId::A4: return "A4";
        case RuleId::A5: return "A5";
        case RuleId::A6: return "A6";
        case RuleId::NTyBeta: return "NB";
        case RuleId::NTyAppSum: return "NAS";
        case RuleId::NTyAppScale: return "NAC";
        case RuleId::NTyAppZero: return "NAZ";
        case RuleId::NTyLamSum: return "NLS";
        case RuleId::NTyLamScale: return "NLC";
        case RuleId::NTyLamZero: return "NLZ";
    }
    return "?";
}

std::string path_string(const Path& p) {
    if (p.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(p[i]);
    }
    return out;
}

namespace {

std::vector<TermPtr> flat(const TermPtr& t) {
    std::vector<TermPtr> out;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
        if (u->kind == TermKind::Sum) {
            go(u->s);
            go(u->t);
        } else {
            out.push_back(u);
        }
    };
    go(t);
    return out;
}

TermPtr unflat(const std::vector<TermPtr>& parts) {
    TermPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = sum(acc, parts[i]);
    return acc;
}

bool erased_alpha(const TermPtr& a, const TermPtr& b) {
    return alpha_eq(erase(a), erase(b));
}

}  // namespace

TermPtr subterm_at(const TermPtr& t, const Path& p) {
    TermPtr cur = t;
    for (std::size_t d = 0; d < p.size(); ++d) {
        int idx = p[d];
        switch (cur->kind) {
            case TermKind::Sum: {
                auto parts = flat(cur);
                if (idx < 0 || static_cast<std::size_t>(idx) >= parts.size())
                    throw std::out_of_range("bad path into sum");
                cur = parts[idx];
                break;
            }
            case TermKind::Lam:
            case TermKind::TyLam:
            case TermKind::Scale:
                if (idx != 0) throw std::out_of_range("bad path");
                cur = cur->s;
                break;
            case TermKind::TyApp:
                if (idx != 0) throw std::out_of_range("bad path");
                cur = cur->s;
                break;
            case TermKind::App:
                if (idx == 0) cur = cur->s;
                else if (idx == 1) cur = cur->t;
                else throw std::out_of_range("bad path");
                break;
            default:
                throw std::out_of_range("bad path");
        }
    }
    return cur;
}

namespace {

TermPtr splice(const TermPtr& t, const Path& p, std::size_t d, const TermPtr& repl) {
    if (d == p.size()) return repl;
    int idx = p[d];
    switch (t->kind) {
        case TermKind::Sum: {
            auto parts = flat(t);
            parts[idx] = splice(parts[idx], p, d + 1, repl);
            return unflat(parts);
        }
        case TermKind::Lam:
            return lam(t->name, t->ann, splice(t->s, p, d + 1, repl));
        case TermKind::TyLam:
            return tylam(t->name, splice(t->s, p, d + 1, repl));
        case TermKind::Scale:
            return scale(t->coeff, splice(t->s, p, d + 1, repl));
        case TermKind::TyApp:
            return tyapp(splice(t->s, p, d + 1, repl), t->ann);
        case TermKind::App:
            if (idx == 0) return app(splice(t->s, p, d + 1, repl), t->t);
            return app(t->s, splice(t->t, p, d + 1, repl));
        default:
            throw std::out_of_range("bad path");
    }
}

// A step available at the current node: the redex (binary view for sum
// pairs), its contractum, the new subtree standing at the node, and the
// unscaled cores when a factoring pair was matched.
struct Local {
    RuleId rule;
    TermPtr redex;
    TermPtr contractum;
    TermPtr replaced;
    TermPtr f_left;
    TermPtr f_right;
};

TermPtr instantiate_wrappers(const std::vector<std::string>& binders, const TermPtr& lamnode,
                             const std::vector<TypePtr>& w) {
    // Rename the wrapper binders to fresh names first so that one
    // substitution cannot capture type variables of another's replacement.
    std::set<std::string> avoid = free_type_vars_in_term(lamnode);
    for (const auto& u : w) {
        auto fv = free_type_vars(u);
        avoid.insert(fv.begin(), fv.end());
    }
    for (const auto& b : binders) avoid.insert(b);
    std::vector<std::string> fresh;
    for (const auto& b : binders) {
        std::string f = fresh_name(b, avoid);
        avoid.insert(f);
        fresh.push_back(f);
    }
    TermPtr body = lamnode;
    for (std::size_t i = 0; i < binders.size(); ++i)
        body = subst_type_in_term(body, binders[i], tvar(fresh[i]));
    for (std::size_t i = 0; i < fresh.size(); ++i)
        body = subst_type_in_term(body, fresh[i], w[i]);
    return body;
}

struct Walker {
    bool erased_mode;
    const PolyHook& hook;

    TermPtr mkzero(const TermPtr& witness) const {
        if (erased_mode || !witness) return zero(nullptr);
        return zero(witness);
    }

    void scale_locals(const TermPtr& t, std::vector<Local>& out) const {
        const Scalar& a = t->coeff;
        const TermPtr& b = t->s;
        if (a.is_zero())
            out.push_back({RuleId::E1, t, mkzero(b), mkzero(b), nullptr, nullptr});
        if (a.is_one())
            out.push_back({RuleId::E2, t, b, b, nullptr, nullptr});
        if (b->kind == TermKind::Zero)
            out.push_back({RuleId::E3, t, b, b, nullptr, nullptr});
        if (b->kind == TermKind::Scale) {
            TermPtr r = scale(a * b->coeff, b->s);
            out.push_back({RuleId::E4, t, r, r, nullptr, nullptr});
        }
        if (b->kind == TermKind::Sum) {
            std::vector<TermPtr> parts;
            for (const auto& p : flat(b)) parts.push_back(scale(a, p));
            TermPtr r = unflat(parts);
            out.push_back({RuleId::E5, t, r, r, nullptr, nullptr});
        }
    }

    void sum_locals(const TermPtr& t, std::vector<Local>& out) const {
        auto parts = flat(t);
        const std::size_t n = parts.size();
        auto rest_with = [&](std::size_t i, const TermPtr& merged, std::size_t dropped) {
            std::vector<TermPtr> np;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == dropped) continue;
                np.push_back(k == i ? merged : parts[k]);
            }
            return unflat(np);
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const TermPtr& pi = parts[i];
                const TermPtr& pj = parts[j];
                bool si = pi->kind == TermKind::Scale;
                bool sj = pj->kind == TermKind::Scale;
                if (si && sj && erased_alpha(pi->s, pj->s)) {
                    TermPtr merged = scale(pi->coeff + pj->coeff, pi->s);
                    out.push_back({RuleId::F1, sum(pi, pj), merged, rest_with(i, merged, j),
                                   pi->s, pj->s});
                }
                if (si && !sj && erased_alpha(pi->s, pj)) {
                    TermPtr merged = scale(pi->coeff + Scalar(1), pi->s);
                    out.push_back({RuleId::F2, sum(pi, pj), merged, rest_with(i, merged, j),
                                   pi->s, pj});
                }
                if (!si && !sj && erased_alpha(pi, pj)) {
                    TermPtr merged = scale(Scalar(1) + Scalar(1), pi);
                    out.push_back({RuleId::F3, sum(pi, pj), merged, rest_with(i, merged, j),
                                   pi, pj});
                }
            }
            if (parts[i]->kind == TermKind::Zero) {
                std::vector<TermPtr> np;
                for (std::size_t k = 0; k < n; ++k)
                    if (k != i) np.push_back(parts[k]);
                out.push_back({RuleId::F4, t, unflat(np), unflat(np), nullptr, nullptr});
            }
        }
    }

    void app_locals(const TermPtr& t, const std::map<std::string, TypePtr>& env,
                    std::vector<Local>& out) const {
        const TermPtr& f = t->s;
        const TermPtr& a = t->t;
        if (f->kind == TermKind::Sum) {
            std::vector<TermPtr> parts;
            for (const auto& p : flat(f)) parts.push_back(app(p, a));
            TermPtr r = unflat(parts);
            out.push_back({RuleId::A1, t, r, r, nullptr, nullptr});
        }
        if (f->kind == TermKind::Scale) {
            TermPtr r = scale(f->coeff, app(f->s, a));
            out.push_back({RuleId::A3, t, r, r, nullptr, nullptr});
        }
        if (f->kind == TermKind::Zero) {
            TermPtr w = f->s ? app(f->s, a) : nullptr;
            out.push_back({RuleId::A5, t, mkzero(w), mkzero(w), nullptr, nullptr});
        }
        if (a->kind == TermKind::Sum) {
            std::vector<TermPtr> parts;
            for (const auto& p : flat(a)) parts.push_back(app(f, p));
            TermPtr r = unflat(parts);
            out.push_back({RuleId::A2, t, r, r, nullptr, nullptr});
        }
        if (a->kind == TermKind::Scale) {
            TermPtr r = scale(a->coeff, app(f, a->s));
            out.push_back({RuleId::A4, t, r, r, nullptr, nullptr});
        }
        if (a->kind == TermKind::Zero) {
            TermPtr w = a->s ? app(f, a->s) : nullptr;
            out.push_back({RuleId::A6, t, mkzero(w), mkzero(w), nullptr, nullptr});
        }
        // Beta, gated on basis arguments; quantifier wrappers on the function
        // are transparent but need the instantiation callback.
        std::vector<std::string> binders;
        TermPtr g = f;
        while (g->kind == TermKind::TyLam) {
            binders.push_back(g->name);
            g = g->s;
        }
        if (g->kind != TermKind::Lam) return;
        if (!is_basis(erase(a))) return;
        TermPtr core = g;
        if (!binders.empty()) {
            if (!hook || !g->ann) return;
            auto w = hook(binders, g->ann, a, env);
            if (!w) return;
            core = instantiate_wrappers(binders, g, *w);
        }
        TermPtr r = subst_term(core->s, core->name, a);
        out.push_back({RuleId::B, t, r, r, nullptr, nullptr});
    }

    void tyapp_locals(const TermPtr& t, std::vector<Local>& out) const {
        const TermPtr& f = t->s;
        if (f->kind == TermKind::TyLam) {
            TermPtr r = subst_type_in_term(f->s, f->name, t->ann);
            out.push_back({RuleId::NTyBeta, t, r, r, nullptr, nullptr});
        }
        if (f->kind == TermKind::Sum) {
            std::vector<TermPtr> parts;
            for (const auto& p : flat(f)) parts.push_back(tyapp(p, t->ann));
            TermPtr r = unflat(parts);
            out.push_back({RuleId::NTyAppSum, t, r, r, nullptr, nullptr});
        }
        if (f->kind == TermKind::Scale) {
            TermPtr r = scale(f->coeff, tyapp(f->s, t->ann));
            out.push_back({RuleId::NTyAppScale, t, r, r, nullptr, nullptr});
        }
        if (f->kind == TermKind::Zero) {
            TermPtr r = zero(f->s ? tyapp(f->s, t->ann) : nullptr);
            out.push_back({RuleId::NTyAppZero, t, r, r, nullptr, nullptr});
        }
    }

    void tylam_locals(const TermPtr& t, std::vector<Local>& out) const {
        const TermPtr& b = t->s;
        if (b->kind == TermKind::Sum) {
            std::vector<TermPtr> parts;
            for (const auto& p : flat(b)) parts.push_back(tylam(t->name, p));
            TermPtr r = unflat(parts);
            out.push_back({RuleId::NTyLamSum, t, r, r, nullptr, nullptr});
        }
        if (b->kind == TermKind::Scale) {
            TermPtr r = scale(b->coeff, tylam(t->name, b->s));
            out.push_back({RuleId::NTyLamScale, t, r, r, nullptr, nullptr});
        }
        if (b->kind == TermKind::Zero) {
            TermPtr r = zero(b->s ? tylam(t->name, b->s) : nullptr);
            out.push_back({RuleId::NTyLamZero, t, r, r, nullptr, nullptr});
        }
    }

    void locals(const TermPtr& t, const std::map<std::string, TypePtr>& env,
                std::vector<Local>& out) const {
        switch (t->kind) {
            case TermKind::Scale: scale_locals(t, out); break;
            case TermKind::Sum: sum_locals(t, out); break;
            case TermKind::App: app_locals(t, env, out); break;
            case TermKind::TyApp: tyapp_locals(t, out); break;
            case TermKind::TyLam: tylam_locals(t, out); break;
            default: break;
        }
    }

    // Children in traversal order: (index, subterm, optional binder to push).
    struct Child {
        int idx;
        TermPtr sub;
        const std::string* bind_name;
        TypePtr bind_ann;
    };
    std::vector<Child> children(const TermPtr& t) const {
        std::vector<Child> out;
        switch (t->kind) {
            case TermKind::Sum: {
                auto parts = flat(t);
                for (std::size_t i = 0; i < parts.size(); ++i)
                    out.push_back({static_cast<int>(i), parts[i], nullptr, nullptr});
                break;
            }
            case TermKind::Lam:
                out.push_back({0, t->s, &t->name, t->ann});
                break;
            case TermKind::TyLam:
            case TermKind::Scale:
            case TermKind::TyApp:
                out.push_back({0, t->s, nullptr, nullptr});
                break;
            case TermKind::App:
                out.push_back({0, t->s, nullptr, nullptr});
                out.push_back({1, t->t, nullptr, nullptr});
                break;
            default:
                break;  // variables and zeros; witnesses stay frozen
        }
        return out;
    }

    void collect(const TermPtr& t, std::map<std::string, TypePtr>& env, Path& path,
                 const TermPtr& root, std::vector<RewriteStep>& out) const {
        for (const auto& c : children(t)) {
            path.push_back(c.idx);
            if (c.bind_name) {
                auto it = env.find(*c.bind_name);
                TypePtr old = it == env.end() ? nullptr : it->second;
                bool had = it != env.end();
                if (c.bind_ann) env[*c.bind_name] = c.bind_ann;
                else env.erase(*c.bind_name);
                collect(c.sub, env, path, root, out);
                if (had) env[*c.bind_name] = old;
                else env.erase(*c.bind_name);
            } else {
                collect(c.sub, env, path, root, out);
            }
            path.pop_back();
        }
        std::vector<Local> here;
        locals(t, env, here);
        for (const auto& l : here) {
            TermPtr after = splice(root, path, 0, l.replaced);
            out.push_back({l.rule, path, root, after, l.redex, l.contractum, l.f_left, l.f_right});
        }
    }

    // First step in post-order restricted by pred; pred sees only the rule.
    std::optional<RewriteStep> find(const TermPtr& t, std::map<std::string, TypePtr>& env,
                                    Path& path, const TermPtr& root,
                                    const std::function<bool(RuleId)>& pred) const {
        for (const auto& c : children(t)) {
            path.push_back(c.idx);
            std::optional<RewriteStep> got;
            if (c.bind_name) {
                auto it = env.find(*c.bind_name);
                TypePtr old = it == env.end() ? nullptr : it->second;
                bool had = it != env.end();
                if (c.bind_ann) env[*c.bind_name] = c.bind_ann;
                else env.erase(*c.bind_name);
                got = find(c.sub, env, path, root, pred);
                if (had) env[*c.bind_name] = old;
                else env.erase(*c.bind_name);
            } else {
                got = find(c.sub, env, path, root, pred);
            }
            path.pop_back();
            if (got) return got;
        }
        std::vector<Local> here;
        locals(t, env, here);
        for (const auto& l : here) {
            if (!pred(l.rule)) continue;
            TermPtr after = splice(root, path, 0, l.replaced);
            return RewriteStep{l.rule, path, root, after, l.redex, l.contractum, l.f_left,
                               l.f_right};
        }
        return std::nullopt;
    }
};

bool factor_rule(RuleId r) { return r == RuleId::F1 || r == RuleId::F2 || r == RuleId::F3; }

bool passes_filter(RuleId r, RuleFilter f) {
    return f == RuleFilter::All || !factor_rule(r);
}

std::optional<RewriteStep> pick_filtered(const TermPtr& t, Strategy s, RuleFilter f,
                                         const PolyHook& hook) {
    Walker w{is_erased(t), hook};
    std::map<std::string, TypePtr> env;
    Path path;
    auto run = [&](const std::function<bool(RuleId)>& pred) {
        return w.find(t, env, path, t, pred);
    };
    if (s == Strategy::FactorFirst) {
        // algebraic-eager: factoring anywhere, then the other algebraic
        // steps, and only then beta
        auto got = run([&](RuleId r) {
            return group(r) == RuleGroup::F && passes_filter(r, f);
        });
        if (!got) got = run([&](RuleId r) { return r != RuleId::B && passes_filter(r, f); });
        if (got) return got;
    }
    if (s == Strategy::UnfoldFirst) {
        auto got = run([](RuleId r) { return r == RuleId::B; });
        if (got) return got;
    }
    // One post-order pass: the deepest redex fires first, and a node's own
    // algebraic steps come before its beta step (locals list beta last).
    return run([&](RuleId r) { return passes_filter(r, f); });
}

Trace run_normalize(const TermPtr& t, long fuel, Strategy s, RuleFilter f,
                    const PolyHook& hook) {
    Trace tr;
    tr.initial = t;
    TermPtr cur = t;
    long used = 0;
    while (true) {
        auto step = pick_filtered(cur, s, f, hook);
        if (!step) break;
        if (++used > fuel)
            throw FuelExhausted("no normal form within " + std::to_string(fuel) + " steps");
        cur = step->after;
        tr.steps.push_back(std::move(*step));
    }
    tr.final_term = cur;
    return tr;
}

void key_rec(const TermPtr& t, std::vector<std::string>& tenv, std::vector<std::string>& yenv,
             bool ann, std::string& out);

std::string ann_type_key(const TypePtr& ty, const std::vector<std::string>& yenv) {
    // Bound type variables of enclosing term-level quantifiers get positional
    // names so the key stays invariant under their renaming.
    TypePtr cur = ty;
    for (std::size_t i = yenv.size(); i-- > 0;)
        cur = subst_type(cur, yenv[i], tvar("#" + std::to_string(i)));
    return canon(cur).key();
}

void key_rec(const TermPtr& t, std::vector<std::string>& tenv, std::vector<std::string>& yenv,
             bool ann, std::string& out) {
    switch (t->kind) {
        case TermKind::Var: {
            for (std::size_t i = tenv.size(); i-- > 0;) {
                if (tenv[i] == t->name) {
                    out += 'v';
                    out += std::to_string(tenv.size() - 1 - i);
                    return;
                }
            }
            out += 'f';
            out += t->name;
            out += ';';
            return;
        }
        case TermKind::Lam:
            out += 'L';
            if (ann && t->ann) {
                out += '[';
                out += ann_type_key(t->ann, yenv);
                out += ']';
            }
            out += '(';
            tenv.push_back(t->name);
            key_rec(t->s, tenv, yenv, ann, out);
            tenv.pop_back();
            out += ')';
            return;
        case TermKind::App:
            out += "A(";
            key_rec(t->s, tenv, yenv, ann, out);
            out += ',';
            key_rec(t->t, tenv, yenv, ann, out);
            out += ')';
            return;
        case TermKind::Zero:
            out += 'Z';
            if (ann && t->s) {
                out += '(';
                key_rec(t->s, tenv, yenv, ann, out);
                out += ')';
            }
            return;
        case TermKind::Scale:
            out += "S{";
            out += t->coeff.to_string();
            out += "}(";
            key_rec(t->s, tenv, yenv, ann, out);
            out += ')';
            return;
        case TermKind::Sum: {
            std::vector<std::string> keys;
            for (const auto& p : flat(t)) {
                std::string k;
                key_rec(p, tenv, yenv, ann, k);
                keys.push_back(std::move(k));
            }
            std::sort(keys.begin(), keys.end());
            out += "P(";
            for (std::size_t i = 0; i < keys.size(); ++i) {
                if (i) out += ';';
                out += keys[i];
            }
            out += ')';
            return;
        }
        case TermKind::TyLam:
            out += "TL(";
            yenv.push_back(t->name);
            key_rec(t->s, tenv, yenv, ann, out);
            yenv.pop_back();
            out += ')';
            return;
        case TermKind::TyApp:
            out += "TA[";
            out += ann_type_key(t->ann, yenv);
            out += "](";
            key_rec(t->s, tenv, yenv, ann, out);
            out += ')';
            return;
    }
}

std::string key_of(const TermPtr& t, bool ann) {
    std::vector<std::string> tenv, yenv;
    std::string out;
    key_rec(t, tenv, yenv, ann, out);
    return out;
}

}  // namespace

std::vector<RewriteStep> one_step(const TermPtr& t, const PolyHook& hook) {
    Walker w{is_erased(t), hook};
    std::map<std::string, TypePtr> env;
    Path path;
    std::vector<RewriteStep> raw;
    w.collect(t, env, path, t, raw);
    std::vector<RewriteStep> out;
    std::set<std::string> seen;
    for (auto& s : raw) {
        std::string k = rule_id_name(s.rule);
        k += '@';
        k += path_string(s.path);
        k += ':';
        k += ac_key_annotated(s.after);
        if (seen.insert(k).second) out.push_back(std::move(s));
    }
    return out;
}

std::optional<RewriteStep> pick_step(const TermPtr& t, Strategy s, RuleFilter f,
                                     const PolyHook& hook) {
    return pick_filtered(t, s, f, hook);
}

Trace normalize(const TermPtr& t, long fuel, Strategy s, const PolyHook& hook) {
    return run_normalize(t, fuel, s, RuleFilter::All, hook);
}

Trace normalize_no_F(const TermPtr& t, long fuel, Strategy s, const PolyHook& hook) {
    return run_normalize(t, fuel, s, RuleFilter::NoFactor, hook);
}

std::string ac_key(const TermPtr& t) { return key_of(erase(t), false); }

std::string ac_key_annotated(const TermPtr& t) { return key_of(t, true); }

std::string to_string(const Trace& tr) {
    std::ostringstream os;
    for (const auto& s : tr.steps) {
        os << rule_id_name(s.rule) << " @ " << path_string(s.path) << " : "
           << to_string(s.redex) << " => " << to_string(s.contractum) << "\n";
    }
    return os.str();
}

std::optional<TermPtr> join(const TermPtr& a, const TermPtr& b, long fuel,
                            const PolyHook& hook) {
    // The meet is modulo AC+alpha of the erased skeleton (annotations and
    // zero witnesses are carriage), but the frontier is deduplicated on the
    // annotated form: annotation-level steps are often prerequisites for the
    // scalar-changing merge that closes a peak, and collapsing them to their
    // erasure would prune the only path to the meet.
    if (ac_key(a) == ac_key(b)) return a;
    std::map<std::string, TermPtr> met_a{{ac_key(a), a}};
    std::map<std::string, TermPtr> met_b{{ac_key(b), b}};
    std::set<std::string> seen_a{ac_key_annotated(a)};
    std::set<std::string> seen_b{ac_key_annotated(b)};
    std::deque<TermPtr> qa{a}, qb{b};
    long used = 0;
    while ((!qa.empty() || !qb.empty()) && used < fuel) {
        for (auto* side : {&qa, &qb}) {
            bool is_a = side == &qa;
            auto& seen = is_a ? seen_a : seen_b;
            auto& met = is_a ? met_a : met_b;
            auto& other = is_a ? met_b : met_a;
            if (side->empty()) continue;
            TermPtr cur = side->front();
            side->pop_front();
            for (const auto& s : one_step(cur, hook)) {
                if (++used > fuel) return std::nullopt;
                std::string k = ac_key(s.after);
                if (other.count(k)) return s.after;
                met.emplace(k, s.after);
                if (seen.insert(ac_key_annotated(s.after)).second) {
                    side->push_back(s.after);
                }
            }
        }
    }
    return std::nullopt;
}

bool replay_step(const RewriteStep& s, const PolyHook& hook) {
    std::string want = ac_key_annotated(s.after);
    for (const auto& cand : one_step(s.before, hook)) {
        if (cand.rule != s.rule) continue;
        if (cand.path != s.path) continue;
        if (ac_key_annotated(cand.after) == want) return true;
    }
    return false;
}

}  // namespace lambdavec
