#include "lambdavec/audit.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lambdavec/encodings.hpp"
#include "lambdavec/error.hpp"
#include "lambdavec/typesys.hpp"

namespace lambdavec {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int pick(int n) {
        if (n <= 1) return 0;
        return static_cast<int>(gen_.next_raw() % static_cast<std::uint64_t>(n));
    }
    bool chance(int num, int den) { return pick(den) < num; }

    // Small Gaussian rationals plus the two halved square roots; one zero
    // case keeps the degenerate scalings in circulation.
    Scalar coefficient() {
        switch (pick(12)) {
            case 0: return Scalar::zero();
            case 1:
            case 2: return Scalar::one();
            case 3: return Scalar(-1);
            case 4: return Scalar(2);
            case 5: return Scalar::rational(Rational(1, 2));
            case 6: return Scalar::rational(Rational(-1, 2));
            case 7: return Scalar::i();
            case 8: return Scalar(0, 0, -1, 0);
            case 9: return Scalar(0, Rational(1, 2), 0, 0);
            case 10: return Scalar(0, Rational(-1, 2), 0, 0);
            default: return Scalar(3);
        }
    }

private:
    ScalarGen gen_;
};

TypePtr idty() { return forall("Z", arrow(tvar("Z"), tvar("Z"))); }
TypePtr select_first_ty() {
    return forall("X", forall("Y", arrow(tvar("X"), arrow(tvar("Y"), tvar("X")))));
}
TypePtr select_second_ty() {
    return forall("X", forall("Y", arrow(tvar("X"), arrow(tvar("Y"), tvar("Y")))));
}

std::vector<TermPtr> flat_parts(const TermPtr& t) {
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

// The core a factoring match would compare: the body of a scaled summand,
// the summand itself otherwise.
TermPtr merge_core(const TermPtr& summand) {
    return summand->kind == TermKind::Scale ? summand->s : summand;
}

// Well-typed term generator. Every recipe types by construction; sums built
// in positions where a factoring step's typing evidence could not be
// threaded through the surrounding type (under type abstractions and
// applications) are kept free of same-shape summands with differing
// annotations, so that any factoring step there relates equal types.
struct Builder {
    Rng& g;
    int next_var = 0;
    int next_tyvar = 0;

    struct Scope {
        std::vector<std::pair<std::string, TypePtr>> vars;
        std::vector<std::string> tyvars;
        bool fact_safe = true;
    };

    std::string fresh_var() { return "v" + std::to_string(++next_var); }
    std::string fresh_tyvar() { return "T" + std::to_string(++next_tyvar); }

    static Context to_context(const Scope& sc) {
        Context c;
        for (const auto& [n, u] : sc.vars) c.vars[n] = u;
        return c;
    }

    TypePtr unit_ty(const Scope& sc, int depth) {
        if (depth <= 0 || g.chance(1, 2)) {
            if (!sc.tyvars.empty() && g.chance(1, 2))
                return tvar(sc.tyvars[static_cast<std::size_t>(
                    g.pick(static_cast<int>(sc.tyvars.size())))]);
            switch (g.pick(3)) {
                case 0: return idty();
                case 1: return select_first_ty();
                default: return select_second_ty();
            }
        }
        switch (g.pick(3)) {
            case 0: return arrow(unit_ty(sc, depth - 1), unit_ty(sc, depth - 1));
            case 1: {
                TypePtr u1 = unit_ty(sc, depth - 1);
                TypePtr u2 = unit_ty(sc, depth - 1);
                return arrow(unit_ty(sc, depth - 1),
                             sum(scale(g.coefficient(), u1), scale(g.coefficient(), u2)));
            }
            default: {
                std::string b = fresh_tyvar();
                Scope inner = sc;
                inner.tyvars.push_back(b);
                return forall(b, unit_ty(inner, depth - 1));
            }
        }
    }

    TermPtr leaf(const Scope& sc) {
        if (!sc.vars.empty() && g.chance(2, 3)) {
            const auto& [n, u] = sc.vars[static_cast<std::size_t>(
                g.pick(static_cast<int>(sc.vars.size())))];
            (void)u;
            return var(n);
        }
        std::string x = fresh_var();
        return lam(x, unit_ty(sc, 1), var(x));
    }

    // A basis-shaped argument (variable or abstraction) makes beta available.
    TermPtr basis_leaf(const Scope& sc) { return leaf(sc); }

    // True when two summand cores would be merged by a factoring step while
    // their annotations differ, so their types need not agree.
    static bool cross_merge_conflict(const TermPtr& a, const TermPtr& b) {
        for (const auto& pa : flat_parts(a)) {
            TermPtr ca = merge_core(pa);
            std::string ka = ac_key(ca);
            std::string kaa = ac_key_annotated(ca);
            for (const auto& pb : flat_parts(b)) {
                TermPtr cb = merge_core(pb);
                if (ac_key(cb) == ka && ac_key_annotated(cb) != kaa) return true;
            }
        }
        return false;
    }

    TermPtr plain_sum(const Scope& sc, int depth) {
        TermPtr a = gen(sc, depth - 1);
        TermPtr b = gen(sc, depth - 1);
        if (!sc.fact_safe) {
            for (int tries = 0; tries < 4 && cross_merge_conflict(a, b); ++tries)
                b = gen(sc, depth - 1);
            if (cross_merge_conflict(a, b)) b = a;
        }
        return sum(a, b);
    }

    // Two scalings of one shared core: a factoring redex whose two sides
    // carry identical types.
    TermPtr factorable_sum(const Scope& sc, int depth) {
        TermPtr u = gen(sc, depth - 1);
        switch (g.pick(3)) {
            case 0: return sum(scale(g.coefficient(), u), scale(g.coefficient(), u));
            case 1: return sum(scale(g.coefficient(), u), u);
            default: return sum(u, u);
        }
    }

    // Same erased shape under two annotations: the factoring step relates
    // genuinely different types, exercising the order's evidence rule.
    TermPtr twin_sum(const Scope& sc) {
        TypePtr u1 = unit_ty(sc, 1);
        TypePtr u2 = unit_ty(sc, 1);
        std::string x = fresh_var();
        TermPtr a = lam(x, u1, var(x));
        TermPtr b = lam(x, u2, var(x));
        switch (g.pick(3)) {
            case 0: return sum(scale(g.coefficient(), a), scale(g.coefficient(), b));
            case 1: return sum(scale(g.coefficient(), a), b);
            default: return sum(a, b);
        }
    }

    // /\X.\x:X.body applied to anything: the domain variable is bound by
    // every argument summand, so the application types regardless.
    TermPtr poly_app_with(const TermPtr& arg) {
        std::string X = fresh_tyvar();
        std::string x = fresh_var();
        TermPtr body;
        switch (g.pick(4)) {
            case 0: body = var(x); break;
            case 1: body = scale(g.coefficient(), var(x)); break;
            case 2: body = sum(var(x), var(x)); break;
            default: body = sum(scale(g.coefficient(), var(x)), var(x)); break;
        }
        return app(tylam(X, lam(x, tvar(X), body)), arg);
    }

    TermPtr poly_app(const Scope& sc, int depth) {
        Scope inner = sc;
        inner.fact_safe = false;
        TermPtr arg = g.chance(1, 2) ? basis_leaf(sc) : gen(inner, depth - 1);
        return poly_app_with(arg);
    }

    TermPtr mono_app(const Scope& sc, int depth) {
        Scope inner = sc;
        inner.fact_safe = false;
        TermPtr arg = gen(inner, depth - 1);
        CanonType ct = canon(infer(to_context(sc), arg)->type);
        if (ct.parts.size() != 1) return poly_app_with(arg);
        std::string x = fresh_var();
        TypePtr u = ct.parts[0].unit;
        TermPtr body;
        switch (g.pick(3)) {
            case 0: body = var(x); break;
            case 1: body = scale(g.coefficient(), var(x)); break;
            default: body = sum(var(x), var(x)); break;
        }
        return app(lam(x, u, body), arg);
    }

    TermPtr ty_redex(const Scope& sc, int depth) {
        Scope inner = sc;
        inner.fact_safe = false;
        std::string X = fresh_tyvar();
        inner.tyvars.push_back(X);
        TermPtr body = gen(inner, depth - 1);
        return tyapp(tylam(X, body), unit_ty(sc, 1));
    }

    TermPtr gen(const Scope& sc, int depth) {
        if (depth <= 0) return leaf(sc);
        switch (g.pick(16)) {
            case 0: return leaf(sc);
            case 1:
            case 2: {
                std::string x = fresh_var();
                TypePtr u = unit_ty(sc, 2);
                Scope inner = sc;
                inner.vars.emplace_back(x, u);
                return lam(x, u, gen(inner, depth - 1));
            }
            case 3: {
                std::string X = fresh_tyvar();
                Scope inner = sc;
                inner.tyvars.push_back(X);
                inner.fact_safe = false;
                return tylam(X, gen(inner, depth - 1));
            }
            case 4:
            case 5: return scale(g.coefficient(), gen(sc, depth - 1));
            case 6:
            case 7: return plain_sum(sc, depth);
            case 8:
            case 9: return factorable_sum(sc, depth);
            case 10: return sc.fact_safe ? twin_sum(sc) : plain_sum(sc, depth);
            case 11: {
                Scope inner = sc;
                inner.fact_safe = false;
                return zero(gen(inner, depth - 1));
            }
            case 12:
            case 13: return poly_app(sc, depth);
            case 14: return mono_app(sc, depth);
            default: return ty_redex(sc, depth);
        }
    }
};

Context context_at(const TermPtr& root, const Path& p) {
    Context c;
    TermPtr cur = root;
    for (int idx : p) {
        switch (cur->kind) {
            case TermKind::Sum: {
                auto parts = flat_parts(cur);
                cur = parts.at(static_cast<std::size_t>(idx));
                break;
            }
            case TermKind::Lam:
                if (!cur->ann) throw std::logic_error("unannotated binder on path");
                c = c.extended(cur->name, cur->ann);
                cur = cur->s;
                break;
            case TermKind::TyLam:
            case TermKind::Scale:
            case TermKind::TyApp:
                cur = cur->s;
                break;
            case TermKind::App:
                cur = idx == 0 ? cur->s : cur->t;
                break;
            default:
                throw std::out_of_range("path descends into a leaf");
        }
    }
    return c;
}

// The redex rebuilt with the left core standing in for the right one: it
// erases to the original redex and its type collapses to the contractum's,
// witnessing that the merged type also types what was merged.
TermPtr uniform_redex(const RewriteStep& st) {
    switch (st.rule) {
        case RuleId::F1:
            return sum(st.redex->s, scale(st.redex->t->coeff, st.f_left));
        case RuleId::F2:
        case RuleId::F3:
            return sum(st.redex->s, st.f_left);
        case RuleId::F4:
            return sum(st.contractum, zero(st.contractum));
        default:
            throw std::logic_error("not a factoring step");
    }
}

std::string step_label(const RewriteStep& st) {
    return std::string(rule_id_name(st.rule)) + " at " + path_string(st.path);
}

void add_cx(AuditReport& rep, const std::string& check, std::uint64_t seed,
            const std::string& subject, const std::string& detail,
            const std::string& expected, const std::string& actual) {
    rep.counterexamples.push_back({check, seed, subject, detail, expected, actual});
}

struct Subject {
    std::uint64_t seed;  // 0 for fixed corpus entries
    TermPtr term;
    DerivPtr deriv;
};

std::vector<Subject> gather_subjects(const std::vector<TermPtr>& corpus, long samples,
                                     std::uint64_t seed, int size_cap, AuditReport& rep) {
    std::vector<Subject> out;
    for (const auto& t : corpus) {
        Subject s{0, t, nullptr};
        try {
            s.deriv = infer(Context{}, t);
        } catch (const std::exception& e) {
            add_cx(rep, "subject types in the empty context", 0, to_string(t), "-",
                   "a derivation", e.what());
            continue;
        }
        out.push_back(std::move(s));
    }
    TypedTermGenerator gen(seed, size_cap);
    for (long k = 0; k < samples; ++k) {
        auto smp = gen.next();
        out.push_back({smp.seed, smp.term, smp.deriv});
    }
    return out;
}

void check_one_reduct(AuditReport& rep, const Subject& sub, const TypePtr& T,
                      const RewriteStep& st) {
    const std::string subject = to_string(sub.term);
    try {
        DerivPtr da = infer(Context{}, st.after);
        if (group(st.rule) != RuleGroup::F) {
            rep.checks++;
            if (!equiv(da->type, T))
                add_cx(rep, "non-factoring step preserves the type", sub.seed, subject,
                       step_label(st), to_string(canon(T)), to_string(canon(da->type)));
            return;
        }

        const TypePtr S = da->type;
        Context cl = context_at(st.before, st.path);
        std::optional<std::pair<DerivPtr, DerivPtr>> ev;
        if (st.f_left && st.f_right)
            ev = std::make_pair(infer(cl, st.f_left), infer(cl, st.f_right));

        rep.checks++;
        bool below = false;
        std::string err;
        try {
            below = order_leq(S, T, ev);
        } catch (const MissingEvidence& e) {
            err = e.what();
        }
        if (!below)
            add_cx(rep, "merged type lies below the original", sub.seed, subject,
                   step_label(st), to_string(canon(S)) + " below " + to_string(canon(T)),
                   err.empty() ? "order search failed" : err);

        TermPtr uni = uniform_redex(st);
        rep.checks++;
        if (ac_key(uni) != ac_key(st.redex)) {
            add_cx(rep, "uniform redex erases to the redex", sub.seed, subject, step_label(st),
                   "equal erasures", "differing erasures");
            return;
        }
        DerivPtr du = infer(cl, uni);
        DerivPtr dc = infer(cl, st.contractum);
        rep.checks++;
        if (!equiv(du->type, dc->type))
            add_cx(rep, "merged redex re-types at the merged type", sub.seed, subject,
                   step_label(st), to_string(canon(dc->type)), to_string(canon(du->type)));
    } catch (const std::exception& e) {
        rep.checks++;
        add_cx(rep, "reduct checks without error", sub.seed, subject, step_label(st),
               "no exception", e.what());
    }
}

// Lemma-style destructuring of one derivation node; premises recurse.
void check_derivation_node(AuditReport& rep, std::uint64_t seed, const std::string& subject,
                           const DerivPtr& d, const std::string& where) {
    auto cx = [&](const std::string& check, const std::string& expected,
                  const std::string& actual) {
        add_cx(rep, check, seed, subject, where + " (" + rule_name(d->rule) + ")", expected,
               actual);
    };
    try {
        switch (d->rule) {
            case Rule::ArrowE: {
                const ArrowEData& ae = *d->arrow_e;
                TypePtr fun;
                for (std::size_t i = 0; i < ae.results.size(); ++i) {
                    TypePtr u = arrow(ae.domain, ae.results[i]);
                    for (auto it = ae.prefix.rbegin(); it != ae.prefix.rend(); ++it)
                        u = forall(*it, u);
                    TypePtr part = scale(ae.fun_coeffs[i], u);
                    fun = fun ? sum(fun, part) : part;
                }
                rep.checks++;
                if (!fun || !equiv(fun, d->premises[0]->type))
                    cx("recorded function decomposition matches the premise",
                       to_string(canon(d->premises[0]->type)),
                       fun ? to_string(canon(fun)) : "empty");

                TypePtr arg;
                for (std::size_t j = 0; j < ae.arg_units.size(); ++j) {
                    TypePtr part = scale(ae.arg_coeffs[j], ae.arg_units[j]);
                    arg = arg ? sum(arg, part) : part;
                }
                rep.checks++;
                if (!arg || !equiv(arg, d->premises[1]->type))
                    cx("recorded argument decomposition matches the premise",
                       to_string(canon(d->premises[1]->type)),
                       arg ? to_string(canon(arg)) : "empty");

                for (std::size_t j = 0; j < ae.arg_units.size(); ++j) {
                    TypePtr dom = ae.domain;
                    for (std::size_t k = 0; k < ae.prefix.size(); ++k)
                        dom = subst_type(dom, ae.prefix[k], ae.substs[j][k]);
                    rep.checks++;
                    if (!equiv(dom, ae.arg_units[j]))
                        cx("substituted domain matches argument summand " + std::to_string(j),
                           to_string(canon(ae.arg_units[j])), to_string(canon(dom)));
                }

                TypePtr acc;
                for (std::size_t i = 0; i < ae.results.size(); ++i) {
                    for (std::size_t j = 0; j < ae.arg_units.size(); ++j) {
                        TypePtr ti = ae.results[i];
                        for (std::size_t k = 0; k < ae.prefix.size(); ++k)
                            ti = subst_type(ti, ae.prefix[k], ae.substs[j][k]);
                        TypePtr part = scale(ae.fun_coeffs[i] * ae.arg_coeffs[j], ti);
                        acc = acc ? sum(acc, part) : part;
                    }
                }
                rep.checks++;
                if (!acc || !preceq(acc, d->type))
                    cx("rebuilt application type precedes the conclusion",
                       "below " + to_string(canon(d->type)),
                       acc ? to_string(canon(acc)) : "empty");
                break;
            }
            case Rule::ArrowI: {
                const TypePtr* u = d->premises[0]->ctx.lookup(d->term->name);
                rep.checks++;
                if (!u || !preceq(arrow(*u, d->premises[0]->type), d->type))
                    cx("binder arrow precedes the conclusion",
                       "below " + to_string(canon(d->type)),
                       u ? to_string(canon(arrow(*u, d->premises[0]->type)))
                         : "binder missing from premise context");
                break;
            }
            case Rule::SumI: {
                TypePtr both = sum(d->premises[0]->type, d->premises[1]->type);
                rep.checks++;
                if (!preceq(both, d->type))
                    cx("summand types precede the conclusion",
                       "below " + to_string(canon(d->type)), to_string(canon(both)));
                break;
            }
            case Rule::ScaleI: {
                rep.checks++;
                if (!equiv(scale(d->term->coeff, d->premises[0]->type), d->type))
                    cx("scaling the premise gives the conclusion", to_string(canon(d->type)),
                       to_string(canon(scale(d->term->coeff, d->premises[0]->type))));
                break;
            }
            case Rule::ZeroI: {
                rep.checks++;
                if (!equiv(scale(Scalar::zero(), d->premises[0]->type), d->type))
                    cx("zero scaling of the witness gives the conclusion",
                       to_string(canon(d->type)),
                       to_string(canon(scale(Scalar::zero(), d->premises[0]->type))));
                break;
            }
            case Rule::ForallI:
            case Rule::ForallE:
            case Rule::Equiv: {
                rep.checks++;
                if (!preceq(d->premises[0]->type, d->type))
                    cx("premise type precedes the conclusion",
                       "below " + to_string(canon(d->type)),
                       to_string(canon(d->premises[0]->type)));
                break;
            }
            case Rule::Ax:
                break;
        }
    } catch (const std::exception& e) {
        rep.checks++;
        cx("node destructures without error", "no exception", e.what());
    }
    for (std::size_t i = 0; i < d->premises.size(); ++i)
        check_derivation_node(rep, seed, subject, d->premises[i],
                              where + "." + std::to_string(i));
}

struct TreeExplorer {
    const PolyHook& hook;
    long budget = 0;
    std::map<std::string, long> depth_memo;
    std::set<std::string> on_path;

    struct NonTerminating {
        std::string what;
    };

    long explore(const TermPtr& t, int rec) {
        std::string key = ac_key_annotated(t);
        if (auto it = depth_memo.find(key); it != depth_memo.end()) return it->second;
        if (on_path.count(key))
            throw NonTerminating{"reduction cycle through " + to_string(t)};
        if (rec > 4000) throw NonTerminating{"reduction tree deeper than 4000"};
        if (--budget < 0) throw NonTerminating{"reduction tree exceeded the step budget"};
        on_path.insert(key);
        long d = 0;
        for (const auto& st : one_step(t, hook))
            d = std::max(d, 1 + explore(st.after, rec + 1));
        on_path.erase(key);
        depth_memo.emplace(std::move(key), d);
        return d;
    }
};

}  // namespace

TypedTermGenerator::TypedTermGenerator(std::uint64_t seed, int size_cap)
    : master_(seed), size_cap_(size_cap) {}

TermPtr TypedTermGenerator::term_for(std::uint64_t sample_seed) const {
    Rng g(sample_seed);
    for (;;) {
        Builder b{g};
        TermPtr t = b.gen(Builder::Scope{}, 3);
        if (static_cast<int>(term_size(t)) <= size_cap_) return t;
    }
}

TypedTermGenerator::Sample TypedTermGenerator::next() {
    std::uint64_t s = mix64(master_ ^ mix64(++counter_));
    Sample out;
    out.seed = s;
    out.term = term_for(s);
    out.deriv = infer(Context{}, out.term);
    return out;
}

std::vector<TermPtr> audit_corpus() {
    const Prelude& p = prelude();
    std::vector<TermPtr> out;
    for (const auto& d : p.defs) out.push_back(d.term);

    Scalar h(0, Rational(1, 2), 0, 0);  // sqrt2/2
    out.push_back(release(app(p.term("hadamard"), p.term("truei"))));
    out.push_back(release(app(p.term("hadamard"), p.term("falsei"))));
    out.push_back(
        release(app(p.term("hadamard"), scale(h, sum(p.term("truei"), p.term("falsei"))))));

    // The same erased boolean at two instantiations: its factoring step
    // relates two genuinely different types through the order.
    TermPtr other_true = tyapp(tyapp(p.term("true"), idty()), idty());
    out.push_back(sum(scale(h, p.term("truei")),
                      scale(Scalar::rational(Rational(1, 2)), other_true)));

    // Summed projections applied to differently packed pairs.
    TermPtr pk1 = app(app(tyapp(tyapp(p.term("pair"), select_first_ty()), select_second_ty()),
                          p.term("true")),
                      p.term("false"));
    TermPtr pk2 =
        app(app(tyapp(tyapp(p.term("pair"), idty()), select_first_ty()), p.term("id")),
            p.term("true"));
    out.push_back(app(sum(p.term("pi1"), p.term("pi2")), sum(pk1, pk2)));

    // A conditional driven by a superposed guard.
    out.push_back(encode_if(sum(scale(h, p.term("true")), scale(h, p.term("false"))),
                            p.term("id"), p.term("id")));
    return out;
}

AuditReport audit_subject_reduction(const std::vector<TermPtr>& corpus, long samples, long fuel,
                                    std::uint64_t seed, int size_cap) {
    AuditReport rep;
    rep.kind = "subject-reduction";
    rep.seed = seed;
    PolyHook hook = checker_poly_hook();
    for (const auto& sub : gather_subjects(corpus, samples, seed, size_cap, rep)) {
        rep.samples++;
        const TypePtr T = sub.deriv->type;
        long examined = 0;
        for (const auto& st : one_step(sub.term, hook)) {
            if (examined++ >= fuel) break;
            check_one_reduct(rep, sub, T, st);
        }
    }
    return rep;
}

AuditReport audit_local_confluence(long samples, int size_cap, long fuel, std::uint64_t seed) {
    AuditReport rep;
    rep.kind = "local-confluence";
    rep.seed = seed;
    PolyHook hook = checker_poly_hook();
    TypedTermGenerator gen(seed, size_cap);
    for (long k = 0; k < samples; ++k) {
        auto smp = gen.next();
        rep.samples++;
        auto steps = one_step(smp.term, hook);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            for (std::size_t j = i + 1; j < steps.size(); ++j) {
                rep.checks++;
                const TermPtr& a = steps[i].after;
                const TermPtr& b = steps[j].after;
                if (ac_key(a) == ac_key(b)) continue;
                if (join(a, b, fuel, hook)) continue;
                rep.inconclusive++;
                rep.inconclusive_details.push_back(
                    {"peak joins within the search budget", smp.seed, to_string(smp.term),
                     step_label(steps[i]) + " versus " + step_label(steps[j]),
                     "a common reduct", "none found within fuel"});
            }
        }
    }
    return rep;
}

AuditReport audit_strong_normalization(long samples, long fuel, std::uint64_t seed,
                                       int size_cap) {
    AuditReport rep;
    rep.kind = "strong-normalization";
    rep.seed = seed;
    PolyHook hook = checker_poly_hook();
    TreeExplorer ex{hook, 0, {}, {}};
    for (const auto& sub : gather_subjects(audit_corpus(), samples, seed, size_cap, rep)) {
        rep.samples++;
        ex.budget = fuel;
        rep.checks++;
        try {
            long d = ex.explore(sub.term, 0);
            rep.max_depth = std::max(rep.max_depth, d);
        } catch (const TreeExplorer::NonTerminating& nt) {
            add_cx(rep, "every reduction sequence terminates", sub.seed, to_string(sub.term),
                   "-", "a finite reduction tree", nt.what);
            ex.on_path.clear();
        } catch (const std::exception& e) {
            add_cx(rep, "reduction tree explores without error", sub.seed, to_string(sub.term),
                   "-", "no exception", e.what());
            ex.on_path.clear();
        }
    }
    return rep;
}

AuditReport audit_generation_lemmas(long samples, std::uint64_t seed, int size_cap) {
    AuditReport rep;
    rep.kind = "generation-lemmas";
    rep.seed = seed;
    for (const auto& sub : gather_subjects(audit_corpus(), samples, seed, size_cap, rep)) {
        rep.samples++;
        check_derivation_node(rep, sub.seed, to_string(sub.term), sub.deriv, "root");
    }
    return rep;
}

namespace {

void render_cx(std::ostringstream& os, const char* tag, const Counterexample& c) {
    os << "  " << tag << " [" << c.check << "] seed " << c.seed << "\n"
       << "    subject: " << c.subject << "\n"
       << "    at: " << c.detail << "\n"
       << "    expected " << c.expected << ", got " << c.actual << "\n";
}

nlohmann::json cx_json(const Counterexample& c) {
    return {{"check", c.check},       {"seed", c.seed},         {"subject", c.subject},
            {"detail", c.detail},     {"expected", c.expected}, {"actual", c.actual}};
}

}  // namespace

std::string to_string(const AuditReport& r) {
    std::ostringstream os;
    os << r.kind << " audit: seed " << r.seed << ", " << r.samples << " subjects, " << r.checks
       << " checks, " << r.counterexamples.size() << " counterexamples";
    if (r.inconclusive) os << ", " << r.inconclusive << " inconclusive";
    if (r.max_depth) os << ", max reduction depth " << r.max_depth;
    os << "\n";
    for (const auto& c : r.counterexamples) render_cx(os, "counterexample", c);
    for (const auto& c : r.inconclusive_details) render_cx(os, "inconclusive", c);
    return os.str();
}

std::string to_json(const AuditReport& r) {
    nlohmann::json j;
    j["kind"] = r.kind;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["checks"] = r.checks;
    j["inconclusive"] = r.inconclusive;
    j["max_depth"] = r.max_depth;
    j["ok"] = r.ok();
    j["counterexamples"] = nlohmann::json::array();
    for (const auto& c : r.counterexamples) j["counterexamples"].push_back(cx_json(c));
    j["inconclusive_details"] = nlohmann::json::array();
    for (const auto& c : r.inconclusive_details) j["inconclusive_details"].push_back(cx_json(c));
    return j.dump(2);
}

}  // namespace lambdavec
