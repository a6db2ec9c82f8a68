#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "lambdavec/audit.hpp"
#include "lambdavec/encodings.hpp"
#include "lambdavec/error.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/rewrite.hpp"
#include "lambdavec/typesys.hpp"

using namespace lambdavec;

namespace {

TypePtr idty() { return parse_type("!Z.Z->Z"); }

Scalar half_sqrt2() { return parse_scalar("sqrt2/2"); }

// invariant: every step of a singleton-corpus audit must pass
AuditReport audit_one(const TermPtr& t) {
    return audit_subject_reduction({t}, 0, 1000, 1);
}

const DerivPtr* find_rule(const DerivPtr& d, Rule r) {
    if (d->rule == r) return &d;
    for (const auto& p : d->premises)
        if (const DerivPtr* hit = find_rule(p, r)) return hit;
    return nullptr;
}

}  // namespace

TEST_CASE("generated terms type, replay, and rebuild from their seeds") {
    TypedTermGenerator gen(2026, 14);
    for (int k = 0; k < 120; ++k) {
        auto smp = gen.next();
        CHECK(free_vars(smp.term).empty());
        CHECK(term_size(smp.term) <= 14);
        CHECK(replay(smp.deriv));
        CHECK(alpha_eq(gen.term_for(smp.seed), smp.term));
    }

    TypedTermGenerator a(99, 12), b(99, 12);
    for (int k = 0; k < 40; ++k)
        CHECK(ac_key_annotated(a.next().term) == ac_key_annotated(b.next().term));
}

TEST_CASE("non-factoring steps preserve the type exactly") {
    const Prelude& p = prelude();
    PolyHook hook = checker_poly_hook();

    TermPtr t = app(lam("x", p.type_of("true"), var("x")), p.term("true"));
    TypePtr T = infer(Context{}, t)->type;
    auto steps = one_step(t, hook);
    bool saw_beta = false;
    for (const auto& st : steps) {
        if (st.rule == RuleId::B) saw_beta = true;
        CHECK(group(st.rule) != RuleGroup::F);
        CHECK(equiv(infer(Context{}, st.after)->type, T));
    }
    CHECK(saw_beta);
    CHECK(audit_one(t).ok());

    // annotation-level resolution steps also keep the type
    TermPtr n = tyapp(tylam("X", lam("y", tvar("X"), var("y"))), idty());
    CHECK(audit_one(n).ok());
}

TEST_CASE("a factoring step relates two instantiations through the order") {
    const Prelude& p = prelude();
    PolyHook hook = checker_poly_hook();

    TermPtr other_true = tyapp(tyapp(p.term("true"), idty()), idty());
    TermPtr t = sum(scale(half_sqrt2(), p.term("truei")),
                    scale(parse_scalar("1/2"), other_true));
    TypePtr T = infer(Context{}, t)->type;
    CHECK(canon(T).parts.size() == 2);

    bool saw_f1 = false;
    for (const auto& st : one_step(t, hook)) {
        if (st.rule != RuleId::F1) continue;
        saw_f1 = true;
        TypePtr S = infer(Context{}, st.after)->type;
        CHECK(canon(S).parts.size() == 1);
        auto ev = std::make_pair(infer(Context{}, st.f_left), infer(Context{}, st.f_right));
        CHECK(order_leq(S, T, std::optional{ev}));
        // without the derivation pair the needed fact is missing
        CHECK_THROWS_AS(order_leq(S, T, std::nullopt), MissingEvidence);
        CHECK(!equiv(S, T));
    }
    CHECK(saw_f1);
    CHECK(audit_one(t).ok());
}

TEST_CASE("dropping a zero summand moves below the original type") {
    const Prelude& p = prelude();
    PolyHook hook = checker_poly_hook();

    TermPtr t = sum(p.term("id"), zero(p.term("true")));
    TypePtr T = infer(Context{}, t)->type;
    bool saw_f4 = false;
    for (const auto& st : one_step(t, hook)) {
        if (st.rule != RuleId::F4) continue;
        saw_f4 = true;
        TypePtr S = infer(Context{}, st.after)->type;
        CHECK(equiv(S, idty()));
        CHECK(order_leq(S, T, std::nullopt));
        CHECK(!equiv(S, T));
    }
    CHECK(saw_f4);
    CHECK(audit_one(t).ok());
}

TEST_CASE("factoring under wrappers stays auditable") {
    TermPtr a = lam("x", parse_type("!Z.Z->Z"), var("x"));
    TermPtr b = lam("x", parse_type("!X.!Y.X->(Y->X)"), var("x"));
    TermPtr twins = sum(scale(parse_scalar("i"), a), scale(parse_scalar("2"), b));

    CHECK(audit_one(twins).ok());
    CHECK(audit_one(scale(parse_scalar("sqrt2"), twins)).ok());
    CHECK(audit_one(lam("y", idty(), twins)).ok());
    CHECK(audit_one(sum(twins, prelude().term("id"))).ok());
    CHECK(audit_one(sum(scale(parse_scalar("1/2"), a), b)).ok());  // scaled against bare
    CHECK(audit_one(sum(a, b)).ok());                              // both bare
}

TEST_CASE("subject reduction audit runs clean over corpus and samples") {
    auto corpus = audit_corpus();
    AuditReport r = audit_subject_reduction(corpus, 80, 400, 11);
    CHECK(r.ok());
    CHECK(r.samples == static_cast<long>(corpus.size()) + 80);
    CHECK(r.checks > 100);
    CHECK(to_string(r).find("0 counterexamples") != std::string::npos);
}

TEST_CASE("subjects that fail to type land in the report") {
    const Prelude& p = prelude();
    TermPtr bad = app(lam("x", idty(), var("x")), p.term("true"));
    AuditReport r = audit_subject_reduction({bad}, 0, 10, 1);
    CHECK(!r.ok());
    REQUIRE(r.counterexamples.size() == 1);
    CHECK(r.counterexamples[0].check == "subject types in the empty context");
    CHECK(r.counterexamples[0].seed == 0);
    CHECK(to_json(r).find("\"ok\": false") != std::string::npos);
}

TEST_CASE("peaks of one-step reducts join") {
    const Prelude& p = prelude();
    PolyHook hook = checker_poly_hook();

    TermPtr t = scale(Scalar::one(), sum(p.term("id"), zero(p.term("true"))));
    auto steps = one_step(t, hook);
    CHECK(steps.size() >= 2);
    for (std::size_t i = 0; i < steps.size(); ++i)
        for (std::size_t j = i + 1; j < steps.size(); ++j) {
            if (ac_key(steps[i].after) == ac_key(steps[j].after)) continue;
            CHECK(join(steps[i].after, steps[j].after, 5000, hook).has_value());
        }

    // merging inside a type binder versus distributing the binder over the
    // sum: the merge path reopens only after the scalar is pulled back out
    TermPtr inner = lam("x", arrow(tvar("T"), tvar("T")), var("x"));
    TermPtr wrapped = tylam("T", sum(scale(Scalar::one(), inner),
                                     scale(-half_sqrt2(), inner)));
    auto wsteps = one_step(wrapped, hook);
    CHECK(wsteps.size() >= 2);
    for (std::size_t i = 0; i < wsteps.size(); ++i)
        for (std::size_t j = i + 1; j < wsteps.size(); ++j) {
            if (ac_key(wsteps[i].after) == ac_key(wsteps[j].after)) continue;
            CHECK(join(wsteps[i].after, wsteps[j].after, 5000, hook).has_value());
        }

    AuditReport r = audit_local_confluence(50, 12, 20000, 5);
    CHECK(r.ok());
    CHECK(r.inconclusive == 0);
    CHECK(r.checks > 0);
    CHECK(r.samples == 50);
}

TEST_CASE("reduction trees bottom out within budget") {
    AuditReport r = audit_strong_normalization(40, 200000, 9, 12);
    CHECK(r.ok());
    CHECK(r.max_depth >= 1);
    CHECK(r.samples == static_cast<long>(audit_corpus().size()) + 40);

    // the classical looping term: unfolding it forever exhausts any step
    // budget, and the checker rejects it (unannotated binder, unbound b)
    TermPtr w = lam("x", nullptr, sum(var("b"), app(var("x"), var("x"))));
    TermPtr yb = app(w, w);
    CHECK_THROWS_AS(normalize(yb, 200, Strategy::UnfoldFirst), FuelExhausted);
    CHECK_THROWS_AS(infer(Context{}, yb), TypeError);
    // self-application under a concrete arrow annotation is a domain mismatch
    TermPtr mono_self =
        lam("x", arrow(idty(), idty()), app(var("x"), var("x")));
    CHECK_THROWS_AS(infer(Context{}, mono_self), TypeError);
}

TEST_CASE("generation lemmas hold over corpus and samples") {
    AuditReport r = audit_generation_lemmas(60, 3);
    CHECK(r.ok());
    CHECK(r.checks > 200);

    // application nodes carry their full decomposition
    const Prelude& p = prelude();
    DerivPtr d = infer(Context{}, release(app(p.term("hadamard"), p.term("truei"))));
    const DerivPtr* appnode = find_rule(d, Rule::ArrowE);
    REQUIRE(appnode != nullptr);
    REQUIRE((*appnode)->arrow_e != nullptr);
    const ArrowEData& ae = *(*appnode)->arrow_e;
    TypePtr acc;
    for (std::size_t i = 0; i < ae.results.size(); ++i)
        for (std::size_t j = 0; j < ae.arg_units.size(); ++j) {
            TypePtr ti = ae.results[i];
            for (std::size_t k = 0; k < ae.prefix.size(); ++k)
                ti = subst_type(ti, ae.prefix[k], ae.substs[j][k]);
            TypePtr part = scale(ae.fun_coeffs[i] * ae.arg_coeffs[j], ti);
            acc = acc ? sum(acc, part) : part;
        }
    REQUIRE(acc != nullptr);
    CHECK(preceq(acc, (*appnode)->type));
}

TEST_CASE("reports replay deterministically and serialize") {
    auto corpus = audit_corpus();
    AuditReport r1 = audit_subject_reduction(corpus, 30, 200, 77);
    AuditReport r2 = audit_subject_reduction(corpus, 30, 200, 77);
    CHECK(to_json(r1) == to_json(r2));

    AuditReport c1 = audit_local_confluence(20, 12, 10000, 77);
    AuditReport c2 = audit_local_confluence(20, 12, 10000, 77);
    CHECK(to_json(c1) == to_json(c2));

    auto j = nlohmann::json::parse(to_json(r1));
    CHECK(j["kind"] == "subject-reduction");
    CHECK(j["seed"] == 77);
    CHECK(j["ok"] == true);
    CHECK(j["counterexamples"].is_array());
    CHECK(j["checks"].get<long>() == r1.checks);

    CHECK(to_string(r1).find("subject-reduction audit") == 0);
}
