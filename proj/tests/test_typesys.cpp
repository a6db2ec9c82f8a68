#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "lambdavec/error.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/typesys.hpp"

using namespace lambdavec;

namespace {

TypePtr ty(const std::string& s) { return parse_type(s); }

const char* kTT = "!X.!Y.X->(Y->X)";
const char* kFF = "!X.!Y.X->(Y->Y)";

Scalar rat(long n, long d) { return Scalar(Rational(n) / d); }

// Small random types for property checks. Variable pool of four names keeps
// accidental unit collisions frequent enough to exercise merging.
struct TyGen {
    std::uint64_t state;
    ScalarGen coeffs;
    explicit TyGen(std::uint64_t seed) : state(seed), coeffs(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    std::size_t pick(std::size_t n) { return next() % n; }
    std::string name() {
        static const char* pool[] = {"X", "Y", "Z", "W"};
        return pool[pick(4)];
    }
    TypePtr unit(int depth) {
        if (depth <= 0 || pick(3) == 0) return tvar(name());
        if (pick(2) == 0) return arrow(unit(depth - 1), type(depth - 1));
        return forall(name(), unit(depth - 1));
    }
    TypePtr type(int depth) {
        if (depth <= 0) return unit(0);
        switch (pick(4)) {
            case 0: return unit(depth);
            case 1: return scale(coeffs.next(), type(depth - 1));
            default: return sum(type(depth - 1), type(depth - 1));
        }
    }
};

bool contains_equiv(const std::vector<TypePtr>& set, const TypePtr& t) {
    for (const auto& u : set) {
        if (equiv(u, t)) return true;
    }
    return false;
}

// Validates an order decomposition of r against t: r rebuilds from the
// remainder plus the kept summands, the coefficients balance, and the
// remainder unit sits below the designated summand.
bool split_valid(const TypePtr& r, const TypePtr& t, const OrderSplit& sp) {
    CanonType ct = canon(t);
    if (sp.k >= ct.parts.size()) return false;
    TypePtr acc = scale(sp.delta, sp.unit_w);
    Scalar kept_sum = sp.delta;
    for (std::size_t j : sp.kept) {
        if (j >= ct.parts.size()) return false;
        acc = sum(acc, scale(ct.parts[j].coeff, ct.parts[j].unit));
        kept_sum = kept_sum + ct.parts[j].coeff;
    }
    Scalar total = Scalar::zero();
    for (const auto& p : ct.parts) total = total + p.coeff;
    return equiv(acc, r) && total == kept_sum && preceq(sp.unit_w, ct.parts[sp.k].unit);
}

}  // namespace

TEST_CASE("canonical forms") {
    SUBCASE("scaled copies of one unit merge") {
        CanonType c = canon(ty("1/2 . (X->X) + 1/3 . (X->X)"));
        REQUIRE(c.parts.size() == 1);
        CHECK(c.parts[0].coeff == rat(5, 6));
        CHECK(alpha_eq_ty(c.parts[0].unit, ty("X->X")));
    }
    SUBCASE("unit scalar is dropped") {
        CanonType c = canon(ty("1 . (X->X)"));
        REQUIRE(c.parts.size() == 1);
        CHECK(c.parts[0].coeff == Scalar::one());
    }
    SUBCASE("signed superposition splits into two parts") {
        CanonType c = canon(scale(Scalar::sqrt2() / 2, sum(ty(kTT), scale(Scalar(-1), ty(kFF)))));
        REQUIRE(c.parts.size() == 2);
        Scalar h = Scalar::sqrt2() / 2;
        bool plus_tt = (c.parts[0].coeff == h && alpha_eq_ty(c.parts[0].unit, ty(kTT))) ||
                       (c.parts[1].coeff == h && alpha_eq_ty(c.parts[1].unit, ty(kTT)));
        bool minus_ff = (c.parts[0].coeff == -h && alpha_eq_ty(c.parts[0].unit, ty(kFF))) ||
                        (c.parts[1].coeff == -h && alpha_eq_ty(c.parts[1].unit, ty(kFF)));
        CHECK(plus_tt);
        CHECK(minus_ff);
    }
    SUBCASE("zero summands survive") {
        CanonType c = canon(ty("X + 0 . (Y->Y)"));
        REQUIRE(c.parts.size() == 2);
        bool has_zero = c.parts[0].coeff.is_zero() || c.parts[1].coeff.is_zero();
        CHECK(has_zero);
    }
    SUBCASE("arrow codomains canonicalize") {
        CHECK(canon(ty("X->(2 . Y + 3 . Y)")).key() == canon(ty("X->(5 . Y)")).key());
    }
    SUBCASE("keys are alpha invariant") {
        CHECK(canon(ty("!A.A->A")).key() == canon(ty("!B.B->B")).key());
        CHECK(canon(ty("!A.!B.A->(B->A)")).key() != canon(ty("!A.!B.A->(B->B)")).key());
    }
    SUBCASE("display keeps zero coefficients") {
        CHECK(to_string(canon(scale(Scalar::zero(), ty(kTT)))) ==
              "0 . !X.!Y.X->(Y->X)");
    }
}

TEST_CASE("type equivalence") {
    CHECK(equiv(ty("X + (Y->Y)"), ty("(Y->Y) + X")));
    CHECK(equiv(sum(ty("X"), sum(ty("Y"), ty("Z"))), sum(sum(ty("X"), ty("Y")), ty("Z"))));
    CHECK(equiv(scale(Scalar::sqrt2() / 2, sum(ty(kTT), ty(kFF))),
                sum(scale(Scalar::sqrt2() / 2, ty(kTT)), scale(Scalar::sqrt2() / 2, ty(kFF)))));
    CHECK_FALSE(equiv(ty("2 . X"), ty("2 . Y")));
    CHECK_FALSE(equiv(ty("0 . X + Y"), ty("Y")));
    CHECK(equiv(ty("!A.A->A"), ty("!B.B->B")));
}

TEST_CASE("unit matching") {
    std::set<std::string> xs = {"X"};
    SUBCASE("variable binds") {
        auto m = match_unit(tvar("X"), ty(kTT), xs);
        REQUIRE(m.has_value());
        CHECK(alpha_eq_ty(m->at("X"), ty(kTT)));
    }
    SUBCASE("consistent occurrences") {
        auto m = match_unit(ty("X->X"), arrow(ty(kTT), ty(kTT)), xs);
        REQUIRE(m.has_value());
        CHECK(alpha_eq_ty(m->at("X"), ty(kTT)));
    }
    SUBCASE("inconsistent occurrences fail") {
        CHECK_FALSE(match_unit(ty("X->X"), arrow(ty(kTT), ty(kFF)), xs).has_value());
    }
    SUBCASE("closed pattern matches itself with empty substitution") {
        TypePtr a = ty("(!Z.Z->Z)->(sqrt2/2 . (!X.!Y.X->(Y->X)) + sqrt2/2 . (!X.!Y.X->(Y->Y)))");
        auto m = match_unit(a, a, {});
        REQUIRE(m.has_value());
        CHECK(m->empty());
    }
    SUBCASE("codomains match modulo equivalence") {
        auto m = match_unit(ty("X->(1/2 . Y + 1/2 . Y)"), ty("(Z->Z)->(1 . Y)"), xs);
        REQUIRE(m.has_value());
        CHECK(alpha_eq_ty(m->at("X"), ty("Z->Z")));
    }
    SUBCASE("bound variables cannot escape") {
        CHECK_FALSE(match_unit(ty("!Y.X->Y"), ty("!W.(W->W)->W"), xs).has_value());
    }
    SUBCASE("binders align") {
        auto m = match_unit(ty("!A.A->X"), ty("!B.B->(C->C)"), xs);
        REQUIRE(m.has_value());
        CHECK(alpha_eq_ty(m->at("X"), ty("C->C")));
    }
}

TEST_CASE("precision steps") {
    SUBCASE("instantiation") {
        auto out = prec_step(ty("!X.X->X"), {ty(kTT)}, {});
        CHECK(contains_equiv(out, arrow(ty(kTT), ty(kTT))));
    }
    SUBCASE("generalization hits every summand at once") {
        auto out = prec_step(ty("1/2 . X + 1/3 . (Y->Y)"), {}, {"Z"});
        CHECK(contains_equiv(out, ty("1/2 . (!Z.X) + 1/3 . (!Z.Y->Y)")));
    }
    SUBCASE("held variables block generalization") {
        CHECK(prec_step(ty("X->X"), {}, {"X"}, {"X"}).empty());
    }
    SUBCASE("instantiation needs every summand quantified") {
        auto out = prec_step(ty("(!X.X->X) + Y"), {ty("Y")}, {});
        CHECK(out.empty());
    }
}

TEST_CASE("precision preorder") {
    CHECK(preceq(ty("1 . X + (Y->Y)"), ty("(Y->Y) + X")));
    CHECK(preceq(ty("!X.(Y->Y)->X"), ty("(Y->Y)->(Z->Z)")));
    CHECK(preceq(ty("!X.X->X"), ty("(Y->Y)->(Y->Y)")));
    CHECK_FALSE(preceq(ty("(Y->Y)->(Y->Y)"), ty("!X.X->X")));
    SUBCASE("instantiate twice then regeneralize") {
        int steps = -1;
        CHECK(preceq(ty(kTT), ty("!X.X->(X->X)"), kPreceqBudget, &steps));
        CHECK(steps == 3);
    }
    SUBCASE("reflexivity reports an empty chain") {
        int steps = -1;
        CHECK(preceq(ty("X + Y"), ty("Y + X"), kPreceqBudget, &steps));
        CHECK(steps == 0);
    }
}

TEST_CASE("order on types") {
    SUBCASE("zero padding on the right") {
        CHECK(order_leq(ty(kTT), sum(ty(kTT), scale(Scalar::zero(), ty(kFF)))));
    }
    SUBCASE("reflexive") {
        CHECK(order_leq(ty("1/2 . X + Y"), ty("Y + 1/2 . X")));
    }
    SUBCASE("zero summands on the left do not vanish") {
        CHECK_FALSE(order_leq(ty("0 . X + 1/2 . Y"), ty("1/2 . Y")));
    }
    SUBCASE("factoring needs evidence") {
        CHECK_THROWS_AS(order_leq(ty("(1/2 + 1/3) . (X->X)"), ty("1/2 . (X->X) + 1/3 . (Y->Y)")),
                        MissingEvidence);
    }
    SUBCASE("factoring with evidence") {
        std::vector<OrderFact> facts = {{canon(ty("X->X")), canon(ty("Y->Y"))}};
        CHECK(order_leq(ty("(1/2 + 1/3) . (X->X)"), ty("1/2 . (X->X) + 1/3 . (Y->Y)"), facts));
        CHECK(order_leq(ty("sqrt2 . (X->X)"), ty("sqrt2/2 . (X->X) + sqrt2/2 . (Y->Y)"), facts));
    }
    SUBCASE("precision implies order") {
        CHECK(order_leq(ty("!X.X->X"), ty("(Y->Y)->(Y->Y)")));
    }
    SUBCASE("congruence in arrow codomains") {
        CHECK(order_leq(ty("Z->(!A.A)"), sum(ty("Z->((!A.A) + 0 . (Q->Q))"), scale(Scalar::zero(), ty("W")))));
        CHECK(order_leq(arrow(tvar("Z"), ty(kTT)), arrow(tvar("Z"), sum(ty(kTT), scale(Scalar::zero(), ty(kFF))))));
    }
    SUBCASE("congruence under quantifiers") {
        CHECK(order_leq(forall("W", arrow(tvar("W"), ty(kTT))),
                        forall("V", arrow(tvar("V"), sum(ty(kTT), scale(Scalar::zero(), ty(kFF)))))));
    }
    SUBCASE("congruence in sums") {
        CHECK(order_leq(sum(ty("Q->Q"), ty(kTT)),
                        sum(ty("Q->Q"), sum(ty(kTT), scale(Scalar::zero(), ty(kFF))))));
    }
    SUBCASE("congruence under scaling") {
        CHECK(order_leq(scale(Scalar(2), ty("!X.X->X")), scale(Scalar(2), ty("(Y->Y)->(Y->Y)"))));
    }
    SUBCASE("not an equivalence") {
        CHECK_FALSE(order_leq(sum(ty(kTT), scale(Scalar::zero(), ty(kFF))), ty(kTT)));
    }
}

TEST_CASE("order decompositions") {
    SUBCASE("equivalence keeps everything") {
        TypePtr r = sum(ty(kTT), ty(kFF));
        TypePtr t = sum(ty(kFF), ty(kTT));
        auto sp = order_decomposition(r, t);
        REQUIRE(sp.has_value());
        CHECK(sp->delta.is_zero());
        CHECK(sp->kept.size() == 2);
        CHECK(split_valid(r, t, *sp));
    }
    SUBCASE("zero padding drops the padded summands") {
        TypePtr r = ty(kTT);
        TypePtr t = sum(ty(kTT), scale(Scalar::zero(), ty(kFF)));
        auto sp = order_decomposition(r, t);
        REQUIRE(sp.has_value());
        CHECK(sp->kept.size() == 1);
        CHECK(split_valid(r, t, *sp));
    }
    SUBCASE("single summand precision step") {
        TypePtr r = ty("1/2 . (!X.X->X)");
        TypePtr t = ty("1/2 . ((Y->Y)->(Y->Y))");
        auto sp = order_decomposition(r, t);
        REQUIRE(sp.has_value());
        CHECK(sp->kept.empty());
        CHECK(sp->delta == rat(1, 2));
        CHECK(split_valid(r, t, *sp));
    }
    SUBCASE("factor step with evidence") {
        std::vector<OrderFact> facts = {{canon(ty("X->X")), canon(ty("Y->Y"))}};
        TypePtr r = ty("(1/2 + 1/3) . (X->X)");
        TypePtr t = ty("1/2 . (X->X) + 1/3 . (Y->Y)");
        auto sp = order_decomposition(r, t, facts);
        REQUIRE(sp.has_value());
        CHECK(split_valid(r, t, *sp));
    }
    SUBCASE("nothing to extract when the order fails") {
        CHECK_FALSE(order_decomposition(ty("0 . X + Y"), ty("Y")).has_value());
    }
}

TEST_CASE("canonicalization is idempotent and re-embedding is equivalent") {
    TyGen gen(20240817);
    for (int i = 0; i < 500; ++i) {
        TypePtr t = gen.type(4);
        CanonType c = canon(t);
        CHECK(canon(embed(c)).key() == c.key());
        CHECK(equiv(embed(c), t));
        for (std::size_t a = 0; a < c.parts.size(); ++a) {
            for (std::size_t b = a + 1; b < c.parts.size(); ++b) {
                CHECK(c.parts[a].key != c.parts[b].key);
            }
        }
    }
}

TEST_CASE("quantifying every summand preserves and reflects equivalence") {
    TyGen gen(424242);
    auto wrap = [](const TypePtr& t, const std::string& x) {
        CanonType c = canon(t);
        TypePtr out;
        for (const auto& p : c.parts) {
            TypePtr u = scale(p.coeff, forall(x, p.unit));
            out = out ? sum(out, u) : u;
        }
        return out;
    };
    int equal_seen = 0;
    for (int i = 0; i < 300; ++i) {
        TypePtr t = gen.type(3);
        TypePtr r = (i % 2 == 0) ? embed(canon(t)) : gen.type(3);
        bool plain = equiv(t, r);
        if (plain) ++equal_seen;
        CHECK(plain == equiv(wrap(t, "X"), wrap(r, "X")));
    }
    CHECK(equal_seen >= 150);
}

TEST_CASE("equivalence is stable under substitution") {
    TyGen gen(77);
    for (int i = 0; i < 300; ++i) {
        TypePtr t = gen.type(3);
        TypePtr r = embed(canon(t));
        TypePtr u = gen.unit(2);
        REQUIRE(equiv(t, r));
        CHECK(equiv(subst_type(t, "X", u), subst_type(r, "X", u)));
    }
}
