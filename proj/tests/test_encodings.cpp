#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lambdavec/checker.hpp"
#include "lambdavec/encodings.hpp"
#include "lambdavec/error.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/rewrite.hpp"
#include "lambdavec/term.hpp"
#include "lambdavec/typesys.hpp"

using namespace lambdavec;

namespace {

Scalar rat(long n, long d) { return Scalar::rational(Rational(n) / d); }

Scalar half_sqrt2() { return parse_scalar("sqrt2/2"); }

TypePtr identity_ty() { return forall("Z", arrow(tvar("Z"), tvar("Z"))); }

TermPtr reduced(const TermPtr& t, bool allow_factoring, long fuel = 100000) {
    return (allow_factoring ? normalize(t, fuel, Strategy::Innermost, checker_poly_hook())
                            : normalize_no_F(t, fuel, Strategy::Innermost, checker_poly_hook()))
        .final_term;
}

// independent product oracle: out_i = sum_j entries[i][j] * v[j]
std::vector<Scalar> mat_vec(const std::vector<std::vector<Scalar>>& entries,
                            const std::vector<Scalar>& v) {
    std::vector<Scalar> out(v.size(), Scalar::zero());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] = out[i] + entries[i][j] * v[j];
    return out;
}

TermPtr booli(const TermPtr& b, const TypePtr& d1, const TypePtr& d2) {
    return tyapp(tyapp(b, d1), d2);
}

}  // namespace

TEST_CASE("prelude definitions load, check, and replay") {
    const Prelude& p = prelude();
    for (const char* name : {"id", "true", "false", "if", "pair", "pi1", "pi2", "basis_2_1",
                             "basis_2_2", "basis_3_1", "basis_3_2", "basis_3_3", "hadamard",
                             "truei", "falsei"})
        CHECK(p.has(name));
    CHECK(p.defs.size() == 15);
    CHECK(to_string(canon(p.type_of("id"))) == "!Z.Z->Z");
    CHECK(to_string(canon(p.type_of("true"))) == "!X.!Y.X->(Y->X)");
    CHECK(to_string(canon(p.type_of("false"))) == "!X.!Y.X->(Y->Y)");
    CHECK(to_string(canon(p.type_of("basis_2_1"))) == "!X1.!X2.X1->(X2->X1)");
    for (const auto& d : p.defs) {
        CHECK(free_vars(d.term).empty());
        CHECK(replay(p.derivs.at(d.name)));
    }
    for (std::size_t n : {std::size_t(2), std::size_t(3)})
        for (std::size_t i = 1; i <= n; ++i) {
            std::string nm = "basis_" + std::to_string(n) + "_" + std::to_string(i);
            CHECK(alpha_eq(p.term(nm), basis_term(n, i)));
            CHECK(equiv(p.type_of(nm), basis_type(n, i)));
        }
}

TEST_CASE("embedded prelude matches the shipped asset byte for byte") {
    std::ifstream in(LAMBDAVEC_PRELUDE_FILE, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == std::string(kPreludeSource));
}

TEST_CASE("the general 2x2 map specializes to the shipped hadamard") {
    Scalar s = half_sqrt2();
    TermPtr h = encode_map2(s, s, s, -s);
    CHECK(alpha_eq(h, prelude().term("hadamard")));
    auto [d1, d2] = map2_domain_types(s, s, s, -s);
    TypePtr want = forall("T", arrow(arrow(d1, arrow(d2, tvar("T"))), tvar("T")));
    DerivPtr d = infer(Context{}, h);
    CHECK(equiv(d->type, want));
    CHECK(replay(d));
    CHECK(equiv(prelude().type_of("hadamard"), want));
    CHECK(equiv(prelude().type_of("truei"), arrow(d1, arrow(d2, d1))));
}

TEST_CASE("releasing hadamard images gives the expected superpositions") {
    const Prelude& p = prelude();
    Scalar s = half_sqrt2();
    SUBCASE("true goes to the plus state") {
        TermPtr whole = release(app(p.term("hadamard"), p.term("truei")));
        DerivPtr d = infer(Context{}, whole);
        CHECK(equiv(d->type, sum(scale(s, p.type_of("true")), scale(s, p.type_of("false")))));
        TermPtr nf = reduced(whole, false);
        TermPtr want = sum(scale(s, p.term("true")), scale(s, p.term("false")));
        CHECK(ac_key(nf) == ac_key(want));
    }
    SUBCASE("false goes to the minus state") {
        TermPtr whole = release(app(p.term("hadamard"), p.term("falsei")));
        TermPtr nf = reduced(whole, false);
        TermPtr want = sum(scale(s, p.term("true")), scale(-s, p.term("false")));
        CHECK(ac_key(nf) == ac_key(want));
    }
    SUBCASE("the plus state collapses back to true") {
        TermPtr arg = scale(s, sum(p.term("truei"), p.term("falsei")));
        TermPtr whole = release(app(p.term("hadamard"), arg));
        DerivPtr d = infer(Context{}, whole);
        CHECK(to_string(canon(d->type)) == "!X.!Y.X->(Y->X) + 0 . !X.!Y.X->(Y->Y)");
        TermPtr nf = reduced(whole, true);
        CHECK(alpha_eq(nf, p.term("true")));
    }
}

TEST_CASE("the identity 2x2 map returns its boolean argument") {
    TermPtr m = encode_map2(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one());
    auto [d1, d2] =
        map2_domain_types(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one());
    const Prelude& p = prelude();
    CHECK(alpha_eq(reduced(release(app(m, booli(p.term("true"), d1, d2))), true),
                   p.term("true")));
    CHECK(alpha_eq(reduced(release(app(m, booli(p.term("false"), d1, d2))), true),
                   p.term("false")));
}

TEST_CASE("the conditional selects and mixes branches") {
    const Prelude& p = prelude();
    TermPtr strue = sum(p.term("true"), p.term("false"));
    SUBCASE("true selects the whole first branch") {
        TermPtr c = encode_if(p.term("true"), strue, p.term("id"));
        CHECK(ac_key(reduced(c, true)) == ac_key(strue));
    }
    SUBCASE("false selects the whole second branch") {
        TermPtr c = encode_if(p.term("false"), strue, p.term("id"));
        CHECK(ac_key(reduced(c, true)) == ac_key(p.term("id")));
    }
    SUBCASE("a superposed test mixes the branches linearly") {
        ScalarGen g(20260815);
        for (int k = 0; k < 8; ++k) {
            Scalar a = g.next_nonzero();
            Scalar b = g.next_nonzero();
            TermPtr r = sum(scale(a, p.term("true")), scale(b, p.term("false")));
            TermPtr c = encode_if(r, p.term("true"), p.term("false"));
            DerivPtr d = infer(Context{}, c);
            CHECK(equiv(d->type,
                        sum(scale(a, p.type_of("true")), scale(b, p.type_of("false")))));
            CHECK(replay(d));
            TermPtr want =
                reduced(sum(scale(a, p.term("true")), scale(b, p.term("false"))), true);
            CHECK(ac_key(reduced(c, true)) == ac_key(want));
        }
    }
}

TEST_CASE("the shipped conditional combinator runs homogeneous branches") {
    const Prelude& p = prelude();
    TypePtr arr = arrow(identity_ty(), identity_ty());
    TermPtr s1 = lam("a", identity_ty(), var("a"));
    TermPtr s2 = lam("a", identity_ty(), p.term("id"));
    TypePtr d = arrow(identity_ty(), arr);
    TermPtr r = booli(p.term("true"), d, d);
    TermPtr c = app(app(app(tyapp(p.term("if"), arr), r), thunk(s1)), thunk(s2));
    CHECK(equiv(infer(Context{}, c)->type, arr));
    CHECK(alpha_eq(reduced(c, true), s1));
}

TEST_CASE("pairs project componentwise") {
    const Prelude& p = prelude();
    TypePtr tt = p.type_of("true");
    TermPtr packed =
        app(app(booli(p.term("pair"), identity_ty(), tt), p.term("id")), p.term("true"));
    TermPtr left = app(booli(p.term("pi1"), identity_ty(), tt), packed);
    TermPtr right = app(booli(p.term("pi2"), identity_ty(), tt), packed);
    CHECK(equiv(infer(Context{}, left)->type, identity_ty()));
    CHECK(equiv(infer(Context{}, right)->type, tt));
    CHECK(alpha_eq(reduced(left, true), p.term("id")));
    CHECK(alpha_eq(reduced(right, true), p.term("true")));
}

TEST_CASE("releasing a thunk recovers the term") {
    const Prelude& p = prelude();
    for (const auto& d : p.defs) {
        TermPtr lhs = reduced(release(thunk(d.term)), true);
        TermPtr rhs = reduced(d.term, true);
        CHECK(ac_key_annotated(lhs) == ac_key_annotated(rhs));
    }
}

TEST_CASE("thunks avoid capturing free variables") {
    TermPtr t = thunk(var("u"));
    CHECK(t->name != "u");
    CHECK(free_vars(t).count("u") == 1);
}

TEST_CASE("basis terms check at their basis types") {
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t i = 1; i <= n; ++i) {
            DerivPtr d = infer(Context{}, basis_term(n, i));
            CHECK(equiv(d->type, basis_type(n, i)));
            CHECK(replay(d));
        }
    CHECK_THROWS_AS(basis_term(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(basis_term(2, 3), std::invalid_argument);
}

TEST_CASE("matrix encodings carry the column-selecting type") {
    Scalar s = half_sqrt2();
    MatrixEncoding m = encode_matrix(2, {{s, s}, {s, -s}});
    TypePtr b1 = basis_type(2, 1);
    TypePtr b2 = basis_type(2, 2);
    auto th = [&](const Scalar& x, const Scalar& y) {
        return arrow(identity_ty(), sum(scale(x, b1), scale(y, b2)));
    };
    TypePtr want = forall("X", arrow(arrow(th(s, s), arrow(th(s, -s), tvar("X"))), tvar("X")));
    CHECK(equiv(m.type, want));
    DerivPtr d = infer(Context{}, m.term);
    CHECK(replay(d));
}

TEST_CASE("matrix application agrees with the direct product") {
    SUBCASE("identity") {
        MatrixEncoding m = encode_matrix(
            2, {{Scalar::one(), Scalar::zero()}, {Scalar::zero(), Scalar::one()}});
        std::vector<Scalar> v = {rat(3, 2), Scalar::i()};
        std::vector<Scalar> got = apply_encoded(m, v);
        CHECK(got[0] == v[0]);
        CHECK(got[1] == v[1]);
    }
    SUBCASE("hadamard sends the first basis vector to the plus state") {
        Scalar s = half_sqrt2();
        MatrixEncoding m = encode_matrix(2, {{s, s}, {s, -s}});
        std::vector<Scalar> got = apply_encoded(m, {Scalar::one(), Scalar::zero()});
        CHECK(got[0] == s);
        CHECK(got[1] == s);
    }
    SUBCASE("single cell") {
        MatrixEncoding m = encode_matrix(1, {{rat(-5, 3)}});
        std::vector<Scalar> got = apply_encoded(m, {Scalar::i()});
        CHECK(got[0] == rat(-5, 3) * Scalar::i());
    }
    SUBCASE("basis vectors select matrix columns") {
        ScalarGen g(97);
        for (int k = 0; k < 4; ++k) {
            std::vector<std::vector<Scalar>> e(3, std::vector<Scalar>(3));
            for (auto& row : e)
                for (auto& c : row) c = g.next();
            MatrixEncoding m = encode_matrix(3, e);
            for (std::size_t j = 0; j < 3; ++j) {
                std::vector<Scalar> ej(3, Scalar::zero());
                ej[j] = Scalar::one();
                std::vector<Scalar> got = apply_encoded(m, ej);
                for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == e[i][j]);
            }
        }
    }
    SUBCASE("random products at both sizes") {
        ScalarGen g(4242);
        for (std::size_t n : {std::size_t(2), std::size_t(3)}) {
            for (int k = 0; k < 5; ++k) {
                std::vector<std::vector<Scalar>> e(n, std::vector<Scalar>(n));
                for (auto& row : e)
                    for (auto& c : row) c = g.next();
                std::vector<Scalar> v(n);
                for (auto& c : v) c = g.next();
                MatrixEncoding m = encode_matrix(n, e);
                std::vector<Scalar> got = apply_encoded(m, v);
                std::vector<Scalar> want = mat_vec(e, v);
                for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == want[i]);
            }
        }
    }
    SUBCASE("the zero vector maps to zero") {
        ScalarGen g(7);
        std::vector<std::vector<Scalar>> e(2, std::vector<Scalar>(2));
        for (auto& row : e)
            for (auto& c : row) c = g.next();
        MatrixEncoding m = encode_matrix(2, e);
        std::vector<Scalar> got = apply_encoded(m, {Scalar::zero(), Scalar::zero()});
        CHECK(got[0].is_zero());
        CHECK(got[1].is_zero());
    }
}

TEST_CASE("matrix failures are reported by kind") {
    Scalar s = half_sqrt2();
    MatrixEncoding m = encode_matrix(2, {{s, s}, {s, -s}});
    std::vector<Scalar> v = {Scalar::one(), Scalar::one()};
    SUBCASE("fuel runs out") {
        CHECK_THROWS_AS(apply_encoded(m, v, 1), NonNormalizable);
    }
    SUBCASE("a foreign normal form is rejected") {
        MatrixEncoding bad = m;
        bad.term = prelude().term("pair");
        CHECK_THROWS_AS(apply_encoded(bad, v), NotABasisCombination);
    }
    SUBCASE("dimension mismatches are caught early") {
        CHECK_THROWS_AS(apply_encoded(m, {Scalar::one()}), std::invalid_argument);
        CHECK_THROWS_AS(encode_matrix(0, {}), std::invalid_argument);
        CHECK_THROWS_AS(encode_matrix(2, {{s}}), std::invalid_argument);
    }
}

TEST_CASE("the matrix text format round-trips") {
    MatrixEncoding m = parse_matrix("2\nsqrt2/2 sqrt2/2\nsqrt2/2 -sqrt2/2\n");
    CHECK(m.n == 2);
    CHECK(m.entries[1][1] == -half_sqrt2());
    std::vector<Scalar> got = apply_encoded(m, {Scalar::one(), Scalar::zero()});
    CHECK(got[0] == half_sqrt2());
    CHECK(got[1] == half_sqrt2());

    MatrixEncoding c = parse_matrix("2\ni 0\n0 -i\n");
    std::vector<Scalar> got2 = apply_encoded(c, {Scalar::one(), Scalar::one()});
    CHECK(got2[0] == Scalar::i());
    CHECK(got2[1] == -Scalar::i());

    CHECK_THROWS_AS(parse_matrix("0\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("x\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2\n1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_matrix("1\n1\nextra"), ParseError);
    CHECK_THROWS_AS(parse_matrix("2\n1 0\n0 zz\n"), ParseError);
}
