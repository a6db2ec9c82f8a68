#include "lambdavec/parse.hpp"

#include <cctype>
#include <optional>

#include "lambdavec/error.hpp"

namespace lambdavec {

namespace {

enum class Tok {
    Ident, Nat, Lambda, TyLambda, Dot, Colon, LParen, RParen, LBrack, RBrack,
    Lt, Gt, Plus, Minus, Star, Slash, Arrow, Bang, Eq, Semi, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text) {
        out.push_back({k, std::move(text), line, col});
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        int tok_col = col;
        auto advance = [&](std::size_t n) {
            i += n;
            col += static_cast<int>(n);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < src.size() && ident_char(src[i])) advance(1);
            out.push_back({Tok::Ident, src.substr(start, i - start), line, tok_col});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                advance(1);
            }
            out.push_back({Tok::Nat, src.substr(start, i - start), line, tok_col});
            continue;
        }
        switch (c) {
            case '\\': push(Tok::Lambda, "\\"); advance(1); continue;
            case '/':
                if (i + 1 < src.size() && src[i + 1] == '\\') {
                    push(Tok::TyLambda, "/\\");
                    advance(2);
                } else {
                    push(Tok::Slash, "/");
                    advance(1);
                }
                continue;
            case '-':
                if (i + 1 < src.size() && src[i + 1] == '>') {
                    push(Tok::Arrow, "->");
                    advance(2);
                } else {
                    push(Tok::Minus, "-");
                    advance(1);
                }
                continue;
            case '.': push(Tok::Dot, "."); advance(1); continue;
            case ':': push(Tok::Colon, ":"); advance(1); continue;
            case '(': push(Tok::LParen, "("); advance(1); continue;
            case ')': push(Tok::RParen, ")"); advance(1); continue;
            case '[': push(Tok::LBrack, "["); advance(1); continue;
            case ']': push(Tok::RBrack, "]"); advance(1); continue;
            case '<': push(Tok::Lt, "<"); advance(1); continue;
            case '>': push(Tok::Gt, ">"); advance(1); continue;
            case '+': push(Tok::Plus, "+"); advance(1); continue;
            case '*': push(Tok::Star, "*"); advance(1); continue;
            case '!': push(Tok::Bang, "!"); advance(1); continue;
            case '=': push(Tok::Eq, "="); advance(1); continue;
            case ';': push(Tok::Semi, ";"); advance(1); continue;
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' at " +
                                 std::to_string(line) + ":" + std::to_string(col));
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

bool reserved_name(const std::string& s) {
    return s == "i" || s == "sqrt2" || s == "let";
}

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    TermPtr term_all() {
        TermPtr t = term_sum();
        expect(Tok::End, "end of input");
        return t;
    }

    TypePtr type_all() {
        TypePtr t = type_sum();
        expect(Tok::End, "end of input");
        return t;
    }

    Scalar scalar_all() {
        Scalar s = scalar_sum();
        expect(Tok::End, "end of input");
        return s;
    }

    Program program_all() {
        Program prog;
        while (peek().kind != Tok::End) {
            Token kw = expect(Tok::Ident, "'let'");
            if (kw.text != "let") fail(kw, "expected 'let'");
            Token name = expect(Tok::Ident, "definition name");
            if (reserved_name(name.text)) fail(name, "reserved word cannot be defined");
            expect(Tok::Eq, "'='");
            TermPtr body = term_sum();
            expect(Tok::Semi, "';'");
            body = splice(body, prog.defs);
            bool replaced = false;
            for (auto& d : prog.defs) {
                if (d.name == name.text) {
                    d.term = body;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) prog.defs.push_back({name.text, body});
        }
        return prog;
    }

private:
    // ---- scalars -----------------------------------------------------

    Scalar scalar_sum() {
        bool neg = accept(Tok::Minus);
        Scalar acc = scalar_product();
        if (neg) acc = -acc;
        for (;;) {
            if (accept(Tok::Plus)) {
                acc += scalar_product();
            } else if (accept(Tok::Minus)) {
                acc = acc - scalar_product();
            } else {
                return acc;
            }
        }
    }

    Scalar scalar_product() {
        Scalar acc = scalar_atom();
        for (;;) {
            if (accept(Tok::Star)) {
                acc *= scalar_atom();
            } else if (accept(Tok::Slash)) {
                Token n = expect(Tok::Nat, "denominator");
                Rational d(n.text);
                if (d == 0) fail(n, "division by zero in scalar");
                acc = acc * Scalar(Rational(1) / d);
            } else {
                return acc;
            }
        }
    }

    Scalar scalar_atom() {
        if (accept(Tok::LParen)) {
            Scalar v = scalar_sum();
            expect(Tok::RParen, "')' in scalar");
            return v;
        }
        Token t = peek();
        if (t.kind == Tok::Nat) {
            next();
            return Scalar(Rational(t.text));
        }
        if (t.kind == Tok::Ident && t.text == "i") {
            next();
            return Scalar::i();
        }
        if (t.kind == Tok::Ident && t.text == "sqrt2") {
            next();
            return Scalar::sqrt2();
        }
        fail(t, "expected scalar atom");
    }

    // A scale coefficient is a scalar product (optionally negated); a full
    // scalar sum would absorb surrounding term sums like "0 + 1 . x".
    // Parenthesised sums are still fine: "(1/2 + i) . x".
    std::optional<Scalar> try_coefficient() {
        std::size_t save = pos_;
        try {
            bool neg = accept(Tok::Minus);
            Scalar v = scalar_product();
            if (neg) v = -v;
            if (peek().kind == Tok::Dot) {
                next();
                return v;
            }
        } catch (const ParseError&) {
        }
        pos_ = save;
        return std::nullopt;
    }

    // ---- types -------------------------------------------------------

    TypePtr type_sum() {
        TypePtr acc = type_scale();
        while (accept(Tok::Plus)) acc = sum(acc, type_scale());
        return acc;
    }

    TypePtr type_scale() {
        if (auto c = try_coefficient()) return scale(*c, type_scale());
        return type_arrow_level();
    }

    TypePtr type_arrow_level() {
        if (accept(Tok::Bang)) {
            Token x = expect(Tok::Ident, "type variable after '!'");
            if (reserved_name(x.text)) fail(x, "reserved word");
            expect(Tok::Dot, "'.' after forall binder");
            TypePtr body = type_arrow_level();
            if (!is_unit(body)) fail(peek(), "forall body must be a unit type");
            return forall(x.text, body);
        }
        TypePtr head = type_atom();
        if (accept(Tok::Arrow)) {
            if (!is_unit(head)) fail(peek(), "arrow domain must be a unit type");
            return arrow(head, type_scale());
        }
        return head;
    }

    TypePtr type_atom() {
        Token t = peek();
        if (t.kind == Tok::Ident) {
            if (reserved_name(t.text)) fail(t, "reserved word");
            next();
            return tvar(t.text);
        }
        if (accept(Tok::LParen)) {
            TypePtr inner = type_sum();
            expect(Tok::RParen, "')'");
            return inner;
        }
        fail(t, "expected type");
    }

    TypePtr type_unit_arg(const char* what) {
        TypePtr t = type_sum();
        if (!is_unit(t)) fail(peek(), std::string(what) + " must be a unit type");
        return t;
    }

    // ---- terms ---------------------------------------------------------

    TermPtr term_sum() {
        TermPtr acc = term_addend();
        while (accept(Tok::Plus)) acc = sum(acc, term_addend());
        return acc;
    }

    TermPtr term_addend() {
        Token t = peek();
        if (t.kind == Tok::Lambda) {
            next();
            Token x = expect(Tok::Ident, "binder");
            if (reserved_name(x.text)) fail(x, "reserved word");
            TypePtr ann;
            if (accept(Tok::Colon)) {
                ann = type_arrow_level();
                if (!is_unit(ann)) fail(peek(), "binder annotation must be a unit type");
            }
            expect(Tok::Dot, "'.' after binder");
            return lam(x.text, ann, term_sum());
        }
        if (t.kind == Tok::TyLambda) {
            next();
            Token x = expect(Tok::Ident, "type binder");
            if (reserved_name(x.text)) fail(x, "reserved word");
            expect(Tok::Dot, "'.' after type binder");
            return tylam(x.text, term_sum());
        }
        if (auto c = try_coefficient()) return scale(*c, term_addend());
        return term_appchain();
    }

    bool starts_atom(const Token& t) const {
        if (t.kind == Tok::Nat || t.kind == Tok::LParen) return true;
        return t.kind == Tok::Ident && !reserved_name(t.text);
    }

    TermPtr term_appchain() {
        TermPtr acc = term_atom_suffix();
        while (starts_atom(peek())) acc = app(acc, term_atom_suffix());
        return acc;
    }

    TermPtr term_atom_suffix() {
        TermPtr acc = term_atom();
        while (accept(Tok::LBrack)) {
            TypePtr u = type_unit_arg("type argument");
            expect(Tok::RBrack, "']'");
            acc = tyapp(acc, u);
        }
        return acc;
    }

    TermPtr term_atom() {
        Token t = peek();
        if (t.kind == Tok::Ident) {
            if (reserved_name(t.text)) fail(t, "reserved word");
            next();
            return var(t.text);
        }
        if (t.kind == Tok::Nat) {
            if (t.text != "0") fail(t, "number is not a term (did you mean a scale 'n . t'?)");
            next();
            if (accept(Tok::Lt)) {
                TermPtr w = term_sum();
                expect(Tok::Gt, "'>' closing zero witness");
                return zero(w);
            }
            return zero(nullptr);
        }
        if (accept(Tok::LParen)) {
            TermPtr inner = term_sum();
            expect(Tok::RParen, "')'");
            return inner;
        }
        fail(t, "expected term");
    }

    // ---- plumbing ------------------------------------------------------

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }

    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail(peek(), "expected " + what);
        return next();
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(msg + " at " + std::to_string(t.line) + ":" +
                         std::to_string(t.col) +
                         (t.text.empty() ? "" : " near '" + t.text + "'"));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_term(const std::string& text) { return Parser(text).term_all(); }

TypePtr parse_type(const std::string& text) { return Parser(text).type_all(); }

Scalar parse_scalar(const std::string& text) { return Parser(text).scalar_all(); }

Program parse_program(const std::string& text) { return Parser(text).program_all(); }

TermPtr splice(const TermPtr& t, const std::vector<Def>& defs) {
    TermPtr out = t;
    for (const auto& d : defs) {
        out = subst_term(out, d.name, d.term);
    }
    return out;
}

}  // namespace lambdavec
