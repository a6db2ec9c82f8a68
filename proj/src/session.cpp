#include "lambdavec/session.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "lambdavec/encodings.hpp"
#include "lambdavec/typesys.hpp"

namespace lambdavec {

Session::Session(SessionOptions opts) : opts_(opts) {
    const Prelude& p = prelude();
    defs_ = p.defs;
    for (const auto& d : p.defs) derivs_[d.name] = p.derivs.at(d.name);
}

std::vector<std::string> Session::load(const std::string& text) {
    Program prog = parse_program(text);
    std::vector<std::string> names;
    for (const auto& d : prog.defs) {
        define(d.name, resolve(d.term));
        names.push_back(d.name);
    }
    return names;
}

void Session::define(const std::string& name, const TermPtr& body) {
    DerivPtr d = infer(Context{}, body);
    std::string why;
    if (!replay(d, &why)) {
        throw std::logic_error("stored derivation for '" + name +
                               "' does not replay: " + why);
    }
    auto hit = std::find_if(defs_.begin(), defs_.end(),
                            [&](const Def& e) { return e.name == name; });
    if (hit != defs_.end()) {
        hit->term = body;
    } else {
        defs_.push_back({name, body});
    }
    derivs_[name] = d;
}

bool Session::has(const std::string& name) const { return derivs_.count(name) != 0; }

const TermPtr& Session::term(const std::string& name) const {
    for (const auto& d : defs_) {
        if (d.name == name) return d.term;
    }
    throw std::out_of_range("no definition named '" + name + "'");
}

const DerivPtr& Session::derivation(const std::string& name) const {
    return derivs_.at(name);
}

TermPtr Session::resolve(const TermPtr& expr) const { return splice(expr, defs_); }

Session::Reduction Session::reduce(const TermPtr& expr) const {
    PolyHook hook = checker_poly_hook();
    RuleFilter filter = opts_.no_factor ? RuleFilter::NoFactor : RuleFilter::All;
    Reduction out;
    out.trace.initial = expr;
    TermPtr cur = expr;
    for (long i = 0; i < opts_.fuel; ++i) {
        auto st = pick_step(cur, Strategy::Innermost, filter, hook);
        if (!st) {
            out.trace.final_term = cur;
            return out;
        }
        out.trace.steps.push_back(*st);
        cur = st->after;
    }
    out.trace.final_term = cur;
    out.exhausted = pick_step(cur, Strategy::Innermost, filter, hook).has_value();
    return out;
}

TermPtr Session::fold(const TermPtr& core) const {
    if (core->kind == TermKind::Zero && core->s) {
        return zero(fold(core->s));
    }
    for (const auto& d : defs_) {
        if (alpha_eq(core, d.term)) return var(d.name);
    }
    return core;
}

std::string Session::show(const TermPtr& t) const {
    std::vector<TermPtr> parts;
    std::function<void(const TermPtr&)> split = [&](const TermPtr& u) {
        if (u->kind == TermKind::Sum) {
            split(u->s);
            split(u->t);
            return;
        }
        parts.push_back(u);
    };
    split(t);
    struct Row {
        std::string key;
        TermPtr display;
    };
    std::vector<Row> rows;
    for (const auto& p : parts) {
        bool scaled = p->kind == TermKind::Scale;
        TermPtr core = scaled ? p->s : p;
        TermPtr shown = fold(core);
        std::string key = to_string(core) + '\n' +
                          (scaled ? p->coeff.to_string() : std::string());
        rows.push_back({key, scaled ? scale(p->coeff, shown) : shown});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.key < b.key; });
    TermPtr display = rows.front().display;
    for (std::size_t i = 1; i < rows.size(); ++i) display = sum(display, rows[i].display);
    return to_string(display);
}

std::string Session::show_type(const TermPtr& t) const {
    return to_string(canon(infer(Context{}, t)->type));
}

}  // namespace lambdavec
