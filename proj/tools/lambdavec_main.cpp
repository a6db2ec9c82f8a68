#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lambdavec/audit.hpp"
#include "lambdavec/error.hpp"
#include "lambdavec/parse.hpp"
#include "lambdavec/session.hpp"
#include "lambdavec/typesys.hpp"

namespace {

using namespace lambdavec;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitFuel = 2;
constexpr int kExitCounterexample = 3;

long default_fuel() {
    if (const char* env = std::getenv("LAMBDAVEC_FUEL")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 100000;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string type_line(const Session& s, const std::string& name) {
    return name + " : " + to_string(canon(s.derivation(name)->type));
}

void print_definitions(const Session& s, const std::vector<std::string>& names,
                       std::ostream& out) {
    for (const auto& n : names) out << type_line(s, n) << "\n";
}

int cmd_check(const std::string& file) {
    Session s;
    print_definitions(s, s.load(read_file(file)), std::cout);
    return kExitOk;
}

int cmd_reduce(const std::string& file, const std::string& name, bool no_f, long fuel,
               bool trace) {
    Session s({fuel, no_f});
    s.load(read_file(file));
    if (!s.has(name)) throw ParseError("no definition named '" + name + "'");
    Session::Reduction r = s.reduce(s.term(name));
    if (trace) std::cout << to_string(r.trace);
    if (r.exhausted) {
        std::cerr << "error: fuel exhausted after " << r.trace.steps.size()
                  << " steps; partial trace:\n"
                  << to_string(r.trace);
        return kExitFuel;
    }
    std::cout << s.show(r.trace.final_term) << "\n";
    return kExitOk;
}

int cmd_audit(const std::string& kind, long samples, std::uint64_t seed, long fuel) {
    AuditReport rep;
    if (kind == "sr") {
        rep = audit_subject_reduction(audit_corpus(), samples, fuel, seed);
    } else if (kind == "confluence") {
        rep = audit_local_confluence(samples, 12, fuel, seed);
    } else if (kind == "sn") {
        rep = audit_strong_normalization(samples, fuel, seed);
    } else if (kind == "genlemmas") {
        rep = audit_generation_lemmas(samples, seed);
    } else {
        throw ParseError("unknown audit kind '" + kind +
                         "' (expected sr|confluence|sn|genlemmas)");
    }
    std::cout << to_string(rep);
    return rep.ok() ? kExitOk : kExitCounterexample;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_semicolon(std::string s) {
    s = trim(s);
    if (!s.empty() && s.back() == ';') s = trim(s.substr(0, s.size() - 1));
    return s;
}

int repl(const std::string& preload, long fuel) {
    Session s({fuel, false});
    if (!preload.empty()) print_definitions(s, s.load(read_file(preload)), std::cout);
    std::string line;
    while (std::getline(std::cin, line)) {
        line = trim(line);
        if (line.empty()) continue;
        try {
            if (line == ":q") break;
            if (line.rfind(":load ", 0) == 0) {
                print_definitions(s, s.load(read_file(trim(line.substr(6)))), std::cout);
            } else if (line.rfind(":t ", 0) == 0) {
                TermPtr e = s.resolve(parse_term(strip_semicolon(line.substr(3))));
                std::cout << s.show_type(e) << "\n";
            } else if (line.rfind(":r ", 0) == 0) {
                TermPtr e = s.resolve(parse_term(strip_semicolon(line.substr(3))));
                Session::Reduction r = s.reduce(e);
                if (r.exhausted) {
                    std::cerr << "error: fuel exhausted after " << r.trace.steps.size()
                              << " steps\n";
                    continue;
                }
                std::cout << s.show(r.trace.final_term) << "\n";
            } else if (line.rfind(":trace ", 0) == 0) {
                TermPtr e = s.resolve(parse_term(strip_semicolon(line.substr(7))));
                Session::Reduction r = s.reduce(e);
                std::cout << to_string(r.trace);
                if (r.exhausted) {
                    std::cerr << "error: fuel exhausted after " << r.trace.steps.size()
                              << " steps\n";
                    continue;
                }
                std::cout << s.show(r.trace.final_term) << "\n";
            } else if (line.rfind(":let ", 0) == 0) {
                std::string rest = line.substr(5);
                std::size_t eq = rest.find('=');
                if (eq == std::string::npos) throw ParseError(":let needs 'name = term'");
                std::string name = trim(rest.substr(0, eq));
                TermPtr body = s.resolve(parse_term(strip_semicolon(rest.substr(eq + 1))));
                s.define(name, body);
                std::cout << type_line(s, name) << "\n";
            } else if (line.rfind("let ", 0) == 0) {
                print_definitions(s, s.load(line), std::cout);
            } else {
                std::cerr << "error: unknown command (try :t :r :trace :let :load :q)\n";
            }
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
        } catch (const TypeError& e) {
            std::cerr << "error: " << e.what() << "\n";
        } catch (const std::out_of_range& e) {
            std::cerr << "error: " << e.what() << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"type checker, reducer and metatheory auditor for vectorial lambda terms"};
    app.require_subcommand(1);
    long fuel = default_fuel();

    std::string check_file;
    CLI::App* check = app.add_subcommand("check", "type every definition in a file");
    check->add_option("file", check_file, "program file")->required();

    std::string reduce_file, reduce_name;
    bool no_f = false, trace = false;
    CLI::App* reduce = app.add_subcommand("reduce", "normalize a definition");
    reduce->add_option("file", reduce_file, "program file")->required();
    reduce->add_option("name", reduce_name, "definition to reduce")->required();
    reduce->add_flag("--no-f", no_f, "disable the factoring rules (keep dropping + 0)");
    reduce->add_option("--fuel", fuel, "step budget");
    reduce->add_flag("--trace", trace, "print one rule application per line");

    std::string audit_kind;
    long samples = 200;
    std::uint64_t seed = 1;
    CLI::App* audit = app.add_subcommand("audit", "run a metatheory audit");
    audit->add_option("kind", audit_kind, "sr|confluence|sn|genlemmas")->required();
    audit->add_option("--samples", samples, "generated terms");
    audit->add_option("--seed", seed, "generator seed");
    audit->add_option("--fuel", fuel, "step budget");

    std::string preload;
    CLI::App* rep = app.add_subcommand("repl", "interactive session");
    rep->add_option("--load", preload, "program file loaded on startup");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(check_file);
        if (reduce->parsed()) return cmd_reduce(reduce_file, reduce_name, no_f, fuel, trace);
        if (audit->parsed()) return cmd_audit(audit_kind, samples, seed, fuel);
        return repl(preload, fuel);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
