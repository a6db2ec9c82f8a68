#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lambdavec/checker.hpp"
#include "lambdavec/rewrite.hpp"
#include "lambdavec/term.hpp"

namespace lambdavec {

// Deterministic generator of closed, well-typed annotated terms. Every shape
// it emits types by construction (applications are synthesized against a
// matching domain); next() verifies that with infer anyway.
class TypedTermGenerator {
public:
    explicit TypedTermGenerator(std::uint64_t seed, int size_cap = 14);

    struct Sample {
        std::uint64_t seed;  // rebuilds this exact term via term_for
        TermPtr term;
        DerivPtr deriv;
    };

    Sample next();
    // The term a per-sample seed produces; used to replay counterexamples.
    TermPtr term_for(std::uint64_t sample_seed) const;

private:
    std::uint64_t master_;
    std::uint64_t counter_ = 0;
    int size_cap_;
};

struct Counterexample {
    std::string check;     // the assertion that failed
    std::uint64_t seed;    // per-sample seed; 0 for corpus subjects
    std::string subject;   // printed subject term
    std::string detail;    // step or derivation node involved
    std::string expected;
    std::string actual;
};

struct AuditReport {
    std::string kind;
    std::uint64_t seed = 0;
    long samples = 0;       // subjects examined
    long checks = 0;        // individual assertions evaluated
    long inconclusive = 0;  // join searches that ran out of fuel (never refutations)
    long max_depth = 0;     // deepest reduction tree seen (termination audit)
    std::vector<Counterexample> counterexamples;
    std::vector<Counterexample> inconclusive_details;

    bool ok() const { return counterexamples.empty(); }
};

std::string to_string(const AuditReport& r);
std::string to_json(const AuditReport& r);

// Built-in subjects: the prelude definitions plus released gate images,
// a mixed conditional, and the summed pair-projection application.
std::vector<TermPtr> audit_corpus();

// For every subject (corpus entries, then `samples` generated terms) and
// every one-step reduct: non-factoring steps must re-infer an equivalent
// type; factoring steps must admit the merged type S built from the reduct,
// with S below the original type (evidence inferred from the step's two
// cores) and the redex re-checking at the merged type. `fuel` caps how many
// reducts of one subject are examined.
AuditReport audit_subject_reduction(const std::vector<TermPtr>& corpus, long samples,
                                    long fuel, std::uint64_t seed, int size_cap = 14);

// Every pair of one-step reducts of a generated term must reach a common
// term within `fuel`; failures are reported as inconclusive, never refuted.
AuditReport audit_local_confluence(long samples, int size_cap, long fuel,
                                   std::uint64_t seed);

// Exhaustive reduction-tree exploration, memoized modulo commutativity and
// renaming; a tree that exceeds `fuel` expansions or revisits a term on the
// current path is a counterexample. Covers the corpus plus generated terms.
AuditReport audit_strong_normalization(long samples, long fuel, std::uint64_t seed,
                                       int size_cap = 12);

// Destructures every derivation node of corpus and generated subjects and
// re-witnesses its conclusion: application nodes must rebuild their result
// from the recorded decomposition, abstraction nodes must keep the arrow
// built from the binder's type below the conclusion, sum nodes likewise for
// the sum of their premises.
AuditReport audit_generation_lemmas(long samples, std::uint64_t seed, int size_cap = 14);

}  // namespace lambdavec
