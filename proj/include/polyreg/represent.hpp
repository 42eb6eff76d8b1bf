#pragma once

#include <optional>
#include <string>

#include "polyreg/localsolve.hpp"

namespace polyreg {

// Dense bitset over [0, B].
class BitSieve {
  public:
    BitSieve() = default;
    explicit BitSieve(i64 bound) : bound_(bound), words_((bound + 64) / 64, 0) {}
    i64 bound() const { return bound_; }
    bool test(i64 n) const { return n >= 0 && n <= bound_ && test_bit(words_, n); }
    void set(i64 n) { set_bit(words_, static_cast<u64>(n)); }
    i64 count() const;
    // Values of n in [0, bound] present in this but missing in other.
    std::vector<i64> minus(const BitSieve& other, size_t limit = SIZE_MAX) const;
    std::optional<i64> first_missing() const;
    bool full() const { return count() == bound_ + 1; }
    const std::vector<u64>& words() const { return words_; }
    std::vector<u64>& words() { return words_; }
    bool operator==(const BitSieve&) const = default;

  private:
    i64 bound_ = -1;
    std::vector<u64> words_;
};

// All values a*P_m^{(r)}(x) <= B over the domain, ascending.
std::vector<i64> term_values(i64 m, i64 r, i64 a, i64 B, Domain domain);

// N <= B marked iff the form represents N, by boolean sumset accumulation.
BitSieve represented_set(const ShiftedForm& form, i64 B);
BitSieve represented_set(const ShiftedForm& form, i64 B, Domain domain_override);

// Depth-first witness search with branch-and-bound on the partial sum.
std::optional<std::vector<i64>> represents(const ShiftedForm& form, i64 N);

struct LocallyRepresentedResult {
    BitSieve set;
    std::vector<i64> undetermined;
};

// For each N <= B: conjunction of local_represents over all primes.
// Form must be primitive.
LocallyRepresentedResult locally_represented_set(const ShiftedForm& form, i64 B, int cap = -1);

struct RegularityReport {
    ShiftedForm form;
    i64 bound = 0;
    BitSieve represented;
    BitSieve locally_represented;
    std::vector<i64> counterexamples;  // locally represented but not represented
    std::vector<i64> undetermined;
    bool irregular() const { return !counterexamples.empty(); }
    std::optional<i64> first_counterexample() const {
        return counterexamples.empty() ? std::nullopt : std::make_optional(counterexamples.front());
    }
};

RegularityReport regularity_report(const ShiftedForm& form, i64 B, int cap = -1,
                                   size_t max_counterexamples = SIZE_MAX);

enum class TruantMode { Universal, Regular };

// Universal mode: least N <= B not represented. Regular mode: least N <= B
// locally represented but not represented.
std::optional<i64> truant(const ShiftedForm& form, i64 B, TruantMode mode);

// Residue-class description of a bitset: membership on [split, B] is exactly a
// union of classes mod modulus; exceptions below split are listed.
struct ResidueSummary {
    i64 modulus = 0;  // 0 when no period <= limit fits
    std::vector<i64> residues;
    std::vector<i64> missing_exceptions;  // below split: class member but absent
    std::vector<i64> extra_exceptions;    // below split: non-member but present
};

ResidueSummary summarize_residue_classes(const BitSieve& s, i64 max_modulus = 360);

}  // namespace polyreg
