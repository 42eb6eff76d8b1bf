#pragma once

#include "polyreg/localsolve.hpp"

namespace polyreg {

// Audit record of one lambda step at prime p: the substitution x_i -> p*x_i + j_i
// on unit-coefficient indices, the new levels, the additive constant and the
// primitivity scaling p^k.
struct LambdaRecord {
    u64 prime = 0;
    std::vector<int> unit_indices;
    std::vector<i64> j;           // parallel to unit_indices
    std::vector<i64> new_levels;  // parallel to unit_indices
    mpz_class constant;           // sum over unit indices of a_i P^{(r_i)}(j_i)
    int scale_exponent = 0;       // k in {1, 2}
};

struct IterationLimitError : std::runtime_error {
    std::vector<LambdaRecord> trail;
    IterationLimitError(std::string msg, std::vector<LambdaRecord> t)
        : std::runtime_error(std::move(msg)), trail(std::move(t)) {}
};

struct UndeterminedError : std::runtime_error {
    u64 prime;
    int cap;
    UndeterminedError(std::string msg, u64 p, int c)
        : std::runtime_error(std::move(msg)), prime(p), cap(c) {}
};

std::pair<ShiftedForm, LambdaRecord> lambda_p(const ShiftedForm& form, u64 p);
std::pair<ShiftedForm, LambdaRecord> lambda_2(const ShiftedForm& form);
// Dispatches to lambda_2 for p = 2.
std::pair<ShiftedForm, LambdaRecord> lambda_step(const ShiftedForm& form, u64 p);

// The substitution l applied to a variable vector.
std::vector<i64> lambda_substitution(const LambdaRecord& rec, const std::vector<i64>& x);

// The unscaled transform: p^2 a_i with the new level on unit indices, a_i with
// the old level elsewhere. Satisfies form(l(x)) = unscaled(x) + C for all x.
ShiftedForm lambda_unscaled(const ShiftedForm& input, const LambdaRecord& rec);

// Whether the diagonal lattice of the coefficients contains a binary unimodular
// piece <u, u'> with u = 1 and u' = 3 mod 4 over Z_2. Requires m = 0 mod 4.
bool condition_3_7(const ShiftedForm& form);

// Iterate lambda_p (with primitive rescale between steps) until the local
// target holds: Z_p-universal for odd p; for p = 2, Z_2-universal or
// condition_3_7.
std::pair<ShiftedForm, std::vector<LambdaRecord>> lambda_tilde(const ShiftedForm& form, u64 p,
                                                               int max_iter = 64);

// Primes at which the form misses its local target (subset of the relevant
// primes; ascending).
std::vector<u64> bad_primes(const ShiftedForm& form, int cap = -1);

// Apply lambda_tilde at every bad prime in ascending order.
std::pair<ShiftedForm, std::vector<LambdaRecord>> lambda_full(const ShiftedForm& form,
                                                              int max_iter = 64);

}  // namespace polyreg
