#pragma once

#include <optional>
#include <vector>

#include "polyreg/forms.hpp"
#include "polyreg/numutil.hpp"

namespace polyreg {

// Outcome of a p-adic representation query. Undetermined is a first-class
// verdict (deepening cap reached), never coerced to No.
struct LocalVerdict {
    enum class Status { Yes, No, Undetermined };
    Status status = Status::Undetermined;
    std::optional<std::vector<u64>> witness;  // residues mod p^precision
    int precision = 0;  // Yes: witness precision; No: obstruction precision; Und: cap used

    bool yes() const { return status == Status::Yes; }
    bool no() const { return status == Status::No; }
    bool undetermined() const { return status == Status::Undetermined; }
    int obstruction_precision() const { return precision; }
    int cap() const { return precision; }

    static LocalVerdict make_yes(std::optional<std::vector<u64>> w, int k) {
        return {Status::Yes, std::move(w), k};
    }
    static LocalVerdict make_no(int k) { return {Status::No, std::nullopt, k}; }
    static LocalVerdict make_undetermined(int cap) {
        return {Status::Undetermined, std::nullopt, cap};
    }
};

// A p-adic integer target, held exactly: zero, or p^ord * unit with the unit
// residue known modulo p^unit_prec.
struct PadicTarget {
    bool is_zero = true;
    int ord = 0;
    u64 unit = 1;
    int unit_prec = 0;

    static PadicTarget zero() { return {}; }
    static PadicTarget from_mpz(const mpz_class& t, u64 p, int prec);
    // q must have a p-unit denominator and be >= 0 p-adically meaningful.
    static PadicTarget from_mpq(const mpq_class& q, u64 p, int prec);
    u64 mod_pk(u64 p, int k) const;
};

int default_cap(u64 p);

// Decision kernel for diagonal forms sum c_i y_i^2 = t over Z_p.
// Iterative deepening over K = K0..cap; at each K the solution set mod p^K is
// scanned through its valuation-shell decomposition (every value c*y^2 mod p^K
// is p^(e+2b) times a unit-square class, which is a congruence condition mod p
// for odd p and mod 8 for p = 2). Yes requires a solution with a coordinate
// where Hensel lifting applies: 2*ord_p(2*c_i*y_i) < K.
class QfLocalSolver {
  public:
    QfLocalSolver(std::vector<i64> c, u64 p);

    LocalVerdict decide(const PadicTarget& t, int cap, bool want_witness = true,
                        bool allow_shortcut = true) const;

    u64 prime() const { return p_; }
    int unit_count() const { return unit_count_; }

  private:
    struct Coord {
        i64 c;
        int e;    // ord_p(c)
        u64 u;    // unit part of c
    };
    u64 p_;
    int ord2p_;
    std::vector<Coord> co_;
    int max_e_ = 0;
    int unit_count_ = 0;

    bool scan(const PadicTarget& t, int K, bool want_witness, bool& liftable_found,
              std::vector<u64>* witness_out) const;
    std::vector<u64> build_witness(const PadicTarget& t, int K,
                                   const std::vector<int>& shell) const;
};

// Solvability of sum c_i y_i^2 = t over Z_p, t a non-negative integer.
LocalVerdict qf_represents(const std::vector<i64>& c, const mpz_class& t, u64 p, int cap = -1);

// True when Z_p-universality is automatic for every primitive shifted m-gonal
// form: p | 2(m-2) except p = 2 with m = 0 mod 4.
bool automatic_zp_universal(i64 m, u64 p);

// Representation of N by the form over Z_p, via the completing-the-square
// reduction to a diagonal quadratic form. Form must be primitive.
LocalVerdict local_represents(const ShiftedForm& form, const mpz_class& N, u64 p, int cap = -1);

// Square-class representatives: every nonzero p-adic integer is a unit square
// times p^(2k) times one representative.
std::vector<i64> square_class_reps(u64 p);

// Finite set of primes where a local obstruction is possible (rank >= 3):
// {2 if m = 0 mod 4} plus odd p coprime to m-2 with at most 2 unit
// coefficients. Throws for rank <= 2 (no finite set exists).
std::vector<u64> relevant_primes(const ShiftedForm& form);

LocalVerdict is_zp_universal(const ShiftedForm& form, u64 p, int cap = -1);
LocalVerdict is_locally_universal(const ShiftedForm& form, int cap = -1);

// Exhaustive congruence test: does Delta(x) = N (mod p^k) have a solution?
// Test oracle only. Enumerates all residue vectors (x taken mod p^(k+1) when
// p = 2 since Delta mod 2^k depends on x mod 2^(k+1)).
bool brute_local_oracle(const ShiftedForm& form, const mpz_class& N, u64 p, int k,
                        u64 budget = u64(1) << 26);

// All residues N mod p^k attained by the form, by exhaustive per-variable value
// sets and subset-sum over Z/p^k. Test oracle companion of brute_local_oracle.
std::vector<bool> brute_local_set(const ShiftedForm& form, u64 p, int k,
                                  u64 budget = u64(1) << 28);

// Bulk oracle for one primitive form: answers local representability of
// non-negative integers at all primes at once, caching per square class.
class LocalRepOracle {
  public:
    explicit LocalRepOracle(const ShiftedForm& form, int cap = -1);

    struct Answer {
        LocalVerdict::Status status;
        u64 blocking_prime = 0;  // for No / Undetermined
    };
    Answer query(i64 N);

    const std::vector<u64>& fixed_primes() const { return fixed_primes_; }

  private:
    struct ClassCache {
        u64 p;
        QfLocalSolver solver;
        int cap;
        // per square class: lazily extended verdict-by-ord-half vector
        std::vector<std::vector<int8_t>> by_class;  // 0 unknown 1 yes 2 no 3 und
        std::vector<u64> class_unit_rep;
        LocalVerdict::Status query(int ord, u64 unit_mod);
    };

    ShiftedForm form_;
    int cap_;
    i64 den_factor_;   // 8(m-2)
    i64 cd_;           // sum a_i (m-2-2r_i)^2, so numer(N) = 8(m-2)N + cd_
    int den_ord2_;     // ord_2 of 4(m-2)^2 when 2 is checked
    std::vector<u64> fixed_primes_;
    std::vector<ClassCache> caches_;
    // rank <= 2 only: primes needed for per-N factorization
    std::vector<u64> trial_primes_;
    bool low_rank_ = false;
};

}  // namespace polyreg
