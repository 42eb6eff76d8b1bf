#pragma once

#include <string>
#include <vector>

#include "polyreg/numutil.hpp"

namespace polyreg {

enum class Domain { GeneralizedIntegers, NonNegativeIntegers };

// Weighted sum of shifted m-gonal numbers: sum of a_i * P_m^{(r_i)}(x_i).
// Ordinary m-gonal forms are the special case r_i = 1 for all i.
struct ShiftedForm {
    i64 m = 3;
    std::vector<i64> coefficients;
    std::vector<i64> levels;
    Domain domain = Domain::GeneralizedIntegers;

    ShiftedForm() = default;
    ShiftedForm(i64 m_, std::vector<i64> a, std::vector<i64> r,
                Domain dom = Domain::GeneralizedIntegers);

    // Ordinary form: all levels 1.
    static ShiftedForm ordinary(i64 m, std::vector<i64> a,
                                Domain dom = Domain::GeneralizedIntegers);

    int rank() const { return static_cast<int>(coefficients.size()); }
    bool ordinary_levels() const;

    // Canonical text encoding, e.g. "m=16;a=1,3,3,3;r=1,1,1,1;domain=Z".
    std::string spec_string() const;
    static ShiftedForm parse(const std::string& spec);

    bool operator==(const ShiftedForm&) const = default;
};

// P_m(x) = ((m-2)x^2 - (m-4)x) / 2.
mpz_class polygonal(i64 m, const mpz_class& x);

// P_m^{(r)}(x) = ((m-2)x^2 - (m-2-2r)x) / 2, gcd(r, m-2) = 1.
mpz_class shifted_polygonal(i64 m, i64 r, const mpz_class& x);

mpz_class evaluate_form(const ShiftedForm& form, const std::vector<mpz_class>& x);
mpz_class evaluate_form(const ShiftedForm& form, const std::vector<i64>& x);

// Completing the square: form(x) = weight * sum a_i (x_i - shifts_i)^2 - constant.
struct QuadraticDecomposition {
    mpq_class weight;                // (m-2)/2
    std::vector<mpq_class> shifts;   // (m-2-2r_i) / (2(m-2))
    mpq_class constant;              // sum a_i (m-2-2r_i)^2 / (8(m-2))

    mpq_class evaluate(const std::vector<i64>& a, const std::vector<mpq_class>& x) const;
};

QuadraticDecomposition quadratic_decomposition(const ShiftedForm& form);

bool is_primitive(const ShiftedForm& form);
ShiftedForm primitive_rescale(const ShiftedForm& form);

// Levels r and m-2-r give the same value set (same type).
bool same_type(i64 m, i64 r, i64 rp);

// Number of types of generalized shifted m-gonal numbers: phi(m-2)/2, m >= 5.
i64 count_shifted_types(i64 m);

}  // namespace polyreg
