#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyreg/forms.hpp"

using namespace polyreg;

TEST_CASE("polygonal numbers") {
    CHECK(polygonal(3, 4) == 10);
    CHECK(polygonal(5, 3) == 12);
    for (i64 m = 3; m <= 40; ++m) {
        CHECK(polygonal(m, 0) == 0);
        CHECK(polygonal(m, 1) == 1);
    }
    CHECK_THROWS_AS(polygonal(2, 1), std::domain_error);
}

TEST_CASE("shifted polygonal numbers") {
    CHECK(shifted_polygonal(16, 5, 1) == 5);
    CHECK(shifted_polygonal(16, 5, -1) == 9);
    for (i64 m = 3; m <= 20; ++m) CHECK(shifted_polygonal(m, 1, 0) == 0);
    // P^{(r)}(1) = r and P^{(r)}(-1) = m-2-r.
    for (i64 m = 5; m <= 30; ++m)
        for (i64 r = 0; r <= m - 2; ++r) {
            if (std::gcd(r, m - 2) != 1) continue;
            CHECK(shifted_polygonal(m, r, 1) == r);
            CHECK(shifted_polygonal(m, r, -1) == m - 2 - r);
        }
    CHECK_THROWS_AS(shifted_polygonal(16, 7, 1), std::invalid_argument);
}

TEST_CASE("evaluate_form") {
    auto tri = ShiftedForm::ordinary(3, {1, 1, 1});
    CHECK(evaluate_form(tri, std::vector<i64>{1, 1, 2}) == 5);
    auto penta = ShiftedForm::ordinary(5, {1, 2});
    CHECK(evaluate_form(penta, std::vector<i64>{-1, 1}) == 4);
    auto hexa16 = ShiftedForm(16, {1, 3}, {1, 1});
    CHECK(evaluate_form(hexa16, std::vector<i64>{3, 0}) == 45);
    CHECK_THROWS_AS(evaluate_form(tri, std::vector<i64>{1, 1}), std::invalid_argument);
    auto nn = ShiftedForm(3, {1}, {1}, Domain::NonNegativeIntegers);
    CHECK_THROWS_AS(evaluate_form(nn, std::vector<i64>{-1}), std::invalid_argument);
}

TEST_CASE("quadratic decomposition values") {
    auto sq = quadratic_decomposition(ShiftedForm::ordinary(4, {1}));
    CHECK(sq.weight == 1);
    CHECK(sq.shifts[0] == 0);
    CHECK(sq.constant == 0);

    auto tri = quadratic_decomposition(ShiftedForm::ordinary(3, {1}));
    CHECK(tri.weight == mpq_class(1, 2));
    CHECK(tri.shifts[0] == mpq_class(-1, 2));
    CHECK(tri.constant == mpq_class(1, 8));

    auto s16 = quadratic_decomposition(ShiftedForm(16, {1}, {5}));
    CHECK(s16.weight == 7);
    CHECK(s16.shifts[0] == mpq_class(1, 7));
    CHECK(s16.constant == mpq_class(1, 7));
}

TEST_CASE("decomposition identity on random forms") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 10000; ++trial) {
        i64 m = 3 + static_cast<i64>(rng() % 28);
        int n = 1 + static_cast<int>(rng() % 4);
        std::vector<i64> a, r;
        for (int i = 0; i < n; ++i) {
            a.push_back(1 + static_cast<i64>(rng() % 12));
            i64 lv;
            do {
                lv = static_cast<i64>(rng() % (m - 1));
            } while (std::gcd(lv, m - 2) != 1);
            r.push_back(lv);
        }
        ShiftedForm f(m, a, r);
        auto dec = quadratic_decomposition(f);
        std::vector<i64> x;
        std::vector<mpq_class> xq;
        for (int i = 0; i < n; ++i) {
            i64 xi = static_cast<i64>(rng() % 21) - 10;
            x.push_back(xi);
            xq.emplace_back(xi);
        }
        mpq_class lhs(evaluate_form(f, x));
        CHECK(lhs == dec.evaluate(a, xq));
    }
}

TEST_CASE("primitivity") {
    auto f = ShiftedForm::ordinary(5, {2, 4, 6});
    CHECK_FALSE(is_primitive(f));
    CHECK(primitive_rescale(f).coefficients == std::vector<i64>{1, 2, 3});
    CHECK(is_primitive(ShiftedForm::ordinary(7, {1, 3, 9})));
    auto g = ShiftedForm::ordinary(9, {5});
    CHECK_FALSE(is_primitive(g));
    CHECK(primitive_rescale(g).coefficients == std::vector<i64>{1});
}

TEST_CASE("same type and type count") {
    CHECK(same_type(16, 5, 9));
    CHECK_FALSE(same_type(16, 1, 5));
    CHECK(count_shifted_types(8) == 1);
    for (i64 m : {3, 4}) {
        CHECK_THROWS_AS(count_shifted_types(m), std::domain_error);
    }
    // only one type for m in {5,6,8}; two already for m=7
    for (i64 m : {5, 6, 8}) CHECK(count_shifted_types(m) == 1);
    CHECK(count_shifted_types(7) == 2);
    CHECK(count_shifted_types(16) == static_cast<i64>(euler_phi(14) / 2));
}

TEST_CASE("level symmetry P^{(r)}(-x)+P^{(r)}(x) = P(-x)+P(x)") {
    for (i64 m = 3; m <= 40; ++m)
        for (i64 r = 0; r <= m - 2; ++r) {
            if (std::gcd(r, m - 2) != 1) continue;
            for (i64 x = 1; x <= 8; ++x)
                CHECK(shifted_polygonal(m, r, -x) + shifted_polygonal(m, r, x) ==
                      polygonal(m, -x) + polygonal(m, x));
        }
}

TEST_CASE("2x-1 values below the symmetric midpoint") {
    for (i64 m = 5; m <= 40; ++m)
        for (i64 r = 1; r <= m - 2; ++r) {
            if (std::gcd(r, m - 2) != 1) continue;
            for (i64 x = 1; x <= 5; ++x) {
                mpz_class mid = (polygonal(m, -x) + polygonal(m, x)) / 2;
                int count = 0;
                for (i64 y = -3 * x - 3; y <= 3 * x + 3; ++y) {
                    mpz_class v = shifted_polygonal(m, r, y);
                    if (v != 0 && v <= mid) ++count;
                }
                CHECK(count == 2 * x - 1);
            }
        }
}

TEST_CASE("non-negativity of generalized values") {
    for (i64 m = 3; m <= 25; ++m)
        for (i64 r = 0; r <= m - 2; ++r) {
            if (std::gcd(r, m - 2) != 1) continue;
            for (i64 x = -100; x <= 100; ++x) CHECK(shifted_polygonal(m, r, x) >= 0);
        }
}

TEST_CASE("spec string round trip") {
    ShiftedForm f(16, {1, 3, 3, 3}, {1, 1, 1, 1});
    CHECK(f.spec_string() == "m=16;a=1,3,3,3;r=1,1,1,1;domain=Z");
    CHECK(ShiftedForm::parse(f.spec_string()) == f);
    ShiftedForm g(5, {2, 7}, {1, 4}, Domain::NonNegativeIntegers);
    CHECK(ShiftedForm::parse(g.spec_string()) == g);
    CHECK(ShiftedForm::parse("m=3;a=1,1,1;domain=Z") == ShiftedForm::ordinary(3, {1, 1, 1}));
    CHECK_THROWS(ShiftedForm::parse("m=3;a=1;domain=Q"));
    CHECK_THROWS(ShiftedForm::parse("a=1;domain=Z"));
}

TEST_CASE("invariant violations rejected") {
    CHECK_THROWS(ShiftedForm(2, {1}, {1}));
    CHECK_THROWS(ShiftedForm(16, {1}, {7}));    // gcd(7,14) != 1
    CHECK_THROWS(ShiftedForm(16, {1}, {15}));   // outside [0, m-2]
    CHECK_THROWS(ShiftedForm(16, {0}, {1}));    // non-positive coefficient
    CHECK_THROWS(ShiftedForm(16, {}, {}));      // empty
    CHECK_THROWS(ShiftedForm(16, {1}, {0}, Domain::NonNegativeIntegers));
    CHECK_NOTHROW(ShiftedForm(16, {1}, {15}, Domain::NonNegativeIntegers));
}
