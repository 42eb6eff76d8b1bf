#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyreg/watson.hpp"

using namespace polyreg;

namespace {

ShiftedForm random_form(std::mt19937_64& rng, bool mult4, int max_rank = 4) {
    while (true) {
        i64 m = 4 + static_cast<i64>(rng() % 33);
        if (mult4 && m % 4 != 0) continue;
        int n = 1 + static_cast<int>(rng() % max_rank);
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
        if (is_primitive(f)) return f;
    }
}

mpz_class eval_any(const ShiftedForm& form, const std::vector<i64>& x) {
    mpz_class total = 0;
    for (size_t i = 0; i < x.size(); ++i)
        total += form.coefficients[i] * shifted_polygonal(form.m, form.levels[i], x[i]);
    return total;
}

// Membership of v in the Lambda set by its definition: the form takes equal
// values at v+y and v-y modulo p (or 8 for p=2) for every y in a full box.
bool lambda_member(const ShiftedForm& f, const std::vector<i64>& v, u64 p) {
    i64 mod = (p == 2) ? 8 : static_cast<i64>(p);
    int n = f.rank();
    std::vector<i64> y(n, 0);
    auto rec = [&](auto&& self, int i) -> bool {
        if (i == n) {
            std::vector<i64> plus(n), minus(n);
            for (int t = 0; t < n; ++t) {
                plus[t] = v[t] + y[t];
                minus[t] = v[t] - y[t];
            }
            mpz_class d = eval_any(f, plus) - eval_any(f, minus);
            return d % mod == 0;
        }
        for (i64 yy = 0; yy < mod; ++yy) {
            y[i] = yy;
            if (!self(self, i + 1)) return false;
        }
        return true;
    };
    return rec(rec, 0);
}

}  // namespace

TEST_CASE("lambda_p spec example: <1,3,3,3>_16 at p=3") {
    auto f = ShiftedForm::ordinary(16, {1, 3, 3, 3});
    auto [out, rec] = lambda_p(f, 3);
    CHECK(rec.prime == 3);
    CHECK(rec.unit_indices == std::vector<int>{0});
    CHECK(rec.j == std::vector<i64>{0});
    CHECK(rec.new_levels == std::vector<i64>{5});
    CHECK(rec.constant == 0);
    CHECK(rec.scale_exponent == 1);
    CHECK(out.coefficients == std::vector<i64>{3, 1, 1, 1});
    CHECK(out.levels == std::vector<i64>{5, 1, 1, 1});
    // identity at x = (1,0,0,0): Delta(3,0,0,0) = 45 = 9*P^{(5)}(1) + 0
    CHECK(eval_any(f, {3, 0, 0, 0}) == 45);
    CHECK(eval_any(lambda_unscaled(f, rec), {1, 0, 0, 0}) + rec.constant == 45);
}

TEST_CASE("lambda_p requires primitivity and applicability") {
    CHECK_THROWS_AS(lambda_p(ShiftedForm::ordinary(16, {3, 3, 6}), 3), std::invalid_argument);
    CHECK_THROWS_AS(lambda_p(ShiftedForm::ordinary(16, {1, 1}), 7), std::invalid_argument);
    CHECK_THROWS_AS(lambda_p(ShiftedForm::ordinary(16, {1, 1}), 2), std::invalid_argument);
    auto f95 = ShiftedForm::ordinary(9, {2, 5});
    auto [out, rec] = lambda_p(f95, 5);
    CHECK(rec.unit_indices == std::vector<int>{0});
    CHECK(rec.scale_exponent == 1);
}

TEST_CASE("lambda identity on random forms at odd p") {
    std::mt19937_64 rng(321);
    int done = 0;
    while (done < 1000) {
        ShiftedForm f = random_form(rng, false);
        std::vector<u64> ps{3, 5, 7, 11};
        u64 p = ps[rng() % ps.size()];
        if ((f.m - 2) % static_cast<i64>(p) == 0) continue;
        auto [out, rec] = lambda_p(f, p);
        // level validity
        for (i64 rv : out.levels) {
            CHECK(rv >= 0);
            CHECK(rv <= f.m - 2);
            CHECK(std::gcd(rv, f.m - 2) == 1);
        }
        std::vector<i64> x(f.rank());
        for (auto& xi : x) xi = static_cast<i64>(rng() % 11) - 5;
        auto lx = lambda_substitution(rec, x);
        CHECK(eval_any(f, lx) == eval_any(lambda_unscaled(f, rec), x) + rec.constant);
        ++done;
    }
}

TEST_CASE("lambda substitution image is exactly the Lambda_p set") {
    std::mt19937_64 rng(654);
    int done = 0;
    while (done < 30) {
        ShiftedForm f = random_form(rng, false, 2);
        std::vector<u64> ps{3, 5};
        u64 p = ps[rng() % ps.size()];
        if ((f.m - 2) % static_cast<i64>(p) == 0) continue;
        auto [out, rec] = lambda_p(f, p);
        (void)out;
        // Every box vector is a member iff it is congruent to the substitution
        // image coordinatewise.
        int n = f.rank();
        std::vector<i64> v(n, 0);
        auto rec_box = [&](auto&& self, int i) -> void {
            if (i == n) {
                bool expect = true;
                for (int t = 0; t < n; ++t) {
                    bool unit =
                        std::find(rec.unit_indices.begin(), rec.unit_indices.end(), t) !=
                        rec.unit_indices.end();
                    if (unit) {
                        size_t pos = std::find(rec.unit_indices.begin(), rec.unit_indices.end(), t) -
                                     rec.unit_indices.begin();
                        i64 d = (v[t] - rec.j[pos]) % static_cast<i64>(p);
                        if (d != 0) expect = false;
                    }
                }
                CHECK(lambda_member(f, v, p) == expect);
                return;
            }
            for (i64 w = -3; w <= 3; ++w) {
                v[i] = w;
                self(self, i + 1);
            }
        };
        rec_box(rec_box, 0);
        ++done;
    }
}

TEST_CASE("lambda_2 spec examples") {
    auto f1 = ShiftedForm::ordinary(28, {1, 4, 4});
    auto [out1, rec1] = lambda_2(f1);
    CHECK(rec1.unit_indices == std::vector<int>{0});
    CHECK(rec1.j == std::vector<i64>{0});  // (26-2)/4 = 6 is even
    CHECK(rec1.scale_exponent == 2);
    CHECK(out1.coefficients == std::vector<i64>{1, 1, 1});
    CHECK(out1.levels[0] == 7);  // (w+r)/2 with w=13

    CHECK_THROWS_AS(lambda_2(ShiftedForm::ordinary(28, {2, 4, 8})), std::invalid_argument);
    CHECK_THROWS_AS(lambda_2(ShiftedForm::ordinary(15, {1, 2})), std::invalid_argument);

    auto f2 = ShiftedForm::ordinary(28, {3, 8});
    auto [out2, rec2] = lambda_2(f2);
    CHECK(rec2.unit_indices == std::vector<int>{0});
    CHECK(rec2.scale_exponent == 2);
    (void)out2;
}

TEST_CASE("lambda_2 identity and Lambda_2 membership") {
    std::mt19937_64 rng(987);
    int done = 0;
    while (done < 200) {
        ShiftedForm f = random_form(rng, true);
        auto [out, rec] = lambda_2(f);
        for (i64 rv : out.levels) {
            CHECK(rv >= 0);
            CHECK(rv <= f.m - 2);
            CHECK(std::gcd(rv, f.m - 2) == 1);
        }
        std::vector<i64> x(f.rank());
        for (auto& xi : x) xi = static_cast<i64>(rng() % 11) - 5;
        auto lx = lambda_substitution(rec, x);
        CHECK(eval_any(f, lx) == eval_any(lambda_unscaled(f, rec), x) + rec.constant);
        if (done < 40 && f.rank() <= 3) CHECK(lambda_member(f, lx, 2));
        ++done;
    }
}

TEST_CASE("condition_3_7 spec cases") {
    CHECK(condition_3_7(ShiftedForm::ordinary(28, {1, 3, 4, 8})));
    CHECK_FALSE(condition_3_7(ShiftedForm::ordinary(28, {1, 1, 5, 8})));
    CHECK_FALSE(condition_3_7(ShiftedForm::ordinary(28, {4, 8, 12})));
}

TEST_CASE("condition_3_7 lattice cross-check") {
    // <1,1,2,...> contains <1,3> via e2, e3+e4; four same-class units contain it too.
    CHECK(condition_3_7(ShiftedForm::ordinary(28, {1, 1, 2, 4})));
    CHECK(condition_3_7(ShiftedForm::ordinary(28, {1, 1, 1, 1})));
    CHECK_FALSE(condition_3_7(ShiftedForm::ordinary(28, {1, 1, 4, 4})));
    CHECK_FALSE(condition_3_7(ShiftedForm::ordinary(28, {1, 1, 1, 4})));
    CHECK_FALSE(condition_3_7(ShiftedForm::ordinary(28, {3, 4, 4, 8})));
}

TEST_CASE("lambda_tilde termination and targets") {
    auto already = ShiftedForm::ordinary(16, {1, 1, 1, 2});
    if (is_zp_universal(already, 3).yes()) {
        auto [out, trail] = lambda_tilde(already, 3);
        CHECK(trail.empty());
        CHECK(out == already);
    }

    auto f = ShiftedForm::ordinary(16, {1, 3, 9, 9});
    auto [out, trail] = lambda_tilde(f, 3);
    CHECK(trail.size() <= 4);
    CHECK(is_zp_universal(out, 3).yes());

    CHECK_THROWS_AS(lambda_tilde(f, 3, 0), IterationLimitError);
}

TEST_CASE("lambda_full spec cases") {
    auto f1 = ShiftedForm::ordinary(15, {1, 5, 25, 25});
    CHECK(bad_primes(f1) == std::vector<u64>{5});
    auto [out1, trail1] = lambda_full(f1);
    CHECK(!trail1.empty());
    for (u64 q : {3, 5, 7}) CHECK(is_zp_universal(out1, q).yes());

    auto f2 = ShiftedForm::ordinary(16, {1, 3, 3, 9});
    auto bp = bad_primes(f2);
    for (u64 p : bp) CHECK((p == 2 || p == 3));
    auto [out2, trail2] = lambda_full(f2);
    (void)trail2;
    for (u64 q : {3, 5, 7}) CHECK(is_zp_universal(out2, q).yes());
    bool two_ok = is_zp_universal(out2, 2).yes() || condition_3_7(out2);
    CHECK(two_ok);

    auto loc = ShiftedForm::ordinary(14, {1, 2, 3, 4});
    if (is_locally_universal(loc).yes()) {
        auto [out3, trail3] = lambda_full(loc);
        CHECK(trail3.empty());
        CHECK(out3 == loc);
    }
}

TEST_CASE("Zq-universality invariance under lambda_p (other primes)") {
    std::mt19937_64 rng(111);
    int done = 0;
    while (done < 100) {
        ShiftedForm f = random_form(rng, false);
        if (f.rank() < 3) continue;
        std::vector<u64> ps{3, 5, 7};
        u64 p = ps[rng() % ps.size()];
        if ((f.m - 2) % static_cast<i64>(p) == 0) continue;
        auto [out, rec] = lambda_p(f, p);
        (void)rec;
        ShiftedForm outp = is_primitive(out) ? out : primitive_rescale(out);
        for (u64 q : {2, 3, 5, 7}) {
            if (q == p) continue;
            auto before = is_zp_universal(f, q);
            auto after = is_zp_universal(outp, q);
            if (before.undetermined() || after.undetermined()) continue;
            CHECK(before.yes() == after.yes());
        }
        ++done;
    }
}

TEST_CASE("condition_3_7 and Z2 status preserved by odd-p steps (m = 0 mod 4)") {
    std::mt19937_64 rng(222);
    int done = 0;
    while (done < 60) {
        ShiftedForm f = random_form(rng, true);
        std::vector<u64> ps{3, 5, 7};
        u64 p = ps[rng() % ps.size()];
        if ((f.m - 2) % static_cast<i64>(p) == 0) continue;
        auto [out, rec] = lambda_p(f, p);
        (void)rec;
        ShiftedForm outp = is_primitive(out) ? out : primitive_rescale(out);
        CHECK(condition_3_7(f) == condition_3_7(outp));
        auto before = is_zp_universal(f, 2), after = is_zp_universal(outp, 2);
        if (!before.undetermined() && !after.undetermined())
            CHECK(before.yes() == after.yes());
        ++done;
    }
}

TEST_CASE("representation transport through the unscaled transform") {
    std::mt19937_64 rng(333);
    int done = 0, transported = 0;
    while (done < 25) {
        ShiftedForm f = random_form(rng, false, 3);
        std::vector<u64> ps{3, 5};
        u64 p = ps[rng() % ps.size()];
        if ((f.m - 2) % static_cast<i64>(p) == 0) continue;
        auto [out, rec] = lambda_p(f, p);
        (void)out;
        ShiftedForm unscaled = lambda_unscaled(f, rec);
        // If the unscaled transform represents N via x, then l(x) witnesses
        // N + C for the input with the unit coordinates = j_i mod p.
        for (i64 N = 0; N <= 60; ++N) {
            // bounded search over the unscaled form
            std::vector<i64> box(f.rank(), 0);
            bool found = false;
            std::vector<i64> wit;
            auto rc = [&](auto&& self, int i, mpz_class acc) -> void {
                if (found) return;
                if (i == f.rank()) {
                    if (acc == N) {
                        found = true;
                        wit = box;
                    }
                    return;
                }
                for (i64 xv = -4; xv <= 4 && !found; ++xv) {
                    box[i] = xv;
                    mpz_class term = unscaled.coefficients[i] *
                                     shifted_polygonal(unscaled.m, unscaled.levels[i], xv);
                    if (term <= N) self(self, i + 1, acc + term);
                }
            };
            rc(rc, 0, 0);
            if (!found) continue;
            auto lx = lambda_substitution(rec, wit);
            CHECK(eval_any(f, lx) == N + rec.constant);
            for (size_t t = 0; t < rec.unit_indices.size(); ++t) {
                i64 d = (lx[rec.unit_indices[t]] - rec.j[t]) % static_cast<i64>(p);
                CHECK(d == 0);
            }
            ++transported;
        }
        ++done;
    }
    CHECK(transported > 100);
}
