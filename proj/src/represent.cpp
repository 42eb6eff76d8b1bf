#include "polyreg/represent.hpp"

#include <algorithm>

namespace polyreg {

i64 BitSieve::count() const {
    i64 c = 0;
    for (u64 w : words_) c += __builtin_popcountll(w);
    return c;
}

std::vector<i64> BitSieve::minus(const BitSieve& other, size_t limit) const {
    std::vector<i64> out;
    for (i64 n = 0; n <= bound_ && out.size() < limit; ++n)
        if (test(n) && !other.test(n)) out.push_back(n);
    return out;
}

std::optional<i64> BitSieve::first_missing() const {
    for (i64 n = 0; n <= bound_; ++n)
        if (!test(n)) return n;
    return std::nullopt;
}

std::vector<i64> term_values(i64 m, i64 r, i64 a, i64 B, Domain domain) {
    std::vector<i64> vals{0};
    auto walk = [&](i64 step) {
        for (i64 x = step;; x += step) {
            mpz_class v = a * shifted_polygonal(m, r, x);
            if (v > B) break;  // each branch is nondecreasing in |x|
            vals.push_back(v.get_si());
        }
    };
    walk(1);
    if (domain == Domain::GeneralizedIntegers) walk(-1);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

BitSieve represented_set(const ShiftedForm& form, i64 B, Domain domain_override) {
    if (B < 0) throw std::invalid_argument("represented_set: bound must be >= 0");
    // Ascending coefficients keep early accumulators sparse; the result is
    // order-independent.
    std::vector<int> order(form.coefficients.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return form.coefficients[i] < form.coefficients[j]; });

    BitSieve acc(B);
    acc.set(0);
    u64 M = static_cast<u64>(B) + 1;
    for (int i : order) {
        std::vector<i64> vals =
            term_values(form.m, form.levels[i], form.coefficients[i], B, domain_override);
        BitSieve next(B);
        for (i64 v : vals) or_shl_bits(next.words(), acc.words(), static_cast<u64>(v), M);
        acc = std::move(next);
    }
    return acc;
}

BitSieve represented_set(const ShiftedForm& form, i64 B) {
    return represented_set(form, B, form.domain);
}

std::optional<std::vector<i64>> represents(const ShiftedForm& form, i64 N) {
    if (N < 0) return std::nullopt;
    int n = form.rank();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return form.coefficients[i] > form.coefficients[j]; });

    std::vector<i64> x(n, 0);
    // Each branch of a*P^{(r)} is nondecreasing in |x| under the level
    // invariants, so a branch is exhausted at its first overshoot.
    auto rec = [&](auto&& self, int pos, i64 rest) -> bool {
        if (pos == n) return rest == 0;
        int i = order[pos];
        auto attempt = [&](i64 xv, bool& alive) {
            mpz_class t = form.coefficients[i] * shifted_polygonal(form.m, form.levels[i], xv);
            if (t > rest) {
                alive = false;
                return false;
            }
            x[i] = xv;
            return self(self, pos + 1, rest - t.get_si());
        };
        bool alive = true;
        if (attempt(0, alive)) return true;
        alive = true;
        for (i64 xv = 1; alive; ++xv)
            if (attempt(xv, alive)) return true;
        if (form.domain == Domain::GeneralizedIntegers) {
            alive = true;
            for (i64 xv = -1; alive; --xv)
                if (attempt(xv, alive)) return true;
        }
        x[i] = 0;
        return false;
    };
    if (rec(rec, 0, N)) return x;
    return std::nullopt;
}

LocallyRepresentedResult locally_represented_set(const ShiftedForm& form, i64 B, int cap) {
    if (!is_primitive(form))
        throw std::invalid_argument("locally_represented_set: form must be primitive");
    LocalRepOracle oracle(form, cap);
    LocallyRepresentedResult res;
    res.set = BitSieve(B);
    for (i64 N = 0; N <= B; ++N) {
        auto ans = oracle.query(N);
        if (ans.status == LocalVerdict::Status::Yes)
            res.set.set(N);
        else if (ans.status == LocalVerdict::Status::Undetermined)
            res.undetermined.push_back(N);
    }
    return res;
}

RegularityReport regularity_report(const ShiftedForm& form, i64 B, int cap,
                                   size_t max_counterexamples) {
    if (!is_primitive(form))
        throw std::invalid_argument("regularity_report: form must be primitive");
    RegularityReport rep;
    rep.form = form;
    rep.bound = B;
    rep.represented = represented_set(form, B);
    auto local = locally_represented_set(form, B, cap);
    rep.locally_represented = std::move(local.set);
    rep.undetermined = std::move(local.undetermined);
    rep.counterexamples = rep.locally_represented.minus(rep.represented, max_counterexamples);
    // Global representation must imply local representation; a violation is a
    // solver bug, except for targets whose local verdict was Undetermined.
    for (i64 n = 0; n <= B; ++n) {
        if (rep.represented.test(n) && !rep.locally_represented.test(n) &&
            !std::binary_search(rep.undetermined.begin(), rep.undetermined.end(), n))
            throw std::logic_error("represented value flagged locally unrepresented at N=" +
                                   std::to_string(n));
    }
    return rep;
}

std::optional<i64> truant(const ShiftedForm& form, i64 B, TruantMode mode) {
    if (mode == TruantMode::Universal) {
        BitSieve rep = represented_set(form, B);
        return rep.first_missing();
    }
    RegularityReport rep = regularity_report(form, B, -1, 1);
    return rep.first_counterexample();
}

ResidueSummary summarize_residue_classes(const BitSieve& s, i64 max_modulus) {
    ResidueSummary out;
    i64 B = s.bound();
    if (B < 1) return out;
    i64 split = B / 2;
    for (i64 M = 1; M <= max_modulus && M <= B - split; ++M) {
        bool ok = true;
        for (i64 n = split; n + M <= B && ok; ++n)
            if (s.test(n) != s.test(n + M)) ok = false;
        if (!ok) continue;
        out.modulus = M;
        std::vector<bool> member(M);
        for (i64 rr = 0; rr < M; ++rr) member[rr] = s.test(split + ((rr - split) % M + M) % M);
        for (i64 rr = 0; rr < M; ++rr)
            if (member[rr]) out.residues.push_back(rr);
        for (i64 n = 0; n < split; ++n) {
            bool predicted = member[n % M];
            if (predicted && !s.test(n)) out.missing_exceptions.push_back(n);
            if (!predicted && s.test(n)) out.extra_exceptions.push_back(n);
        }
        return out;
    }
    return out;
}

}  // namespace polyreg
