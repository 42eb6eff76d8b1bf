#include "polyreg/watson.hpp"

#include <algorithm>

namespace polyreg {

namespace {

// Unique integer j with j = (m-2-2r)/(2(m-2)) mod p inside the length-p window
// around the rational center: the closed interval [c - p/2, c + p/2] for the
// generalized domain, [0, p-1] for the non-negative domain.
i64 pick_j(i64 m, i64 r, u64 p, Domain domain) {
    u64 num_mod = static_cast<u64>(((m - 2 - 2 * r) % static_cast<i64>(p) + static_cast<i64>(p)) %
                                   static_cast<i64>(p));
    u64 cls = mulmod(num_mod, invmod(static_cast<u64>((2 * (m - 2)) % static_cast<i64>(p)), p), p);
    if (domain == Domain::NonNegativeIntegers) return static_cast<i64>(cls);

    mpq_class center(m - 2 - 2 * r, 2 * (m - 2));
    center.canonicalize();
    mpq_class lo = center - mpq_class(static_cast<long>(p), 2);
    mpq_class hi = center + mpq_class(static_cast<long>(p), 2);
    mpz_class lo_i, hi_i;
    mpz_cdiv_q(lo_i.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    mpz_fdiv_q(hi_i.get_mpz_t(), hi.get_num().get_mpz_t(), hi.get_den().get_mpz_t());
    std::vector<i64> found;
    for (i64 jj = lo_i.get_si(); jj <= hi_i.get_si(); ++jj) {
        i64 red = jj % static_cast<i64>(p);
        if (red < 0) red += static_cast<i64>(p);
        if (static_cast<u64>(red) == cls) found.push_back(jj);
    }
    if (found.size() != 1)
        throw std::domain_error("lambda: j is not unique in the closed window (m=" +
                                std::to_string(m) + ", r=" + std::to_string(r) + ")");
    return found[0];
}

ShiftedForm assemble(const ShiftedForm& form, const LambdaRecord& rec) {
    u64 p = rec.prime;
    i64 pk = 1;
    for (int i = 0; i < rec.scale_exponent; ++i) pk *= static_cast<i64>(p);
    i64 p2 = static_cast<i64>(p) * static_cast<i64>(p);
    std::vector<i64> a = form.coefficients, r = form.levels;
    for (size_t t = 0; t < rec.unit_indices.size(); ++t) {
        int i = rec.unit_indices[t];
        a[i] *= p2;
        r[i] = rec.new_levels[t];
    }
    for (auto& c : a) {
        if (c % pk != 0) throw std::logic_error("lambda: scaling does not divide");
        c /= pk;
    }
    return ShiftedForm(form.m, std::move(a), std::move(r), form.domain);
}

LambdaRecord make_record(const ShiftedForm& form, u64 p) {
    if (!is_primitive(form)) throw std::invalid_argument("lambda: rescale to primitive first");
    LambdaRecord rec;
    rec.prime = p;
    int min_nonunit_ord = 2;
    for (int i = 0; i < form.rank(); ++i) {
        if (form.coefficients[i] % static_cast<i64>(p) != 0) {
            rec.unit_indices.push_back(i);
        } else {
            min_nonunit_ord =
                std::min(min_nonunit_ord, ord_p(static_cast<u64>(form.coefficients[i]), p));
        }
    }
    rec.scale_exponent = min_nonunit_ord;  // 2 if every coefficient is a unit
    rec.constant = 0;
    for (int i : rec.unit_indices) {
        i64 m = form.m, r = form.levels[i];
        i64 j;
        if (p == 2) {
            i64 g = (m - 2 - 2 * r) / 4;
            if (form.domain == Domain::NonNegativeIntegers)
                j = ((g % 2) + 2) % 2;
            else
                j = (g % 2 == 0) ? 0 : (g > 0 ? 1 : -1);
        } else {
            j = pick_j(m, r, p, form.domain);
        }
        i64 num = (m - 2) * (static_cast<i64>(p) + 2 * j) - (m - 2 - 2 * r);
        if (num % (2 * static_cast<i64>(p)) != 0) throw std::logic_error("lambda: r' not integral");
        i64 rp = num / (2 * static_cast<i64>(p));
        if (std::gcd(rp, m - 2) != 1) throw std::logic_error("lambda: r' not coprime to m-2");
        rec.j.push_back(j);
        rec.new_levels.push_back(rp);
        rec.constant += form.coefficients[i] * shifted_polygonal(m, r, j);
    }
    if (rec.constant < 0) throw std::logic_error("lambda: negative constant");
    return rec;
}

}  // namespace

std::pair<ShiftedForm, LambdaRecord> lambda_p(const ShiftedForm& form, u64 p) {
    if (p == 2 || !is_prime(p)) throw std::invalid_argument("lambda_p: p must be an odd prime");
    if ((form.m - 2) % static_cast<i64>(p) == 0)
        throw std::invalid_argument("lambda_p: inapplicable, p divides m-2");
    LambdaRecord rec = make_record(form, p);
    return {assemble(form, rec), rec};
}

std::pair<ShiftedForm, LambdaRecord> lambda_2(const ShiftedForm& form) {
    if (form.m % 4 != 0) throw std::invalid_argument("lambda_2: inapplicable, m != 0 mod 4");
    LambdaRecord rec = make_record(form, 2);
    return {assemble(form, rec), rec};
}

std::pair<ShiftedForm, LambdaRecord> lambda_step(const ShiftedForm& form, u64 p) {
    return p == 2 ? lambda_2(form) : lambda_p(form, p);
}

std::vector<i64> lambda_substitution(const LambdaRecord& rec, const std::vector<i64>& x) {
    std::vector<i64> out = x;
    for (size_t t = 0; t < rec.unit_indices.size(); ++t)
        out[rec.unit_indices[t]] = static_cast<i64>(rec.prime) * x[rec.unit_indices[t]] + rec.j[t];
    return out;
}

ShiftedForm lambda_unscaled(const ShiftedForm& input, const LambdaRecord& rec) {
    i64 p2 = static_cast<i64>(rec.prime) * static_cast<i64>(rec.prime);
    std::vector<i64> a = input.coefficients, r = input.levels;
    for (size_t t = 0; t < rec.unit_indices.size(); ++t) {
        a[rec.unit_indices[t]] *= p2;
        r[rec.unit_indices[t]] = rec.new_levels[t];
    }
    return ShiftedForm(input.m, std::move(a), std::move(r), input.domain);
}

bool condition_3_7(const ShiftedForm& form) {
    if (form.m % 4 != 0) throw std::invalid_argument("condition_3_7: requires m = 0 mod 4");
    int units = 0;
    bool class1 = false, class3 = false, has_two_mod_four = false;
    for (i64 a : form.coefficients) {
        if (a % 2 != 0) {
            ++units;
            (a % 4 == 1 ? class1 : class3) = true;
        } else if (a % 4 == 2) {
            has_two_mod_four = true;
        }
    }
    // Contrapositive of the case split behind the lambda_2 regularity lemma:
    // <a> fails to contain <u, u'> (u = 1, u' = 3 mod 4) exactly when there is
    // at most one unit, or 2..3 units in a single class mod 4 with every even
    // coefficient divisible by 4.
    if (units >= 4) return true;
    if (units >= 2 && class1 && class3) return true;
    if (units >= 2 && has_two_mod_four) return true;
    return false;
}

namespace {

bool local_target_holds(const ShiftedForm& form, u64 p, int cap) {
    LocalVerdict v = is_zp_universal(form, p, cap);
    if (v.undetermined())
        throw UndeterminedError("local universality undetermined at p=" + std::to_string(p), p,
                                v.cap());
    if (p == 2 && v.no()) return condition_3_7(form);
    return v.yes();
}

}  // namespace

std::pair<ShiftedForm, std::vector<LambdaRecord>> lambda_tilde(const ShiftedForm& form, u64 p,
                                                               int max_iter) {
    if (p == 2 && form.m % 4 != 0)
        throw std::invalid_argument("lambda_tilde: p=2 requires m = 0 mod 4");
    ShiftedForm cur = is_primitive(form) ? form : primitive_rescale(form);
    std::vector<LambdaRecord> trail;
    int iter = 0;
    while (!local_target_holds(cur, p, -1)) {
        if (iter++ >= max_iter)
            throw IterationLimitError("lambda_tilde: iteration limit at p=" + std::to_string(p),
                                      std::move(trail));
        auto [next, rec] = lambda_step(cur, p);
        cur = is_primitive(next) ? next : primitive_rescale(next);
        trail.push_back(std::move(rec));
    }
    return {cur, trail};
}

std::vector<u64> bad_primes(const ShiftedForm& form, int cap) {
    if (!is_primitive(form)) throw std::invalid_argument("bad_primes: form must be primitive");
    std::vector<u64> out;
    for (u64 p : relevant_primes(form)) {
        LocalVerdict v = is_zp_universal(form, p, cap);
        if (v.undetermined())
            throw UndeterminedError("bad_primes: undetermined at p=" + std::to_string(p), p,
                                    v.cap());
        if (v.yes()) continue;
        if (p == 2 && condition_3_7(form)) continue;
        out.push_back(p);
    }
    return out;
}

std::pair<ShiftedForm, std::vector<LambdaRecord>> lambda_full(const ShiftedForm& form,
                                                              int max_iter) {
    if (!is_primitive(form)) throw std::invalid_argument("lambda_full: form must be primitive");
    ShiftedForm cur = form;
    std::vector<LambdaRecord> trail;
    for (u64 p : bad_primes(form)) {
        auto [next, steps] = lambda_tilde(cur, p, max_iter);
        cur = std::move(next);
        for (auto& s : steps) trail.push_back(std::move(s));
    }
    return {cur, trail};
}

}  // namespace polyreg
