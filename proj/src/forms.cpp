#include "polyreg/forms.hpp"

#include <algorithm>
#include <sstream>

namespace polyreg {

namespace {

void check_level(i64 m, i64 r, Domain domain) {
    if (std::gcd(r < 0 ? -r : r, m - 2) != 1)
        throw std::invalid_argument("level " + std::to_string(r) + " not coprime to m-2");
    if (domain == Domain::GeneralizedIntegers) {
        if (r < 0 || r > m - 2)
            throw std::invalid_argument("generalized level must lie in [0, m-2]");
    } else {
        if (r < 1) throw std::invalid_argument("non-negative-domain level must be >= 1");
    }
}

std::vector<i64> parse_csv(const std::string& s) {
    std::vector<i64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty list entry in form spec");
        out.push_back(std::stoll(item));
    }
    return out;
}

}  // namespace

ShiftedForm::ShiftedForm(i64 m_, std::vector<i64> a, std::vector<i64> r, Domain dom)
    : m(m_), coefficients(std::move(a)), levels(std::move(r)), domain(dom) {
    if (m < 3) throw std::invalid_argument("m must be >= 3");
    if (coefficients.empty()) throw std::invalid_argument("form must have rank >= 1");
    if (coefficients.size() != levels.size())
        throw std::invalid_argument("coefficient/level count mismatch");
    for (i64 c : coefficients)
        if (c < 1) throw std::invalid_argument("coefficients must be positive");
    for (i64 lv : levels) check_level(m, lv, domain);
}

ShiftedForm ShiftedForm::ordinary(i64 m, std::vector<i64> a, Domain dom) {
    std::vector<i64> r(a.size(), 1);
    return ShiftedForm(m, std::move(a), std::move(r), dom);
}

bool ShiftedForm::ordinary_levels() const {
    return std::all_of(levels.begin(), levels.end(), [](i64 r) { return r == 1; });
}

std::string ShiftedForm::spec_string() const {
    std::ostringstream os;
    os << "m=" << m << ";a=";
    for (size_t i = 0; i < coefficients.size(); ++i) os << (i ? "," : "") << coefficients[i];
    os << ";r=";
    for (size_t i = 0; i < levels.size(); ++i) os << (i ? "," : "") << levels[i];
    os << ";domain=" << (domain == Domain::GeneralizedIntegers ? "Z" : "N");
    return os.str();
}

ShiftedForm ShiftedForm::parse(const std::string& spec) {
    i64 m = 0;
    std::vector<i64> a, r;
    Domain dom = Domain::GeneralizedIntegers;
    bool have_m = false, have_a = false, have_dom = false;
    std::stringstream ss(spec);
    std::string field;
    while (std::getline(ss, field, ';')) {
        auto eq = field.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad form spec field: " + field);
        std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "m") {
            m = std::stoll(val);
            have_m = true;
        } else if (key == "a") {
            a = parse_csv(val);
            have_a = true;
        } else if (key == "r") {
            r = parse_csv(val);
        } else if (key == "domain") {
            if (val == "Z")
                dom = Domain::GeneralizedIntegers;
            else if (val == "N")
                dom = Domain::NonNegativeIntegers;
            else
                throw std::invalid_argument("domain must be Z or N");
            have_dom = true;
        } else {
            throw std::invalid_argument("unknown form spec key: " + key);
        }
    }
    if (!have_m || !have_a || !have_dom)
        throw std::invalid_argument("form spec needs m=, a=, domain=");
    if (r.empty()) r.assign(a.size(), 1);
    return ShiftedForm(m, std::move(a), std::move(r), dom);
}

mpz_class polygonal(i64 m, const mpz_class& x) {
    if (m < 3) throw std::domain_error("polygonal: m must be >= 3");
    mpz_class v = (m - 2) * x * x - (m - 4) * x;
    return v / 2;
}

mpz_class shifted_polygonal(i64 m, i64 r, const mpz_class& x) {
    if (m < 3) throw std::domain_error("shifted_polygonal: m must be >= 3");
    if (std::gcd(r < 0 ? -r : r, m - 2) != 1)
        throw std::invalid_argument("shifted_polygonal: gcd(r, m-2) != 1");
    mpz_class v = (m - 2) * x * x - (m - 2 - 2 * r) * x;
    return v / 2;
}

mpz_class evaluate_form(const ShiftedForm& form, const std::vector<mpz_class>& x) {
    if (x.size() != form.coefficients.size())
        throw std::invalid_argument("evaluate_form: length mismatch");
    mpz_class total = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (form.domain == Domain::NonNegativeIntegers && x[i] < 0)
            throw std::invalid_argument("evaluate_form: negative variable in non-negative domain");
        total += form.coefficients[i] * shifted_polygonal(form.m, form.levels[i], x[i]);
    }
    return total;
}

mpz_class evaluate_form(const ShiftedForm& form, const std::vector<i64>& x) {
    std::vector<mpz_class> xx(x.begin(), x.end());
    return evaluate_form(form, xx);
}

mpq_class QuadraticDecomposition::evaluate(const std::vector<i64>& a,
                                           const std::vector<mpq_class>& x) const {
    mpq_class s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        mpq_class d = x[i] - shifts[i];
        s += a[i] * d * d;
    }
    return weight * s - constant;
}

QuadraticDecomposition quadratic_decomposition(const ShiftedForm& form) {
    QuadraticDecomposition d;
    d.weight = mpq_class(form.m - 2, 2);
    d.weight.canonicalize();
    d.constant = 0;
    for (size_t i = 0; i < form.coefficients.size(); ++i) {
        i64 num = form.m - 2 - 2 * form.levels[i];
        mpq_class s(num, 2 * (form.m - 2));
        s.canonicalize();
        d.shifts.push_back(s);
        mpq_class c(form.coefficients[i] * num * num, 8 * (form.m - 2));
        c.canonicalize();
        d.constant += c;
    }
    return d;
}

bool is_primitive(const ShiftedForm& form) {
    i64 g = 0;
    for (i64 c : form.coefficients) g = std::gcd(g, c);
    return g == 1;
}

ShiftedForm primitive_rescale(const ShiftedForm& form) {
    i64 g = 0;
    for (i64 c : form.coefficients) g = std::gcd(g, c);
    ShiftedForm out = form;
    for (i64& c : out.coefficients) c /= g;
    return out;
}

bool same_type(i64 m, i64 r, i64 rp) {
    check_level(m, r, Domain::GeneralizedIntegers);
    check_level(m, rp, Domain::GeneralizedIntegers);
    return rp == r || rp == m - 2 - r;
}

i64 count_shifted_types(i64 m) {
    if (m < 5) throw std::domain_error("count_shifted_types: m must be >= 5");
    return static_cast<i64>(euler_phi(static_cast<u64>(m - 2)) / 2);
}

}  // namespace polyreg
