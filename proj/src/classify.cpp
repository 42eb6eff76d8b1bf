#include "polyreg/classify.hpp"

#include <algorithm>

namespace polyreg {

std::string family_name(FamilyId id) {
    switch (id) {
        case FamilyId::Universal: return "universal";
        case FamilyId::F1_4: return "F1_4";
        case FamilyId::F1_6: return "F1_6";
        case FamilyId::F1_7: return "F1_7";
        case FamilyId::F1_8: return "F1_8";
        case FamilyId::F1_11: return "F1_11";
        case FamilyId::F1_12: return "F1_12";
        case FamilyId::F1_13: return "F1_13";
        case FamilyId::F1_14: return "F1_14";
        case FamilyId::F1_15: return "F1_15";
        case FamilyId::F1_16: return "F1_16";
        case FamilyId::F1_17: return "F1_17";
    }
    return "?";
}

bool ResidueClassSet::contains(i64 n) const {
    i64 r = ((n % modulus) + modulus) % modulus;
    return std::binary_search(residues.begin(), residues.end(), r);
}

void ResidueClassSet::canonicalize() {
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    std::vector<bool> full(modulus, false);
    for (i64 r : residues) full[r] = true;
    for (i64 d = 1; d < modulus; ++d) {
        if (modulus % d != 0) continue;
        bool ok = true;
        for (i64 r = 0; r < modulus && ok; ++r) ok = (full[r] == full[r % d]);
        if (!ok) continue;
        std::vector<i64> out;
        for (i64 r = 0; r < d; ++r)
            if (full[r]) out.push_back(r);
        modulus = d;
        residues = std::move(out);
        return;
    }
}

namespace {

bool all_divisible(const std::vector<i64>& v, size_t from, i64 d) {
    for (size_t i = from; i < v.size(); ++i)
        if (v[i] % d != 0) return false;
    return true;
}

}  // namespace

std::vector<FamilyTag> match_family(const ShiftedForm& form) {
    if (!is_primitive(form)) throw std::invalid_argument("match_family: form must be primitive");
    std::vector<FamilyTag> tags;
    if (!form.ordinary_levels()) return tags;
    std::vector<i64> a = form.coefficients;
    std::sort(a.begin(), a.end());
    const size_t n = a.size();

    std::optional<TheoremId> window;
    try {
        window = theorem_window(form.m, form.domain);
    } catch (const NoTheoremApplies&) {
    }
    auto applicable = [&](FamilyId id) {
        if (!window || form.rank() < 4) return false;
        auto fams = window_families(*window);
        return std::find(fams.begin(), fams.end(), id) != fams.end();
    };
    auto add = [&](FamilyId id, i64 a1) { tags.push_back({id, a1, applicable(id)}); };

    // mod-12 families first; they refine the mod-3/mod-4 shapes below.
    auto nondiv12 = [&] {
        std::vector<i64> out;
        for (i64 c : a)
            if (c % 12 != 0) out.push_back(c);
        return out;
    }();
    if (n >= 3 && nondiv12 == std::vector<i64>{3, 4}) add(FamilyId::F1_15, 0);
    if (n >= 3 && nondiv12 == std::vector<i64>{3, 8}) add(FamilyId::F1_16, 0);
    if (n >= 4 && nondiv12 == std::vector<i64>{3, 3, 4}) add(FamilyId::F1_17, 0);
    if (!tags.empty()) return tags;

    if (n >= 2 && (a[0] == 1 || a[0] == 2) && all_divisible(a, 1, 3)) add(FamilyId::F1_4, a[0]);
    std::vector<i64> nondiv4;
    for (i64 c : a)
        if (c % 4 != 0) nondiv4.push_back(c);
    if (n >= 2 && nondiv4.size() == 1 && (nondiv4[0] == 1 || nondiv4[0] == 3))
        add(FamilyId::F1_6, nondiv4[0]);
    if (n >= 3 && nondiv4 == std::vector<i64>{1, 3}) add(FamilyId::F1_7, 0);
    if (n >= 3 && nondiv4 == std::vector<i64>{1, 1}) add(FamilyId::F1_8, 0);
    return tags;
}

ResidueClassSet predicted_classes(FamilyId id, i64 a1) {
    switch (id) {
        case FamilyId::Universal:
            throw std::invalid_argument("predicted_classes: universal tag has no class set");
        case FamilyId::F1_4:
        case FamilyId::F1_11:
            return {3, {0, ((a1 % 3) + 3) % 3}};
        case FamilyId::F1_6:
        case FamilyId::F1_12:
            return {4, {0, ((a1 % 4) + 4) % 4}};
        case FamilyId::F1_7:
        case FamilyId::F1_13:
            return {4, {0, 1, 3}};
        case FamilyId::F1_8:
        case FamilyId::F1_14:
            return {4, {0, 1, 2}};
        case FamilyId::F1_15:
            return {12, {0, 3, 4, 7}};
        case FamilyId::F1_16:
            return {12, {0, 3, 8, 11}};
        case FamilyId::F1_17:
            return {12, {0, 3, 4, 6, 7, 10}};
    }
    throw std::invalid_argument("predicted_classes: unknown family");
}

FamilyClaimResult verify_family_claim(const ShiftedForm& form, const FamilyTag& tag, i64 B) {
    FamilyClaimResult out;
    ResidueClassSet classes = predicted_classes(tag.id, tag.a1);
    auto local = locally_represented_set(form, B);
    out.undetermined = local.undetermined;
    out.local_match = true;
    for (i64 nv = 0; nv <= B; ++nv) {
        if (std::binary_search(out.undetermined.begin(), out.undetermined.end(), nv)) continue;
        if (local.set.test(nv) != classes.contains(nv)) {
            out.local_match = false;
            if (out.defects.size() < 64) out.defects.push_back(nv);
        }
    }
    BitSieve rep = represented_set(form, B);
    out.global_consistent = true;
    for (i64 nv = 0; nv <= B; ++nv) {
        if (classes.contains(nv) && !rep.test(nv)) {
            out.global_consistent = false;
            break;
        }
    }
    return out;
}

i64 rank_lower_bound(i64 m) {
    if (m < 3) throw std::domain_error("rank_lower_bound: m must be >= 3");
    i64 half = m / 2;
    i64 x = (m % 4 != 0) ? half : half / 2 + half / 8;
    i64 n = 0;
    while ((i64(1) << n) < x) ++n;
    return n;
}

i64 min_universal_rank(i64 m) {
    if (m < 3) throw std::domain_error("min_universal_rank: m must be >= 3");
    i64 n = 0;
    while ((i64(1) << n) < m + 2) ++n;
    return n;
}

std::string theorem_name(TheoremId id) {
    switch (id) {
        case TheoremId::Thm4_1: return "Thm4.1";
        case TheoremId::Thm4_2: return "Thm4.2";
        case TheoremId::Thm4_4: return "Thm4.4";
        case TheoremId::Thm4_5: return "Thm4.5";
        case TheoremId::Thm4_10_1: return "Thm4.10(1)";
        case TheoremId::Thm4_10_2: return "Thm4.10(2)";
        case TheoremId::Thm4_10_3: return "Thm4.10(3)";
        case TheoremId::Thm4_10_4: return "Thm4.10(4)";
    }
    return "?";
}

TheoremId theorem_window(i64 m, Domain domain) {
    bool div4 = m % 4 == 0;
    bool two_mod3 = m % 3 == 2;
    if (domain == Domain::GeneralizedIntegers) {
        if (!div4 && m >= 14) return two_mod3 ? TheoremId::Thm4_1 : TheoremId::Thm4_2;
        if (div4 && m >= 28) return two_mod3 ? TheoremId::Thm4_4 : TheoremId::Thm4_5;
    } else {
        if (!div4 && m >= 9) return two_mod3 ? TheoremId::Thm4_10_1 : TheoremId::Thm4_10_2;
        if (div4 && m >= 12) return two_mod3 ? TheoremId::Thm4_10_3 : TheoremId::Thm4_10_4;
    }
    throw NoTheoremApplies("no classification theorem covers m=" + std::to_string(m));
}

std::vector<FamilyId> window_families(TheoremId id) {
    switch (id) {
        case TheoremId::Thm4_1:
        case TheoremId::Thm4_10_1:
            return {};
        case TheoremId::Thm4_2:
        case TheoremId::Thm4_10_2:
            return {FamilyId::F1_4};
        case TheoremId::Thm4_4:
        case TheoremId::Thm4_10_3:
            return {FamilyId::F1_6, FamilyId::F1_7, FamilyId::F1_8};
        case TheoremId::Thm4_5:
        case TheoremId::Thm4_10_4:
            return {FamilyId::F1_4,  FamilyId::F1_6,  FamilyId::F1_7, FamilyId::F1_8,
                    FamilyId::F1_15, FamilyId::F1_16, FamilyId::F1_17};
    }
    return {};
}

}  // namespace polyreg
