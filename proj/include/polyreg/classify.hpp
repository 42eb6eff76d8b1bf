#pragma once

#include <string>

#include "polyreg/represent.hpp"

namespace polyreg {

// Classification families of the rank >= 4 regular-form theorems, named by the
// equation labels of the statement. F1_11..F1_14 are the window-4 aliases of
// the F1_4..F1_8 shapes; matching reports the canonical shape ids.
enum class FamilyId {
    Universal,
    F1_4,   // <a1, 3a2', ...>, a1 in {1,2}
    F1_6,   // <a1, 4a2', ...>, a1 in {1,3}
    F1_7,   // <1, 3, 4a3', ...>
    F1_8,   // <1, 1, 4a3', ...>
    F1_11,  // = F1_4 shape
    F1_12,  // = F1_6 shape
    F1_13,  // = F1_7 shape
    F1_14,  // = F1_8 shape
    F1_15,  // <3, 4, 12a3', ...>
    F1_16,  // <3, 8, 12a3', ...>
    F1_17,  // <3, 3, 4, 12a4', ...>
};

std::string family_name(FamilyId id);

struct ResidueClassSet {
    i64 modulus = 1;
    std::vector<i64> residues;  // sorted, in [0, modulus)

    bool contains(i64 n) const;
    // Minimal modulus among equivalent descriptions, residues sorted.
    void canonicalize();
    bool operator==(const ResidueClassSet&) const = default;
};

struct FamilyTag {
    FamilyId id = FamilyId::Universal;
    i64 a1 = 0;              // parameter for F1_4 / F1_6 shapes
    bool applicable = false;  // m, rank and domain inside the governing theorem window
};

// Purely syntactic coefficient-pattern matching on the sorted coefficients of a
// primitive ordinary form. A mod-12 family match suppresses the coarser mod-3
// and mod-4 shapes it refines.
std::vector<FamilyTag> match_family(const ShiftedForm& form);

ResidueClassSet predicted_classes(FamilyId id, i64 a1 = 0);

struct FamilyClaimResult {
    bool local_match = false;
    bool global_consistent = false;
    std::vector<i64> defects;       // N where local set and prediction disagree
    std::vector<i64> undetermined;  // N with undetermined local verdicts
};

FamilyClaimResult verify_family_claim(const ShiftedForm& form, const FamilyTag& tag, i64 B);

// Smallest rank a generalized regular shifted form can have for this m.
i64 rank_lower_bound(i64 m);
// Minimal rank of a generalized universal m-gonal form.
i64 min_universal_rank(i64 m);

enum class TheoremId {
    Thm4_1,     // generalized, m >= 14, m != 0 mod 4, m = 2 mod 3: universal
    Thm4_2,     // generalized, m >= 14, m != 0 mod 4, m != 2 mod 3
    Thm4_4,     // generalized, m >= 28, m = 0 mod 4, m = 2 mod 3
    Thm4_5,     // generalized, m >= 28, m = 0 mod 4, m != 2 mod 3
    Thm4_10_1,  // non-negative, m >= 9, m != 0 mod 4, m = 2 mod 3
    Thm4_10_2,
    Thm4_10_3,  // non-negative, m >= 12, m = 0 mod 4, m = 2 mod 3
    Thm4_10_4,
};

std::string theorem_name(TheoremId id);

struct NoTheoremApplies : std::domain_error {
    using std::domain_error::domain_error;
};

TheoremId theorem_window(i64 m, Domain domain);

// Families allowed (besides universal) inside a window.
std::vector<FamilyId> window_families(TheoremId id);

}  // namespace polyreg
