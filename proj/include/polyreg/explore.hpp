#pragma once

#include "polyreg/classify.hpp"
#include "polyreg/watson.hpp"

namespace polyreg {

struct EscalatorNode {
    std::vector<i64> prefix;     // nondecreasing coefficients
    std::optional<i64> truant;   // least N <= B not represented
    int depth = 0;
    std::vector<int> children;   // indices into EscalationResult::tree
};

struct EscalationResult {
    std::vector<EscalatorNode> tree;
    int min_rank_proved = -1;  // least depth of a truant-free node; -1 if none
    std::vector<ShiftedForm> candidates;  // truant-free and locally universal
    std::vector<ShiftedForm> truant_free_not_locally_universal;
};

// Bhargava escalation over ordinary forms (levels 1): children extend the
// prefix by a coefficient between the last one and the node's truant.
EscalationResult escalate_universal(i64 m, Domain domain, int max_rank, i64 B);

struct SurveyRecord {
    std::string form_spec;
    std::string status;  // "consistent" | "irregular"
    std::optional<i64> first_cx;
    i64 cx_count = 0;
    std::vector<std::string> tags;
    i64 undetermined_count = 0;
    bool outside_classification = false;
    double ms = 0;
};

// Enumerates primitive ordinary forms of the given rank with nondecreasing
// coefficients <= coeff_bound, reports regularity to B, and cross-checks
// consistent records against the classification families. Shard i of k
// processes every k-th form.
std::vector<SurveyRecord> survey_regular(i64 m, int rank, i64 coeff_bound, i64 B,
                                         Domain domain = Domain::GeneralizedIntegers,
                                         int shards = 1, int shard = 0,
                                         bool override_window = false);

// Append-only JSONL cache.
void cache_append(const std::string& path, const SurveyRecord& record);
std::vector<SurveyRecord> cache_load(const std::string& path);
// Deterministic sorted union by form spec (first record wins on duplicates).
std::vector<SurveyRecord> cache_merge(const std::vector<std::vector<SurveyRecord>>& parts);

std::string default_cache_dir();

}  // namespace polyreg
