#include "polyreg/explore.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>

#include <json.hpp>

namespace polyreg {

namespace {

using nlohmann::json;

// Depth-first escalation carrying the accumulated represented-set down the
// tree, so each node costs one more sumset pass.
void escalate_rec(i64 m, Domain domain, int max_rank, i64 B, const BitSieve& acc, int node_idx,
                  EscalationResult& res) {
    EscalatorNode node = res.tree[node_idx];  // copy: vector may reallocate below
    std::optional<i64> truant = acc.first_missing();
    res.tree[node_idx].truant = truant;
    if (!truant) {
        if (res.min_rank_proved < 0 || node.depth < res.min_rank_proved)
            res.min_rank_proved = node.depth;
        if (node.depth >= 1) {
            ShiftedForm f = ShiftedForm::ordinary(m, node.prefix, domain);
            LocalVerdict lu = is_locally_universal(f);
            if (lu.yes())
                res.candidates.push_back(f);
            else
                res.truant_free_not_locally_universal.push_back(f);
        }
        return;
    }
    if (node.depth >= max_rank) return;
    i64 lo = node.prefix.empty() ? 1 : node.prefix.back();
    for (i64 c = lo; c <= *truant; ++c) {
        BitSieve next(B);
        for (i64 v : term_values(m, 1, c, B, domain))
            or_shl_bits(next.words(), acc.words(), static_cast<u64>(v), static_cast<u64>(B) + 1);
        EscalatorNode child;
        child.prefix = node.prefix;
        child.prefix.push_back(c);
        child.depth = node.depth + 1;
        int child_idx = static_cast<int>(res.tree.size());
        res.tree[node_idx].children.push_back(child_idx);
        res.tree.push_back(std::move(child));
        escalate_rec(m, domain, max_rank, B, next, child_idx, res);
    }
}

}  // namespace

EscalationResult escalate_universal(i64 m, Domain domain, int max_rank, i64 B) {
    if (B < m) throw std::invalid_argument("escalate_universal: bound must be >= m");
    if (max_rank < 1) throw std::invalid_argument("escalate_universal: max_rank must be >= 1");
    EscalationResult res;
    EscalatorNode root;
    root.depth = 0;
    res.tree.push_back(root);
    BitSieve acc(B);
    acc.set(0);
    escalate_rec(m, domain, max_rank, B, acc, 0, res);
    return res;
}

std::vector<SurveyRecord> survey_regular(i64 m, int rank, i64 coeff_bound, i64 B, Domain domain,
                                         int shards, int shard, bool override_window) {
    if (!override_window) theorem_window(m, domain);  // throws NoTheoremApplies outside
    if (shards < 1 || shard < 0 || shard >= shards)
        throw std::invalid_argument("survey_regular: bad shard spec");

    std::vector<SurveyRecord> out;
    std::vector<i64> a(rank, 1);
    i64 index = 0;
    auto emit = [&](const std::vector<i64>& coeffs) {
        i64 g = 0;
        for (i64 c : coeffs) g = std::gcd(g, c);
        if (g != 1) return;
        if (index++ % shards != shard) return;
        auto start = std::chrono::steady_clock::now();
        ShiftedForm form = ShiftedForm::ordinary(m, coeffs, domain);
        RegularityReport rep = regularity_report(form, B, -1, 16);
        SurveyRecord rec;
        rec.form_spec = form.spec_string();
        rec.status = rep.irregular() ? "irregular" : "consistent";
        rec.first_cx = rep.first_counterexample();
        rec.cx_count = static_cast<i64>(rep.counterexamples.size());
        rec.undetermined_count = static_cast<i64>(rep.undetermined.size());
        bool universal_consistent = false;
        if (!rep.irregular()) {
            LocalVerdict lu = is_locally_universal(form);
            universal_consistent = lu.yes() && !rep.represented.first_missing().has_value();
            if (universal_consistent) rec.tags.push_back("universal-consistent");
        }
        for (const FamilyTag& t : match_family(form)) {
            std::string name = family_name(t.id);
            if (t.id == FamilyId::F1_4 || t.id == FamilyId::F1_6)
                name += "(a1=" + std::to_string(t.a1) + ")";
            rec.tags.push_back(name);
        }
        rec.outside_classification =
            rec.status == "consistent" && !universal_consistent && match_family(form).empty();
        rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
        out.push_back(std::move(rec));
    };
    auto rec_enum = [&](auto&& self, int pos, i64 lo) -> void {
        if (pos == rank) {
            emit(a);
            return;
        }
        for (i64 c = lo; c <= coeff_bound; ++c) {
            a[pos] = c;
            self(self, pos + 1, c);
        }
    };
    rec_enum(rec_enum, 0, 1);
    return out;
}

namespace {

json record_to_json(const SurveyRecord& r) {
    json j;
    j["form"] = r.form_spec;
    j["status"] = r.status;
    if (r.first_cx)
        j["first_cx"] = *r.first_cx;
    else
        j["first_cx"] = nullptr;
    j["cx_count"] = r.cx_count;
    j["tags"] = r.tags;
    j["undetermined"] = r.undetermined_count;
    j["outside_classification"] = r.outside_classification;
    j["ms"] = r.ms;
    return j;
}

SurveyRecord record_from_json(const json& j) {
    SurveyRecord r;
    r.form_spec = j.at("form").get<std::string>();
    r.status = j.at("status").get<std::string>();
    if (!j.at("first_cx").is_null()) r.first_cx = j.at("first_cx").get<i64>();
    r.cx_count = j.value("cx_count", i64(0));
    r.tags = j.at("tags").get<std::vector<std::string>>();
    r.undetermined_count = j.value("undetermined", i64(0));
    r.outside_classification = j.value("outside_classification", false);
    r.ms = j.value("ms", 0.0);
    return r;
}

}  // namespace

void cache_append(const std::string& path, const SurveyRecord& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cache_append: cannot open " + path);
    out << record_to_json(record).dump() << "\n";
    if (!out) throw std::runtime_error("cache_append: write failed on " + path);
}

std::vector<SurveyRecord> cache_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cache_load: cannot open " + path);
    std::vector<SurveyRecord> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error("cache_load: " + path + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return out;
}

std::vector<SurveyRecord> cache_merge(const std::vector<std::vector<SurveyRecord>>& parts) {
    std::map<std::string, SurveyRecord> by_form;
    for (const auto& part : parts)
        for (const auto& r : part) by_form.emplace(r.form_spec, r);
    std::vector<SurveyRecord> out;
    out.reserve(by_form.size());
    for (auto& [k, v] : by_form) out.push_back(v);
    return out;
}

std::string default_cache_dir() {
    const char* env = std::getenv("POLYREG_CACHE");
    return env ? env : ".";
}

}  // namespace polyreg
