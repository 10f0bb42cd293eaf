#include "revca/catalog.hpp"

#include "revca/parallel.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>

namespace revca {

using nlohmann::json;
using nlohmann::ordered_json;

CatalogEntry CatalogEntry::from_rule(const RuleTable& rule, std::vector<std::string> provenance) {
    CatalogEntry e;
    e.diameter = rule.diameter();
    e.anchor = rule.anchor();
    e.wolfram_decimal = to_wolfram(rule).to_decimal();
    e.table_hex = to_table_hex(rule);
    e.provenance = std::move(provenance);
    e.classification = to_string(classify_trivial(rule));
    return e;
}

RuleTable CatalogEntry::rule() const {
    RuleTable from_number = from_wolfram(diameter, WolframNumber::from_decimal(wolfram_decimal), anchor);
    RuleTable from_hex = from_table_hex(diameter, table_hex, anchor);
    if (from_number != from_hex)
        throw RuleError("catalog entry inconsistent: wolfram_decimal " + wolfram_decimal +
                        " does not match table_hex " + table_hex);
    return from_number;
}

ordered_json rule_to_json(const RuleTable& rule, const std::vector<std::string>& provenance) {
    ordered_json j;
    j["diameter"] = rule.diameter();
    j["anchor"] = rule.anchor();
    j["wolfram_decimal"] = to_wolfram(rule).to_decimal();
    j["table_hex"] = to_table_hex(rule);
    j["provenance"] = provenance;
    return j;
}

RuleTable rule_from_json(const json& j) {
    try {
        const int diameter = j.at("diameter").get<int>();
        const int anchor = j.at("anchor").get<int>();
        RuleTable rule = from_wolfram(diameter, WolframNumber::from_decimal(j.at("wolfram_decimal").get<std::string>()),
                                      anchor);
        if (j.contains("table_hex") && from_table_hex(diameter, j["table_hex"].get<std::string>(), anchor) != rule)
            throw RuleError("wolfram_decimal and table_hex disagree");
        return rule;
    } catch (const json::exception& e) {
        throw RuleError(std::string("malformed rule JSON: ") + e.what());
    }
}

ordered_json to_json(const CatalogEntry& entry) {
    ordered_json j;
    j["diameter"] = entry.diameter;
    j["anchor"] = entry.anchor;
    j["wolfram_decimal"] = entry.wolfram_decimal;
    j["table_hex"] = entry.table_hex;
    j["provenance"] = entry.provenance;
    j["verified_debruijn"] = entry.verified_debruijn;
    j["verified_periodic_to"] = entry.verified_periodic_to;
    if (!entry.classification.empty()) j["classification"] = entry.classification;
    if (!entry.created_at.empty()) j["created_at"] = entry.created_at;
    return j;
}

CatalogEntry catalog_entry_from_json(const json& j) {
    try {
        CatalogEntry e;
        e.diameter = j.at("diameter").get<int>();
        e.anchor = j.at("anchor").get<int>();
        e.wolfram_decimal = j.at("wolfram_decimal").get<std::string>();
        e.table_hex = j.at("table_hex").get<std::string>();
        e.provenance = j.value("provenance", std::vector<std::string>{});
        e.verified_debruijn = j.value("verified_debruijn", false);
        e.verified_periodic_to = j.value("verified_periodic_to", 0);
        e.classification = j.value("classification", std::string{});
        e.created_at = j.value("created_at", std::string{});
        e.rule();
        return e;
    } catch (const json::exception& ex) {
        throw RuleError(std::string("malformed catalog entry: ") + ex.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void append_catalog(const std::filesystem::path& path, const CatalogEntry& entry) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open catalog " + path.string());
    out << to_json(entry).dump() << '\n';
    if (!out) throw std::runtime_error("failed writing catalog " + path.string());
}

std::vector<CatalogEntry> read_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog " + path.string());
    std::vector<CatalogEntry> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        try {
            out.push_back(catalog_entry_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw RuleError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

namespace {

constexpr const char* kProgressFormat = "revca-sweep-progress";
constexpr int kProgressVersion = 1;

void write_progress(const Checkpoint& cp, int diameter, const SweepOptions& options, std::uint64_t chunks,
                    std::uint64_t next_chunk) {
    ordered_json j;
    j["format"] = kProgressFormat;
    j["version"] = kProgressVersion;
    j["diameter"] = diameter;
    j["exclude_trivial"] = options.exclude_trivial;
    j["quiescent_only"] = options.quiescent_only;
    j["chunks"] = chunks;
    j["next_chunk"] = next_chunk;
    const auto tmp = std::filesystem::path(cp.progress.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump() << '\n';
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, cp.progress);
}

}  // namespace

void resumable_sweep(int diameter, const SweepOptions& options, const Checkpoint& cp,
                     const std::function<void(const RuleTable&)>& sink) {
    check_sweep_allowed(diameter, options);
    const std::uint64_t chunks = sweep_chunk_count(diameter);

    std::uint64_t start = 0;
    if (std::filesystem::exists(cp.progress)) {
        std::ifstream in(cp.progress);
        const json j = json::parse(in);
        if (j.value("format", "") != kProgressFormat || j.value("version", 0) != kProgressVersion)
            throw std::runtime_error("unrecognised progress file " + cp.progress.string());
        if (j.at("diameter").get<int>() != diameter || j.at("exclude_trivial").get<bool>() != options.exclude_trivial ||
            j.value("quiescent_only", false) != options.quiescent_only || j.at("chunks").get<std::uint64_t>() != chunks)
            throw std::runtime_error("progress file " + cp.progress.string() + " belongs to a different sweep");
        start = j.at("next_chunk").get<std::uint64_t>();
        if (std::filesystem::exists(cp.results))
            for (const auto& e : read_catalog(cp.results)) sink(e.rule());
    } else {
        std::ofstream(cp.results, std::ios::trunc);
        write_progress(cp, diameter, options, chunks, 0);
    }
    if (start >= chunks) return;

    std::mutex mutex;
    std::map<std::uint64_t, std::vector<RuleTable>> pending;
    std::uint64_t next = start;
    parallel_chunks(chunks - start, chunks - start, [&](std::uint64_t i, std::uint64_t, std::uint64_t) {
        const std::uint64_t chunk = start + i;
        auto found = sweep_chunk(diameter, chunk, options.exclude_trivial);
        std::lock_guard lock(mutex);
        pending.emplace(chunk, std::move(found));
        while (!pending.empty() && pending.begin()->first == next) {
            for (const auto& rule : pending.begin()->second) {
                if (options.quiescent_only && rule[0]) continue;
                CatalogEntry e = CatalogEntry::from_rule(rule, {"exhaustive"});
                e.verified_debruijn = true;
                e.created_at = utc_timestamp();
                append_catalog(cp.results, e);
                sink(rule);
            }
            pending.erase(pending.begin());
            write_progress(cp, diameter, options, chunks, ++next);
        }
    });
}

}  // namespace revca
