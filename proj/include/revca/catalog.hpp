#pragma once

#include "revca/injectivity.hpp"
#include "revca/rule_table.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace revca {

// One line of a JSONL rule catalog.
struct CatalogEntry {
    int diameter = 0;
    int anchor = 0;
    std::string wolfram_decimal;
    std::string table_hex;
    std::vector<std::string> provenance;
    bool verified_debruijn = false;
    int verified_periodic_to = 0;
    std::string classification;
    // ISO-8601 UTC; empty when printed to stdout.
    std::string created_at;

    static CatalogEntry from_rule(const RuleTable& rule, std::vector<std::string> provenance = {});
    // Decodes wolfram_decimal and table_hex and throws RuleError unless both
    // describe the same table.
    RuleTable rule() const;
};

nlohmann::ordered_json to_json(const CatalogEntry& entry);
CatalogEntry catalog_entry_from_json(const nlohmann::json& j);

// Serialized rule: {diameter, anchor, wolfram_decimal, table_hex, provenance}.
nlohmann::ordered_json rule_to_json(const RuleTable& rule, const std::vector<std::string>& provenance = {});
RuleTable rule_from_json(const nlohmann::json& j);

std::string utc_timestamp();

void append_catalog(const std::filesystem::path& path, const CatalogEntry& entry);
std::vector<CatalogEntry> read_catalog(const std::filesystem::path& path);

// Resumable exhaustive sweep. The progress file holds one JSON object
//   {"format":"revca-sweep-progress","version":1,"diameter":D,
//    "exclude_trivial":bool,"quiescent_only":bool,"chunks":N,"next_chunk":k}
// meaning chunks [0, k) are complete and their results are exactly the
// entries of the results file (JSONL CatalogEntry, ascending Wolfram order).
// On restart, completed chunks are skipped and their stored results are
// replayed to `sink` first.
struct Checkpoint {
    std::filesystem::path progress;
    std::filesystem::path results;
};

void resumable_sweep(int diameter, const SweepOptions& options, const Checkpoint& checkpoint,
                     const std::function<void(const RuleTable&)>& sink);

}  // namespace revca
