#include "revca/catalog.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace revca;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("revca_catalog_" + std::to_string(std::random_device{}()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

}  // namespace

TEST(CatalogEntry, FromRule) {
    const auto e = CatalogEntry::from_rule(induce(PatternString::parse("0X011")), {"0X011"});
    EXPECT_EQ(e.diameter, 5);
    EXPECT_EQ(e.anchor, 1);
    EXPECT_EQ(e.wolfram_decimal, "4278253320");
    EXPECT_EQ(e.table_hex, "ff00f708");
    EXPECT_EQ(e.classification, "NonTrivial");
    EXPECT_EQ(e.rule(), induce(PatternString::parse("0X011")));
}

TEST(CatalogEntry, JsonRoundTrip) {
    std::mt19937_64 rng(1);
    for (int d = 1; d <= 10; ++d) {
        RuleTable r(d, static_cast<int>(rng() % static_cast<unsigned>(d)));
        for (std::uint64_t v = 0; v < r.size(); ++v) r.set(v, rng() & 1);
        auto e = CatalogEntry::from_rule(r, {"p", "q"});
        e.verified_debruijn = true;
        e.verified_periodic_to = 12;
        e.created_at = "2020-01-01T00:00:00Z";
        const auto back = catalog_entry_from_json(nlohmann::json::parse(to_json(e).dump()));
        EXPECT_EQ(to_json(back), to_json(e));
        EXPECT_EQ(back.rule(), r);
        EXPECT_EQ(back.rule().anchor(), r.anchor());
    }
}

TEST(CatalogEntry, StdoutFormHasNoTimestamp) {
    const auto j = to_json(CatalogEntry::from_rule(projection_table(3, 1)));
    EXPECT_FALSE(j.contains("created_at"));
    EXPECT_EQ(j.dump(),
              R"json({"diameter":3,"anchor":1,"wolfram_decimal":"204","table_hex":"cc","provenance":[],)json"
              R"json("verified_debruijn":false,"verified_periodic_to":0,"classification":"Projection(1)"})json");
}

TEST(CatalogEntry, RejectsInconsistentEntries) {
    auto j = nlohmann::json::parse(to_json(CatalogEntry::from_rule(projection_table(3, 1))).dump());
    j["table_hex"] = "cd";
    EXPECT_THROW(catalog_entry_from_json(j), RuleError);
    j.erase("table_hex");
    EXPECT_THROW(catalog_entry_from_json(j), RuleError);
    EXPECT_THROW(catalog_entry_from_json(nlohmann::json::parse(R"({"diameter":3})")), RuleError);
}

TEST(RuleJson, RoundTrip) {
    const auto r = induce(PatternString::parse("10X1a"));
    const auto j = rule_to_json(r, {"10X1a"});
    EXPECT_EQ(j["wolfram_decimal"], "4030525680");
    EXPECT_EQ(rule_from_json(nlohmann::json::parse(j.dump())), r);
}

TEST(Catalog, AppendAndRead) {
    TempDir dir;
    const auto file = dir.path() / "rules.jsonl";
    std::vector<RuleTable> written;
    for (const auto& p : generate_all_patterns(5)) {
        auto e = CatalogEntry::from_rule(induce(p), {p.to_string()});
        e.created_at = utc_timestamp();
        append_catalog(file, e);
        written.push_back(induce(p));
    }
    const auto entries = read_catalog(file);
    ASSERT_EQ(entries.size(), written.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        EXPECT_EQ(entries[i].rule(), written[i]);
        EXPECT_EQ(entries[i].rule().anchor(), written[i].anchor());
        EXPECT_EQ(entries[i].created_at.size(), 20u);
    }
}

TEST(Catalog, ReportsBadLine) {
    TempDir dir;
    const auto file = dir.path() / "bad.jsonl";
    append_catalog(file, CatalogEntry::from_rule(projection_table(2, 0)));
    std::ofstream(file, std::ios::app) << "{not json\n";
    try {
        read_catalog(file);
        FAIL() << "expected RuleError";
    } catch (const RuleError& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
}

TEST(ResumableSweep, CompletesAndMatchesDirectSweep) {
    TempDir dir;
    const Checkpoint cp{dir.path() / "progress.json", dir.path() / "results.jsonl"};
    std::vector<RuleTable> got;
    resumable_sweep(4, {}, cp, [&](const RuleTable& r) { got.push_back(r); });
    EXPECT_EQ(got, exhaustive_injective(4, {}));
    const auto stored = read_catalog(cp.results);
    ASSERT_EQ(stored.size(), got.size());
    for (const auto& e : stored) {
        EXPECT_TRUE(e.verified_debruijn);
        EXPECT_EQ(e.provenance, std::vector<std::string>{"exhaustive"});
    }
    const auto progress = nlohmann::json::parse(std::ifstream(cp.progress));
    EXPECT_EQ(progress["next_chunk"], sweep_chunk_count(4));

    // A finished sweep only replays.
    std::vector<RuleTable> again;
    resumable_sweep(4, {}, cp, [&](const RuleTable& r) { again.push_back(r); });
    EXPECT_EQ(again, got);
    EXPECT_EQ(read_catalog(cp.results).size(), got.size());
}

TEST(ResumableSweep, ResumesAfterInterruption) {
    TempDir dir;
    const Checkpoint cp{dir.path() / "progress.json", dir.path() / "results.jsonl"};
    const auto expected = exhaustive_injective(4, {});

    // Simulate a crash after chunk 6 completed: keep the results of chunks
    // 0..6 and record next_chunk = 7.
    std::vector<RuleTable> partial;
    for (std::uint64_t c = 0; c < 7; ++c)
        for (const auto& r : sweep_chunk(4, c, false)) partial.push_back(r);
    for (const auto& r : partial) append_catalog(cp.results, CatalogEntry::from_rule(r, {"exhaustive"}));
    nlohmann::ordered_json progress = {{"format", "revca-sweep-progress"}, {"version", 1},
                                       {"diameter", 4},  {"exclude_trivial", false},
                                       {"chunks", 16},   {"next_chunk", 7}};
    std::ofstream(cp.progress) << progress.dump() << '\n';

    std::vector<RuleTable> got;
    resumable_sweep(4, {}, cp, [&](const RuleTable& r) { got.push_back(r); });
    EXPECT_EQ(got, expected);
    EXPECT_EQ(read_catalog(cp.results).size(), expected.size());
}

TEST(ResumableSweep, RejectsForeignProgressFile) {
    TempDir dir;
    const Checkpoint cp{dir.path() / "progress.json", dir.path() / "results.jsonl"};
    resumable_sweep(3, {}, cp, [](const RuleTable&) {});
    EXPECT_THROW(resumable_sweep(4, {}, cp, [](const RuleTable&) {}), std::runtime_error);
    EXPECT_THROW(resumable_sweep(3, {.exclude_trivial = true}, cp, [](const RuleTable&) {}), std::runtime_error);
    EXPECT_THROW(resumable_sweep(3, {.quiescent_only = true}, cp, [](const RuleTable&) {}), std::runtime_error);
}

TEST(ResumableSweep, QuiescentFilterApplies) {
    TempDir dir;
    const Checkpoint cp{dir.path() / "progress.json", dir.path() / "results.jsonl"};
    const SweepOptions options{.exclude_trivial = true, .quiescent_only = true};
    std::vector<RuleTable> got;
    resumable_sweep(4, options, cp, [&](const RuleTable& r) { got.push_back(r); });
    EXPECT_EQ(got, exhaustive_injective(4, options));
    EXPECT_EQ(read_catalog(cp.results).size(), 4u);
}
