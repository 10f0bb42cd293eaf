#pragma once

#include "revca/ca_engine.hpp"
#include "revca/rule_table.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace revca {

// The pair graph has 4^(D-1) vertices; beyond this it is not built.
inline constexpr int kMaxOracleDiameter = 12;

struct InjectivityVerdict {
    bool injective = false;
    // Two distinct configurations of equal length with equal images; present
    // iff !injective.
    std::optional<std::pair<Configuration, Configuration>> witness;
};

// Decides injectivity of the global map on the pair graph (two copies of the
// de Bruijn graph joined on equal outputs): not injective iff some cycle
// passes through an off-diagonal vertex. The witness is the shortest such
// cycle, read off as two periodic configurations.
InjectivityVerdict debruijn_injective(const RuleTable& rule);

// Verdict only. Repeatedly trims pair-graph vertices without predecessors or
// successors; the map is injective iff no off-diagonal vertex survives. The
// workspace is reused across calls to avoid reallocation.
class PairGraphTrimmer {
public:
    bool injective(const RuleTable& rule);

private:
    std::vector<std::uint32_t> in_degree_;
    std::vector<std::uint32_t> out_degree_;
    std::vector<std::uint8_t> removed_;
    std::vector<std::uint32_t> queue_;
};

// True iff step permutes the 2^n configurations of length n.
bool periodic_bijective(const RuleTable& rule, int length, int bound = kDefaultExhaustiveBound);

// Checks the verdict against periodic behaviour up to n_max: an injective
// verdict needs bijectivity at every length, a non-injective one needs its
// witness (when short enough) to collide.
bool cross_validate(const RuleTable& rule, int n_max);

struct SweepOptions {
    bool exclude_trivial = false;
    // Required for D = 5 (balanced tables only, C(32, 16) candidates).
    bool allow_long = false;
    // Keep only tables with f(0...0) = 0. Negating the output preserves
    // injectivity, so this keeps one table of each complementary pair.
    bool quiescent_only = false;
};

class SweepRefused : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exhaustive sweeps split the table space of diameter D into a fixed number
// of chunks processed independently; results of one chunk are sorted by
// Wolfram number and chunk c precedes chunk c + 1.
std::uint64_t sweep_chunk_count(int diameter);
std::vector<RuleTable> sweep_chunk(int diameter, std::uint64_t chunk, bool exclude_trivial);
// Throws SweepRefused for D >= 6, or D = 5 without allow_long.
void check_sweep_allowed(int diameter, const SweepOptions& options);

// Every injective table of diameter D in ascending Wolfram order, streamed to
// `sink` from a single thread at a time.
void sweep_injective(int diameter, const SweepOptions& options,
                     const std::function<void(const RuleTable&)>& sink);
std::vector<RuleTable> exhaustive_injective(int diameter, const SweepOptions& options);

}  // namespace revca
