#pragma once

#include "revca/rule_table.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revca {

inline constexpr int kDefaultExhaustiveBound = 20;

// Cyclic binary word; cell indices are taken modulo size().
class Configuration {
public:
    explicit Configuration(std::vector<std::uint8_t> cells);
    // Binary string, leftmost character is cell 0. Throws std::invalid_argument.
    static Configuration parse(std::string_view text);
    // Bit i of `packed` is cell i; 1 <= length <= 64.
    static Configuration from_packed(std::uint64_t packed, int length);

    std::size_t size() const { return cells_.size(); }
    std::uint8_t operator[](std::size_t i) const { return cells_[i]; }
    std::uint8_t at_cyclic(std::int64_t i) const;
    const std::vector<std::uint8_t>& cells() const { return cells_; }

    std::string to_string() const;
    std::uint64_t packed() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    std::vector<std::uint8_t> cells_;
};

// One synchronous update: cell i reads window c[i - anchor .. i - anchor + D - 1].
Configuration step(const RuleTable& rule, const Configuration& c);

// Same update on a packed word of `length` <= 64 cells (bit i = cell i).
std::uint64_t step_packed(const RuleTable& rule, std::uint64_t cells, int length);

// Cyclic rotation to the right: result[i] = c[i - k].
Configuration shift(const Configuration& c, std::int64_t k);

// Smallest t in [1, max_steps] with step^t(c) == c.
std::optional<std::size_t> orbit_period(const RuleTable& rule, const Configuration& c,
                                        std::size_t max_steps);

class BoundExceeded : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// step(step(c)) == c for all 2^n configurations of length n. Throws
// BoundExceeded when n > bound; use check_involution_sampled instead.
bool check_involution(const RuleTable& rule, int length, int bound = kDefaultExhaustiveBound);

// Same check on `samples` uniformly random configurations of length <= 64.
bool check_involution_sampled(const RuleTable& rule, int length, std::size_t samples,
                              std::mt19937_64& rng);

// Plain PBM (P1) raster, one row per configuration.
std::string to_pbm(const std::vector<Configuration>& history);

}  // namespace revca
