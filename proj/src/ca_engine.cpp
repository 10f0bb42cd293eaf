#include "revca/ca_engine.hpp"

#include "revca/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace revca {

Configuration::Configuration(std::vector<std::uint8_t> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw std::invalid_argument("configuration must have at least one cell");
    for (auto& c : cells_)
        if (c > 1) throw std::invalid_argument("configuration cells must be 0 or 1");
}

Configuration Configuration::parse(std::string_view text) {
    std::vector<std::uint8_t> cells;
    cells.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1')
            throw std::invalid_argument("configuration must be a binary string: \"" + std::string(text) + "\"");
        cells.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return Configuration(std::move(cells));
}

Configuration Configuration::from_packed(std::uint64_t packed, int length) {
    if (length < 1 || length > 64) throw std::invalid_argument("packed configuration length out of range");
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) cells[static_cast<std::size_t>(i)] = (packed >> i) & 1;
    return Configuration(std::move(cells));
}

std::uint8_t Configuration::at_cyclic(std::int64_t i) const {
    const auto n = static_cast<std::int64_t>(cells_.size());
    return cells_[static_cast<std::size_t>(((i % n) + n) % n)];
}

std::string Configuration::to_string() const {
    std::string out(cells_.size(), '0');
    for (std::size_t i = 0; i < cells_.size(); ++i) out[i] = static_cast<char>('0' + cells_[i]);
    return out;
}

std::uint64_t Configuration::packed() const {
    if (cells_.size() > 64) throw std::invalid_argument("configuration too long to pack");
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) out |= std::uint64_t{cells_[i]} << i;
    return out;
}

Configuration step(const RuleTable& rule, const Configuration& c) {
    const auto n = static_cast<std::int64_t>(c.size());
    const int d = rule.diameter();
    const std::uint64_t mask = rule.size() - 1;
    std::vector<std::uint8_t> out(c.size());

    // Rolling window: shift in the next right-hand cell per position.
    std::uint64_t window = 0;
    const std::int64_t start = -rule.anchor();
    for (int t = 0; t < d; ++t) window = (window << 1) | c.at_cyclic(start + t);
    for (std::int64_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = rule[window];
        window = ((window << 1) | c.at_cyclic(i + 1 + start + d - 1)) & mask;
    }
    return Configuration(std::move(out));
}

std::uint64_t step_packed(const RuleTable& rule, std::uint64_t cells, int length) {
    const int d = rule.diameter();
    const std::uint64_t mask = rule.size() - 1;
    const auto cell = [&](int i) -> std::uint64_t {
        i %= length;
        if (i < 0) i += length;
        return (cells >> i) & 1;
    };
    std::uint64_t window = 0;
    const int start = -rule.anchor();
    for (int t = 0; t < d; ++t) window = (window << 1) | cell(start + t);
    std::uint64_t out = 0;
    for (int i = 0; i < length; ++i) {
        out |= std::uint64_t{rule[window]} << i;
        window = ((window << 1) | cell(i + start + d)) & mask;
    }
    return out;
}

Configuration shift(const Configuration& c, std::int64_t k) {
    std::vector<std::uint8_t> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c.at_cyclic(static_cast<std::int64_t>(i) - k);
    return Configuration(std::move(out));
}

std::optional<std::size_t> orbit_period(const RuleTable& rule, const Configuration& c,
                                        std::size_t max_steps) {
    Configuration current = c;
    for (std::size_t t = 1; t <= max_steps; ++t) {
        current = step(rule, current);
        if (current == c) return t;
    }
    return std::nullopt;
}

bool check_involution(const RuleTable& rule, int length, int bound) {
    if (length < 1) throw std::invalid_argument("configuration length must be positive");
    if (length > bound || length > 62)
        throw BoundExceeded("length " + std::to_string(length) + " exceeds exhaustive bound " +
                            std::to_string(bound) + "; use sampling");
    const std::uint64_t total = std::uint64_t{1} << length;
    std::atomic<bool> ok{true};
    parallel_chunks(total, std::max<std::uint64_t>(1, total >> 14),
                    [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                        for (std::uint64_t c = begin; c < end && ok.load(std::memory_order_relaxed); ++c) {
                            if (step_packed(rule, step_packed(rule, c, length), length) != c) ok = false;
                        }
                    });
    return ok;
}

bool check_involution_sampled(const RuleTable& rule, int length, std::size_t samples,
                              std::mt19937_64& rng) {
    if (length < 1 || length > 64) throw std::invalid_argument("sampled length must be in [1, 64]");
    const std::uint64_t mask = length == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length) - 1;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::uint64_t c = rng() & mask;
        if (step_packed(rule, step_packed(rule, c, length), length) != c) return false;
    }
    return true;
}

std::string to_pbm(const std::vector<Configuration>& history) {
    if (history.empty()) throw std::invalid_argument("empty history");
    std::ostringstream out;
    out << "P1\n" << history.front().size() << ' ' << history.size() << '\n';
    for (const auto& row : history) {
        if (row.size() != history.front().size()) throw std::invalid_argument("ragged history");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << int{row[i]};
        out << '\n';
    }
    return out.str();
}

}  // namespace revca
