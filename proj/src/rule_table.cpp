#include "revca/rule_table.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace revca {

namespace {

using boost::multiprecision::cpp_int;

void require_diameter(int diameter) {
    if (diameter < 1 || diameter > kMaxRuleDiameter)
        throw RuleError("rule diameter must be in [1, " + std::to_string(kMaxRuleDiameter) +
                        "], got " + std::to_string(diameter));
}

void require_cell(int diameter, int cell) {
    if (cell < 0 || cell >= diameter)
        throw RuleError("cell index " + std::to_string(cell) + " out of range for diameter " +
                        std::to_string(diameter));
}

int default_anchor(int diameter, int anchor) { return anchor < 0 ? (diameter - 1) / 2 : anchor; }

}  // namespace

WolframNumber WolframNumber::from_decimal(std::string_view text) {
    if (text.empty() || !std::ranges::all_of(text, [](unsigned char c) { return std::isdigit(c); }))
        throw RuleError("malformed Wolfram number: \"" + std::string(text) + "\"");
    return WolframNumber{cpp_int(std::string(text))};
}

std::string WolframNumber::to_decimal() const { return value.str(); }

RuleTable::RuleTable(int diameter, int anchor) : diameter_(diameter), anchor_(anchor) {
    require_diameter(diameter);
    require_cell(diameter, anchor);
    words_.assign(std::max<std::uint64_t>(1, size() / 64), 0);
}

void RuleTable::set(std::uint64_t window, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (window & 63);
    if (value)
        words_[window >> 6] |= mask;
    else
        words_[window >> 6] &= ~mask;
}

std::uint64_t RuleTable::popcount() const {
    std::uint64_t n = 0;
    for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
}

RuleTable RuleTable::with_anchor(int anchor) const {
    require_cell(diameter_, anchor);
    RuleTable out = *this;
    out.anchor_ = anchor;
    return out;
}

std::strong_ordering operator<=>(const RuleTable& a, const RuleTable& b) {
    if (auto c = a.diameter_ <=> b.diameter_; c != 0) return c;
    for (std::size_t i = a.words_.size(); i-- > 0;) {
        if (auto c = a.words_[i] <=> b.words_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

RuleTable projection_table(int diameter, int cell) {
    require_diameter(diameter);
    require_cell(diameter, cell);
    RuleTable rule(diameter, cell);
    const int shift = diameter - 1 - cell;
    for (std::uint64_t v = 0; v < rule.size(); ++v)
        if ((v >> shift) & 1) rule.set(v, true);
    return rule;
}

RuleTable complement_table(int diameter, int cell) {
    RuleTable rule = projection_table(diameter, cell);
    for (std::uint64_t v = 0; v < rule.size(); ++v) rule.flip(v);
    return rule;
}

RuleTable induce(const MixtureSet& mixture) {
    if (mixture.diameter() > kMaxRuleDiameter)
        throw RuleError("mixture diameter exceeds " + std::to_string(kMaxRuleDiameter));
    RuleTable rule = projection_table(mixture.diameter(), mixture.anchor());
    std::vector<bool> claimed(rule.size(), false);
    for (const auto& member : mixture.members()) {
        for (std::uint64_t w : concretizations(member)) {
            if (claimed[w])
                throw std::logic_error("flip-set collision at window " +
                                       format_window(w, mixture.diameter()) + " (member " +
                                       member.to_string() + ")");
            claimed[w] = true;
            rule.flip(w);
        }
    }
    return rule;
}

RuleTable induce(const PatternString& pattern) { return induce(build_mixture({pattern})); }

WolframNumber to_wolfram(const RuleTable& rule) {
    cpp_int value;
    const auto words = rule.words();
    for (std::size_t i = words.size(); i-- > 0;) {
        value <<= 64;
        value |= words[i];
    }
    return WolframNumber{value};
}

RuleTable from_wolfram(int diameter, const WolframNumber& number, int anchor) {
    require_diameter(diameter);
    RuleTable rule(diameter, default_anchor(diameter, anchor));
    if (number.value < 0 || (number.value != 0 && boost::multiprecision::msb(number.value) >= rule.size()))
        throw RuleError("Wolfram number " + number.to_decimal() + " does not fit diameter " +
                        std::to_string(diameter));
    cpp_int rest = number.value;
    for (std::uint64_t v = 0; rest != 0; ++v, rest >>= 1)
        if (boost::multiprecision::bit_test(rest, 0)) rule.set(v, true);
    return rule;
}

std::string to_table_hex(const RuleTable& rule) {
    const std::uint64_t digits = std::max<std::uint64_t>(1, rule.size() / 4);
    std::string out(digits, '0');
    static constexpr char kHex[] = "0123456789abcdef";
    for (std::uint64_t d = 0; d < digits; ++d) {
        unsigned nibble = 0;
        for (unsigned b = 0; b < 4; ++b) {
            const std::uint64_t v = d * 4 + b;
            if (v < rule.size() && rule[v]) nibble |= 1u << b;
        }
        out[digits - 1 - d] = kHex[nibble];
    }
    return out;
}

RuleTable from_table_hex(int diameter, std::string_view hex, int anchor) {
    require_diameter(diameter);
    RuleTable rule(diameter, default_anchor(diameter, anchor));
    const std::uint64_t digits = std::max<std::uint64_t>(1, rule.size() / 4);
    if (hex.size() != digits)
        throw RuleError("table_hex must have " + std::to_string(digits) + " digits for diameter " +
                        std::to_string(diameter));
    for (std::uint64_t d = 0; d < digits; ++d) {
        const char c = hex[digits - 1 - d];
        unsigned nibble;
        if (c >= '0' && c <= '9')
            nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            nibble = static_cast<unsigned>(c - 'a' + 10);
        else
            throw RuleError("invalid hex digit in table_hex: \"" + std::string(hex) + "\"");
        for (unsigned b = 0; b < 4; ++b) {
            const std::uint64_t v = d * 4 + b;
            if (!((nibble >> b) & 1)) continue;
            if (v >= rule.size()) throw RuleError("table_hex sets a bit beyond the table");
            rule.set(v, true);
        }
    }
    return rule;
}

bool is_balanced(const RuleTable& rule) { return rule.popcount() * 2 == rule.size(); }

std::string to_string(const TrivialClass& c) {
    switch (c.kind) {
    case TrivialClass::Kind::Projection: return "Projection(" + std::to_string(c.cell) + ")";
    case TrivialClass::Kind::Complement: return "Complement(" + std::to_string(c.cell) + ")";
    case TrivialClass::Kind::NonTrivial: return "NonTrivial";
    }
    return "NonTrivial";
}

TrivialClass classify_trivial(const RuleTable& rule) {
    if (!is_balanced(rule)) return {};
    for (int j = 0; j < rule.diameter(); ++j) {
        if (rule == projection_table(rule.diameter(), j)) return {TrivialClass::Kind::Projection, j};
        if (rule == complement_table(rule.diameter(), j)) return {TrivialClass::Kind::Complement, j};
    }
    return {};
}

RuleTable reflect(const RuleTable& rule) {
    const int d = rule.diameter();
    RuleTable out(d, d - 1 - rule.anchor());
    for (std::uint64_t v = 0; v < rule.size(); ++v) {
        std::uint64_t r = 0;
        for (int i = 0; i < d; ++i) r |= ((v >> i) & 1) << (d - 1 - i);
        out.set(r, rule[v]);
    }
    return out;
}

RuleTable complement_conjugate(const RuleTable& rule) {
    RuleTable out(rule.diameter(), rule.anchor());
    const std::uint64_t mask = rule.size() - 1;
    for (std::uint64_t v = 0; v < rule.size(); ++v) out.set(v, !rule[~v & mask]);
    return out;
}

}  // namespace revca
