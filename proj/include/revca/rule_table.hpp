#pragma once

#include "revca/pattern.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revca {

inline constexpr int kMaxRuleDiameter = 24;

class RuleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integer naming a rule table: bit v is the output for window value v.
struct WolframNumber {
    boost::multiprecision::cpp_int value;

    // Throws RuleError on anything but plain decimal digits.
    static WolframNumber from_decimal(std::string_view text);
    std::string to_decimal() const;

    friend bool operator==(const WolframNumber&, const WolframNumber&) = default;
};

// Local rule of diameter D over {0, 1}. Window value v reads the D cells
// with the leftmost one as the most significant bit. The anchor is the cell
// within the window whose next state the rule produces; it takes no part in
// equality or ordering.
class RuleTable {
public:
    // All-zero table.
    RuleTable(int diameter, int anchor);

    int diameter() const { return diameter_; }
    int anchor() const { return anchor_; }
    std::uint64_t size() const { return std::uint64_t{1} << diameter_; }

    bool operator[](std::uint64_t window) const { return (words_[window >> 6] >> (window & 63)) & 1; }
    void set(std::uint64_t window, bool value);
    void flip(std::uint64_t window) { words_[window >> 6] ^= std::uint64_t{1} << (window & 63); }

    std::uint64_t popcount() const;
    RuleTable with_anchor(int anchor) const;

    // Packed output bits, window 0 in bit 0 of word 0.
    std::span<const std::uint64_t> words() const { return words_; }

    friend bool operator==(const RuleTable& a, const RuleTable& b) {
        return a.diameter_ == b.diameter_ && a.words_ == b.words_;
    }
    // Diameter first, then numeric Wolfram order.
    friend std::strong_ordering operator<=>(const RuleTable& a, const RuleTable& b);

private:
    int diameter_;
    int anchor_;
    std::vector<std::uint64_t> words_;
};

RuleTable projection_table(int diameter, int cell);
RuleTable complement_table(int diameter, int cell);

// Starts from the projection onto the mixture anchor and flips every window
// matched by a member. Throws std::logic_error if two members claim the same
// window.
RuleTable induce(const MixtureSet& mixture);
RuleTable induce(const PatternString& pattern);

WolframNumber to_wolfram(const RuleTable& rule);
// anchor < 0 selects the centre cell (D - 1) / 2.
RuleTable from_wolfram(int diameter, const WolframNumber& number, int anchor = -1);

// Lowercase hex of the output bits, window 0 in the last digit.
std::string to_table_hex(const RuleTable& rule);
RuleTable from_table_hex(int diameter, std::string_view hex, int anchor = -1);

bool is_balanced(const RuleTable& rule);

struct TrivialClass {
    enum class Kind { Projection, Complement, NonTrivial };
    Kind kind = Kind::NonTrivial;
    int cell = -1;

    bool trivial() const { return kind != Kind::NonTrivial; }
    friend bool operator==(const TrivialClass&, const TrivialClass&) = default;
};

// "Projection(j)", "Complement(j)" or "NonTrivial".
std::string to_string(const TrivialClass& c);

TrivialClass classify_trivial(const RuleTable& rule);

// Left-right mirror of the neighbourhood; anchor maps to D - 1 - anchor.
RuleTable reflect(const RuleTable& rule);
// Conjugation by global complement: f'(w) = 1 - f(~w).
RuleTable complement_conjugate(const RuleTable& rule);

}  // namespace revca
