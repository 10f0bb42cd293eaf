#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace revca {

// Cell template symbol. Flip marks the cell whose state the induced rule
// toggles; Wild stands for either state.
enum class Symbol : std::uint8_t { Zero, One, Flip, Wild };

using SymbolString = std::vector<Symbol>;

char to_char(Symbol s);
std::string format_symbols(std::span<const Symbol> symbols);
// Accepts any mix of 0, 1, X and a; no structural checks.
SymbolString parse_symbols(std::string_view text);

class PatternError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A map-string template: an injective core e_{-L}..X..e_R padded with
// `left_wild` leading and `right_wild` trailing wildcard cells.
class PatternString {
public:
    // Throws PatternError unless there is exactly one X and wildcards only
    // form a prefix and a suffix.
    static PatternString parse(std::string_view text);
    static PatternString from_symbols(SymbolString symbols);

    std::string to_string() const { return format_symbols(symbols_); }

    std::span<const Symbol> symbols() const { return symbols_; }
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    int diameter() const { return static_cast<int>(symbols_.size()); }
    int anchor() const { return anchor_; }
    int left_wild() const { return left_wild_; }
    int right_wild() const { return right_wild_; }
    int left_radius() const { return anchor_ - left_wild_; }
    int right_radius() const { return diameter() - 1 - anchor_ - right_wild_; }
    int core_length() const { return diameter() - left_wild_ - right_wild_; }

    // Inclusive [start, end] of the wildcard-free core.
    std::pair<int, int> core_span() const {
        return {left_wild_, diameter() - 1 - right_wild_};
    }
    bool is_core() const { return left_wild_ == 0 && right_wild_ == 0; }
    PatternString core() const;

    // Binary value of the core with X read as 0, leftmost cell most significant.
    std::uint64_t core_value() const;

    friend bool operator==(const PatternString& a, const PatternString& b) {
        return a.symbols_ == b.symbols_;
    }

private:
    PatternString() = default;

    SymbolString symbols_;
    int anchor_ = 0;
    int left_wild_ = 0;
    int right_wild_ = 0;
};

// Canonical ordering: anchor, then core value with X = 0, then core length,
// then left wildcard count.
std::strong_ordering canonical_order(const PatternString& a, const PatternString& b);
void sort_canonical(std::vector<PatternString>& patterns);

// First / last `len` symbols; 1 <= len <= D - 1.
SymbolString prefix_substring(const PatternString& p, int len);
SymbolString suffix_substring(const PatternString& p, int len);

// True iff some concrete binary string realises both templates, i.e. no
// position pairs Zero with One. Throws PatternError on length mismatch.
bool compatible(std::span<const Symbol> s, std::span<const Symbol> t);

// Relative placement of two cores that overlap compatibly. `offset` is the
// start of the first pattern measured from the start of the second.
struct OverlapWitness {
    int offset = 0;
    int length = 0;
};

// Overlap (if any) that makes `p` fail the injective-pattern test. Requires
// a wildcard-free pattern.
std::optional<OverlapWitness> injectivity_witness(const PatternString& p);
bool is_injective_pattern(const PatternString& p);

// First compatible overlap between two cores that covers an X of either
// one. Identical inputs reduce to injectivity_witness.
std::optional<OverlapWitness> dependence_witness(const PatternString& a,
                                                 const PatternString& b);
bool independent(const PatternString& shorter, const PatternString& longer);

// All injective cores with the given radii, in ascending core value.
std::vector<PatternString> generate_injective_patterns(int left_radius, int right_radius);
// Union over every split L + R + 1 = diameter, canonically ordered.
std::vector<PatternString> generate_all_patterns(int diameter);

PatternString extend(const PatternString& p, int left, int right);

// Every wildcard extension to `diameter` of an injective core of diameter
// 2..diameter-1. The single-cell core "X" is not extended.
std::vector<PatternString> enumerate_extended(int diameter);

// Window values (leftmost cell most significant) matched by the template,
// ascending. Size is 2^(wildcards + 1).
std::vector<std::uint64_t> concretizations(const PatternString& p);
std::string format_window(std::uint64_t window, int diameter);

class MixtureSet {
public:
    std::span<const PatternString> members() const { return members_; }
    int diameter() const { return diameter_; }
    int anchor() const { return anchor_; }
    std::size_t size() const { return members_.size(); }

private:
    friend MixtureSet build_mixture(std::vector<PatternString> candidates);
    std::vector<PatternString> members_;
    int diameter_ = 0;
    int anchor_ = 0;
};

enum class MixtureClause {
    Empty,
    DiameterMismatch,
    AnchorMismatch,
    NotInjective,
    Dependent,
};

std::string to_string(MixtureClause clause);

class MixtureError : public std::invalid_argument {
public:
    MixtureError(MixtureClause clause, std::string first, std::string second,
                 std::optional<OverlapWitness> overlap);

    MixtureClause clause() const { return clause_; }
    const std::string& first() const { return first_; }
    const std::string& second() const { return second_; }
    const std::optional<OverlapWitness>& overlap() const { return overlap_; }

private:
    MixtureClause clause_;
    std::string first_;
    std::string second_;
    std::optional<OverlapWitness> overlap_;
};

// Validates candidates as a pattern mixture; throws MixtureError naming the
// first failing member or ordered pair.
MixtureSet build_mixture(std::vector<PatternString> candidates);

// Every pattern (core of full length or extension) of the given diameter
// whose X sits at `anchor`, canonically ordered.
std::vector<PatternString> mixture_candidates(int diameter, int anchor);

}  // namespace revca
