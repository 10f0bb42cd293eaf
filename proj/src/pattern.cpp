#include "revca/pattern.hpp"

#include "revca/parallel.hpp"

#include <algorithm>
#include <bit>
#include <iterator>

namespace revca {

namespace {

constexpr int kMaxPatternDiameter = 32;

// Bit i of value/care describes position i (leftmost position = bit 0).
struct Packed {
    std::uint64_t value = 0;
    std::uint64_t care = 0;
    int length = 0;
    int flip = 0;
};

Packed pack(const PatternString& p) {
    Packed out;
    out.length = p.diameter();
    out.flip = p.anchor();
    for (int i = 0; i < out.length; ++i) {
        switch (p[static_cast<std::size_t>(i)]) {
        case Symbol::One:
            out.value |= std::uint64_t{1} << i;
            [[fallthrough]];
        case Symbol::Zero:
            out.care |= std::uint64_t{1} << i;
            break;
        default:
            break;
        }
    }
    return out;
}

// `a` placed at `offset` relative to the start of `b`.
bool overlap_compatible(const Packed& a, const Packed& b, int offset) {
    std::uint64_t av = a.value, ac = a.care, bv = b.value, bc = b.care;
    if (offset >= 0) {
        av <<= offset;
        ac <<= offset;
    } else {
        bv <<= -offset;
        bc <<= -offset;
    }
    return ((av ^ bv) & ac & bc) == 0;
}

std::optional<OverlapWitness> first_conflict(const Packed& a, const Packed& b, bool same) {
    for (int offset = -(a.length - 1); offset < b.length; ++offset) {
        if (same && offset == 0) continue;
        const int lo = std::max(0, offset);
        const int hi = std::min(b.length, offset + a.length);
        const int a_flip = offset + a.flip;
        const bool covers_flip = (a_flip >= lo && a_flip < hi) || (b.flip >= lo && b.flip < hi);
        if (!covers_flip) continue;
        if (overlap_compatible(a, b, offset)) return OverlapWitness{offset, hi - lo};
    }
    return std::nullopt;
}

void require_core(const PatternString& p, const char* what) {
    if (!p.is_core())
        throw PatternError(std::string(what) + ": expected a wildcard-free pattern, got " +
                           p.to_string());
}

void require_radii(int left, int right) {
    if (left < 0 || right < 0 || left + right + 1 > kMaxPatternDiameter)
        throw PatternError("radii out of range: L=" + std::to_string(left) +
                           " R=" + std::to_string(right));
}

}  // namespace

char to_char(Symbol s) {
    switch (s) {
    case Symbol::Zero: return '0';
    case Symbol::One: return '1';
    case Symbol::Flip: return 'X';
    case Symbol::Wild: return 'a';
    }
    return '?';
}

std::string format_symbols(std::span<const Symbol> symbols) {
    std::string out;
    out.reserve(symbols.size());
    std::ranges::transform(symbols, std::back_inserter(out), to_char);
    return out;
}

SymbolString parse_symbols(std::string_view text) {
    SymbolString out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '0': out.push_back(Symbol::Zero); break;
        case '1': out.push_back(Symbol::One); break;
        case 'X': out.push_back(Symbol::Flip); break;
        case 'a': out.push_back(Symbol::Wild); break;
        default:
            throw PatternError("invalid pattern character '" + std::string(1, c) + "' in \"" +
                               std::string(text) + "\"");
        }
    }
    return out;
}

PatternString PatternString::parse(std::string_view text) {
    return from_symbols(parse_symbols(text));
}

PatternString PatternString::from_symbols(SymbolString symbols) {
    const std::string text = format_symbols(symbols);
    if (symbols.empty()) throw PatternError("empty pattern");
    if (symbols.size() > kMaxPatternDiameter)
        throw PatternError("pattern longer than " + std::to_string(kMaxPatternDiameter) + ": " + text);
    if (std::ranges::count(symbols, Symbol::Flip) != 1)
        throw PatternError("pattern must contain exactly one X: " + text);

    PatternString p;
    const auto first_fixed = std::ranges::find_if(symbols, [](Symbol s) { return s != Symbol::Wild; });
    const auto last_fixed = std::find_if(symbols.rbegin(), symbols.rend(),
                                         [](Symbol s) { return s != Symbol::Wild; });
    p.left_wild_ = static_cast<int>(first_fixed - symbols.begin());
    p.right_wild_ = static_cast<int>(last_fixed - symbols.rbegin());
    const auto core_end = symbols.end() - p.right_wild_;
    if (std::find(first_fixed, core_end, Symbol::Wild) != core_end)
        throw PatternError("wildcards are only allowed at the ends: " + text);
    p.anchor_ = static_cast<int>(std::ranges::find(symbols, Symbol::Flip) - symbols.begin());
    p.symbols_ = std::move(symbols);
    return p;
}

PatternString PatternString::core() const {
    const auto [start, end] = core_span();
    return from_symbols(SymbolString(symbols_.begin() + start, symbols_.begin() + end + 1));
}

std::uint64_t PatternString::core_value() const {
    std::uint64_t v = 0;
    const auto [start, end] = core_span();
    for (int i = start; i <= end; ++i) v = (v << 1) | (symbols_[static_cast<std::size_t>(i)] == Symbol::One);
    return v;
}

std::strong_ordering canonical_order(const PatternString& a, const PatternString& b) {
    if (auto c = a.anchor() <=> b.anchor(); c != 0) return c;
    if (auto c = a.core_value() <=> b.core_value(); c != 0) return c;
    if (auto c = a.core_length() <=> b.core_length(); c != 0) return c;
    if (auto c = a.left_wild() <=> b.left_wild(); c != 0) return c;
    return a.diameter() <=> b.diameter();
}

void sort_canonical(std::vector<PatternString>& patterns) {
    std::ranges::sort(patterns, [](const auto& a, const auto& b) { return canonical_order(a, b) < 0; });
}

SymbolString prefix_substring(const PatternString& p, int len) {
    if (len < 1 || len > p.diameter() - 1)
        throw PatternError("prefix length " + std::to_string(len) + " out of range for " + p.to_string());
    return SymbolString(p.symbols().begin(), p.symbols().begin() + len);
}

SymbolString suffix_substring(const PatternString& p, int len) {
    if (len < 1 || len > p.diameter() - 1)
        throw PatternError("suffix length " + std::to_string(len) + " out of range for " + p.to_string());
    return SymbolString(p.symbols().end() - len, p.symbols().end());
}

bool compatible(std::span<const Symbol> s, std::span<const Symbol> t) {
    if (s.size() != t.size())
        throw PatternError("compatible: length mismatch " + std::to_string(s.size()) + " vs " +
                           std::to_string(t.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == Symbol::Zero && t[i] == Symbol::One) || (s[i] == Symbol::One && t[i] == Symbol::Zero))
            return false;
    }
    return true;
}

std::optional<OverlapWitness> injectivity_witness(const PatternString& p) {
    require_core(p, "is_injective_pattern");
    const Packed packed = pack(p);
    return first_conflict(packed, packed, true);
}

bool is_injective_pattern(const PatternString& p) { return !injectivity_witness(p).has_value(); }

std::optional<OverlapWitness> dependence_witness(const PatternString& a, const PatternString& b) {
    require_core(a, "independent");
    require_core(b, "independent");
    return first_conflict(pack(a), pack(b), a == b);
}

bool independent(const PatternString& shorter, const PatternString& longer) {
    return !dependence_witness(shorter, longer).has_value();
}

std::vector<PatternString> generate_injective_patterns(int left_radius, int right_radius) {
    require_radii(left_radius, right_radius);
    const int free_cells = left_radius + right_radius;
    const std::uint64_t total = std::uint64_t{1} << free_cells;
    const std::uint64_t chunks = std::max<std::uint64_t>(1, total >> 12);

    // Each chunk fills its own slot; concatenating slots keeps ascending order.
    std::vector<std::vector<PatternString>> found(chunks);
    parallel_chunks(total, chunks, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        SymbolString symbols(static_cast<std::size_t>(free_cells + 1));
        for (std::uint64_t assignment = begin; assignment < end; ++assignment) {
            for (int i = 0, bit = free_cells - 1; i <= free_cells; ++i) {
                if (i == left_radius) {
                    symbols[static_cast<std::size_t>(i)] = Symbol::Flip;
                    continue;
                }
                symbols[static_cast<std::size_t>(i)] = ((assignment >> bit) & 1) ? Symbol::One : Symbol::Zero;
                --bit;
            }
            PatternString p = PatternString::from_symbols(symbols);
            if (is_injective_pattern(p)) found[chunk].push_back(std::move(p));
        }
    });

    std::vector<PatternString> out;
    for (auto& part : found) std::ranges::move(part, std::back_inserter(out));
    return out;
}

std::vector<PatternString> generate_all_patterns(int diameter) {
    if (diameter < 1 || diameter > kMaxPatternDiameter)
        throw PatternError("diameter out of range: " + std::to_string(diameter));
    std::vector<PatternString> out;
    for (int left = 0; left < diameter; ++left) {
        auto part = generate_injective_patterns(left, diameter - 1 - left);
        std::ranges::move(part, std::back_inserter(out));
    }
    sort_canonical(out);
    return out;
}

PatternString extend(const PatternString& p, int left, int right) {
    require_core(p, "extend");
    if (left < 0 || right < 0) throw PatternError("extend: negative wildcard count");
    if (!is_injective_pattern(p)) throw PatternError("extend: not an injective pattern: " + p.to_string());
    SymbolString symbols(static_cast<std::size_t>(left), Symbol::Wild);
    symbols.insert(symbols.end(), p.symbols().begin(), p.symbols().end());
    symbols.insert(symbols.end(), static_cast<std::size_t>(right), Symbol::Wild);
    return PatternString::from_symbols(std::move(symbols));
}

std::vector<PatternString> enumerate_extended(int diameter) {
    if (diameter < 1 || diameter > kMaxPatternDiameter)
        throw PatternError("diameter out of range: " + std::to_string(diameter));
    std::vector<PatternString> out;
    for (int d = 2; d < diameter; ++d) {
        for (const auto& core : generate_all_patterns(d)) {
            for (int left = 0; left <= diameter - d; ++left) out.push_back(extend(core, left, diameter - d - left));
        }
    }
    sort_canonical(out);
    return out;
}

std::vector<std::uint64_t> concretizations(const PatternString& p) {
    const int d = p.diameter();
    std::uint64_t fixed = 0, free = 0;
    for (int i = 0; i < d; ++i) {
        const std::uint64_t bit = std::uint64_t{1} << (d - 1 - i);
        switch (p[static_cast<std::size_t>(i)]) {
        case Symbol::One: fixed |= bit; break;
        case Symbol::Zero: break;
        default: free |= bit; break;
        }
    }
    std::vector<std::uint64_t> out;
    out.reserve(std::size_t{1} << std::popcount(free));
    std::uint64_t sub = 0;
    do {
        out.push_back(fixed | sub);
        sub = (sub - free) & free;
    } while (sub != 0);
    return out;
}

std::string format_window(std::uint64_t window, int diameter) {
    std::string out(static_cast<std::size_t>(diameter), '0');
    for (int i = 0; i < diameter; ++i)
        if ((window >> (diameter - 1 - i)) & 1) out[static_cast<std::size_t>(i)] = '1';
    return out;
}

std::string to_string(MixtureClause clause) {
    switch (clause) {
    case MixtureClause::Empty: return "empty mixture";
    case MixtureClause::DiameterMismatch: return "diameter mismatch";
    case MixtureClause::AnchorMismatch: return "anchor mismatch";
    case MixtureClause::NotInjective: return "core is not an injective pattern";
    case MixtureClause::Dependent: return "independence violation";
    }
    return "unknown";
}

namespace {

std::string mixture_message(MixtureClause clause, const std::string& first, const std::string& second,
                            const std::optional<OverlapWitness>& overlap) {
    std::string msg = to_string(clause);
    if (!first.empty()) msg += ": " + first;
    if (!second.empty()) msg += " / " + second;
    if (overlap)
        msg += " (overlap length " + std::to_string(overlap->length) + " at offset " +
               std::to_string(overlap->offset) + ")";
    return msg;
}

}  // namespace

MixtureError::MixtureError(MixtureClause clause, std::string first, std::string second,
                           std::optional<OverlapWitness> overlap)
    : std::invalid_argument(mixture_message(clause, first, second, overlap)),
      clause_(clause),
      first_(std::move(first)),
      second_(std::move(second)),
      overlap_(overlap) {}

MixtureSet build_mixture(std::vector<PatternString> candidates) {
    if (candidates.empty()) throw MixtureError(MixtureClause::Empty, "", "", std::nullopt);

    const PatternString& head = candidates.front();
    for (const auto& p : candidates) {
        if (p.diameter() != head.diameter())
            throw MixtureError(MixtureClause::DiameterMismatch, head.to_string(), p.to_string(), std::nullopt);
        if (p.anchor() != head.anchor())
            throw MixtureError(MixtureClause::AnchorMismatch, head.to_string(), p.to_string(), std::nullopt);
    }

    sort_canonical(candidates);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<PatternString> cores;
    cores.reserve(candidates.size());
    for (const auto& p : candidates) {
        PatternString core = p.core();
        if (auto w = injectivity_witness(core))
            throw MixtureError(MixtureClause::NotInjective, p.to_string(), "", w);
        cores.push_back(std::move(core));
    }
    for (std::size_t i = 0; i < cores.size(); ++i) {
        for (std::size_t j = i + 1; j < cores.size(); ++j) {
            if (auto w = dependence_witness(cores[i], cores[j]))
                throw MixtureError(MixtureClause::Dependent, candidates[i].to_string(),
                                   candidates[j].to_string(), w);
        }
    }

    MixtureSet m;
    m.diameter_ = candidates.front().diameter();
    m.anchor_ = candidates.front().anchor();
    m.members_ = std::move(candidates);
    return m;
}

std::vector<PatternString> mixture_candidates(int diameter, int anchor) {
    if (anchor < 0 || anchor >= diameter) throw PatternError("anchor out of range");
    std::vector<PatternString> out = generate_injective_patterns(anchor, diameter - 1 - anchor);
    for (int d = 2; d < diameter; ++d) {
        for (const auto& core : generate_all_patterns(d)) {
            const int left = anchor - core.anchor();
            const int right = diameter - d - left;
            if (left >= 0 && right >= 0) out.push_back(extend(core, left, right));
        }
    }
    sort_canonical(out);
    return out;
}

}  // namespace revca
