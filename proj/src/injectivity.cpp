#include "revca/injectivity.hpp"

#include "revca/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <mutex>

namespace revca {

namespace {

// The pair graph needs at least one cell of memory per vertex; a diameter-1
// rule is widened to diameter 2 by ignoring the right-hand cell.
RuleTable widen(const RuleTable& rule) {
    if (rule.diameter() > 1) return rule;
    RuleTable out(2, 0);
    for (std::uint64_t v = 0; v < 4; ++v) out.set(v, rule[v >> 1]);
    return out;
}

void require_oracle_diameter(const RuleTable& rule) {
    if (rule.diameter() > kMaxOracleDiameter)
        throw RuleError("injectivity oracle supports diameter <= " + std::to_string(kMaxOracleDiameter));
}

// Vertex x = (u1 << bits) | u2 where u1, u2 are the last D - 1 cells of the
// two configurations. Successor e in [0, 4) appends bit e >> 1 to the first
// copy and e & 1 to the second.
class PairGraph {
public:
    explicit PairGraph(const RuleTable& rule)
        : rule_(rule), bits_(rule.diameter() - 1), mask_((std::uint64_t{1} << bits_) - 1) {}

    std::uint64_t vertex_count() const { return std::uint64_t{1} << (2 * bits_); }
    bool off_diagonal(std::uint64_t x) const { return (x >> bits_) != (x & mask_); }

    // Returns false when the edge does not exist.
    bool successor(std::uint64_t x, unsigned e, std::uint64_t& to) const {
        const std::uint64_t w1 = ((x >> bits_) << 1) | (e >> 1);
        const std::uint64_t w2 = ((x & mask_) << 1) | (e & 1);
        if (rule_[w1] != rule_[w2]) return false;
        to = ((w1 & mask_) << bits_) | (w2 & mask_);
        return true;
    }

private:
    const RuleTable& rule_;
    int bits_;
    std::uint64_t mask_;
};

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

// Off-diagonal vertices lying on some cycle, ascending.
std::vector<std::uint64_t> cyclic_off_diagonal(const PairGraph& g) {
    const std::uint64_t n = g.vertex_count();
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
    std::vector<std::uint8_t> on_stack(n, 0), self_loop(n, 0);
    std::vector<std::uint64_t> stack;
    std::vector<std::pair<std::uint64_t, unsigned>> call;  // vertex, next edge
    std::vector<std::uint32_t> component_size;
    std::uint32_t counter = 0;

    for (std::uint64_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, e] = call.back();
            if (e < 4) {
                const unsigned edge = e++;
                std::uint64_t w;
                if (!g.successor(v, edge, w)) continue;
                if (w == v) self_loop[v] = 1;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::uint64_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                const auto id = static_cast<std::uint32_t>(component_size.size());
                std::uint32_t size = 0;
                std::uint64_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    component[w] = id;
                    ++size;
                } while (w != done);
                component_size.push_back(size);
            }
        }
    }

    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < n; ++x)
        if (g.off_diagonal(x) && (component_size[component[x]] > 1 || self_loop[x])) out.push_back(x);
    return out;
}

// Shortest cycle through `start` as the sequence of edge labels.
std::vector<unsigned> shortest_cycle(const PairGraph& g, std::uint64_t start) {
    const std::uint64_t n = g.vertex_count();
    std::vector<std::uint64_t> parent(n, std::numeric_limits<std::uint64_t>::max());
    std::vector<std::uint8_t> parent_edge(n, 0);
    std::vector<std::uint64_t> frontier{start};
    std::vector<std::uint64_t> next;
    while (!frontier.empty()) {
        next.clear();
        for (std::uint64_t v : frontier) {
            for (unsigned e = 0; e < 4; ++e) {
                std::uint64_t w;
                if (!g.successor(v, e, w)) continue;
                if (w == start) {
                    std::vector<unsigned> labels{e};
                    for (std::uint64_t x = v; x != start; x = parent[x]) labels.push_back(parent_edge[x]);
                    std::ranges::reverse(labels);
                    return labels;
                }
                if (parent[w] != std::numeric_limits<std::uint64_t>::max()) continue;
                parent[w] = v;
                parent_edge[w] = static_cast<std::uint8_t>(e);
                next.push_back(w);
            }
        }
        std::swap(frontier, next);
    }
    return {};
}

}  // namespace

InjectivityVerdict debruijn_injective(const RuleTable& rule) {
    require_oracle_diameter(rule);
    const RuleTable wide = widen(rule);
    const PairGraph g(wide);
    const auto candidates = cyclic_off_diagonal(g);
    if (candidates.empty()) return {true, std::nullopt};

    // Exhaustive minimisation only while the graph is small.
    const std::size_t tries = g.vertex_count() <= 4096 ? candidates.size() : 1;
    std::vector<unsigned> best;
    for (std::size_t i = 0; i < tries; ++i) {
        auto labels = shortest_cycle(g, candidates[i]);
        if (best.empty() || labels.size() < best.size()) best = std::move(labels);
        if (best.size() == 1) break;
    }

    std::vector<std::uint8_t> first, second;
    for (unsigned e : best) {
        first.push_back(static_cast<std::uint8_t>(e >> 1));
        second.push_back(static_cast<std::uint8_t>(e & 1));
    }
    return {false, std::make_pair(Configuration(std::move(first)), Configuration(std::move(second)))};
}

bool PairGraphTrimmer::injective(const RuleTable& rule) {
    require_oracle_diameter(rule);
    const RuleTable wide = widen(rule);
    const PairGraph g(wide);
    const std::uint64_t n = g.vertex_count();
    in_degree_.assign(n, 0);
    out_degree_.assign(n, 0);
    removed_.assign(n, 0);
    queue_.clear();

    for (std::uint64_t v = 0; v < n; ++v) {
        for (unsigned e = 0; e < 4; ++e) {
            std::uint64_t w;
            if (!g.successor(v, e, w)) continue;
            ++out_degree_[v];
            ++in_degree_[w];
        }
    }
    for (std::uint64_t v = 0; v < n; ++v) {
        if (in_degree_[v] == 0 || out_degree_[v] == 0) {
            removed_[v] = 1;
            queue_.push_back(static_cast<std::uint32_t>(v));
        }
    }

    // Predecessors of x: the two copies each drop their newest cell and
    // regain any older one.
    const int bits = wide.diameter() - 1;
    const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
    while (!queue_.empty()) {
        const std::uint64_t v = queue_.back();
        queue_.pop_back();
        for (unsigned e = 0; e < 4; ++e) {
            std::uint64_t w;
            if (g.successor(v, e, w) && !removed_[w] && --in_degree_[w] == 0) {
                removed_[w] = 1;
                queue_.push_back(static_cast<std::uint32_t>(w));
            }
        }
        const std::uint64_t u1 = v >> bits, u2 = v & mask;
        for (unsigned p = 0; p < 4; ++p) {
            const std::uint64_t pred = (((u1 >> 1) | (std::uint64_t{p >> 1} << (bits - 1))) << bits) |
                                       ((u2 >> 1) | (std::uint64_t{p & 1} << (bits - 1)));
            std::uint64_t w;
            if (removed_[pred]) continue;
            // pred -> v exists iff appending v's newest cells matches.
            if (!g.successor(pred, static_cast<unsigned>(((u1 & 1) << 1) | (u2 & 1)), w) || w != v) continue;
            if (--out_degree_[pred] == 0) {
                removed_[pred] = 1;
                queue_.push_back(static_cast<std::uint32_t>(pred));
            }
        }
    }
    for (std::uint64_t v = 0; v < n; ++v)
        if (!removed_[v] && g.off_diagonal(v)) return false;
    return true;
}

bool periodic_bijective(const RuleTable& rule, int length, int bound) {
    if (length < 1) throw std::invalid_argument("configuration length must be positive");
    if (length > bound || length > 32)
        throw BoundExceeded("length " + std::to_string(length) + " exceeds exhaustive bound " +
                            std::to_string(bound));
    const std::uint64_t total = std::uint64_t{1} << length;
    std::vector<std::uint64_t> seen((total + 63) / 64, 0);
    for (std::uint64_t c = 0; c < total; ++c) {
        const std::uint64_t image = step_packed(rule, c, length);
        std::uint64_t& word = seen[image >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (image & 63);
        if (word & bit) return false;
        word |= bit;
    }
    return true;
}

bool cross_validate(const RuleTable& rule, int n_max) {
    const InjectivityVerdict verdict = debruijn_injective(rule);
    if (verdict.injective) {
        for (int n = 1; n <= n_max; ++n)
            if (!periodic_bijective(rule, n, std::max(n_max, kDefaultExhaustiveBound))) return false;
        return true;
    }
    if (!verdict.witness) return false;
    const auto& [a, b] = *verdict.witness;
    if (a == b || a.size() != b.size() || step(rule, a) != step(rule, b)) return false;
    const int len = static_cast<int>(a.size());
    if (len <= n_max) return !periodic_bijective(rule, len, std::max(n_max, kDefaultExhaustiveBound));
    return true;
}

namespace {

constexpr int kMaxSweepDiameter = 5;

// Necessary condition checked on a raw table of diameter <= 6 (anchor 0):
// the rule permutes all cyclic words of length n.
bool small_periodic_bijective(std::uint64_t table, int diameter, int length) {
    std::uint64_t seen[4] = {0, 0, 0, 0};  // length <= 8
    const std::uint64_t mask = (std::uint64_t{1} << diameter) - 1;
    const std::uint64_t total = std::uint64_t{1} << length;
    for (std::uint64_t c = 0; c < total; ++c) {
        std::uint64_t window = 0;
        for (int t = 0; t < diameter; ++t) window = (window << 1) | ((c >> (t % length)) & 1);
        std::uint64_t image = 0;
        for (int i = 0; i < length; ++i) {
            image |= ((table >> window) & 1) << i;
            window = ((window << 1) | ((c >> ((i + diameter) % length)) & 1)) & mask;
        }
        std::uint64_t& word = seen[image >> 6];
        const std::uint64_t bit = std::uint64_t{1} << (image & 63);
        if (word & bit) return false;
        word |= bit;
    }
    return true;
}

bool is_trivial_raw(std::uint64_t table, int diameter) {
    const std::uint64_t size = std::uint64_t{1} << diameter;
    const std::uint64_t full = size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
    for (int j = 0; j < diameter; ++j) {
        std::uint64_t proj = 0;
        for (std::uint64_t v = 0; v < size; ++v) proj |= ((v >> (diameter - 1 - j)) & 1) << v;
        if (table == proj || table == (~proj & full)) return true;
    }
    return false;
}

RuleTable from_raw(std::uint64_t table, int diameter) {
    RuleTable rule(diameter, (diameter - 1) / 2);
    for (std::uint64_t v = 0; v < rule.size(); ++v)
        if ((table >> v) & 1) rule.set(v, true);
    return rule;
}

// Balanced 32-bit tables whose top byte equals `high`, via Gosper's hack on
// the low 24 bits.
template <typename F>
void for_each_balanced_d5(std::uint64_t high, F&& visit) {
    const int need = 16 - std::popcount(high);
    if (need < 0 || need > 24) return;
    const std::uint64_t top = high << 24;
    if (need == 0) {
        visit(top);
        return;
    }
    const std::uint64_t limit = std::uint64_t{1} << 24;
    for (std::uint64_t low = (std::uint64_t{1} << need) - 1; low < limit;) {
        visit(top | low);
        const std::uint64_t c = low & (~low + 1);
        const std::uint64_t r = low + c;
        low = (((r ^ low) >> 2) / c) | r;
    }
}

}  // namespace

std::uint64_t sweep_chunk_count(int diameter) {
    if (diameter < 1 || diameter > kMaxSweepDiameter)
        throw SweepRefused("exhaustive sweep is infeasible for diameter " + std::to_string(diameter));
    return diameter == 5 ? 256 : (diameter == 4 ? 16 : 1);
}

void check_sweep_allowed(int diameter, const SweepOptions& options) {
    if (diameter < 1) throw SweepRefused("diameter must be positive");
    if (diameter > kMaxSweepDiameter)
        throw SweepRefused("exhaustive sweep refused for diameter " + std::to_string(diameter) +
                           ": 2^" + std::to_string(std::uint64_t{1} << diameter) + " tables");
    if (diameter == 5 && !options.allow_long)
        throw SweepRefused("diameter 5 sweep is long-running; pass allow_long");
}

std::vector<RuleTable> sweep_chunk(int diameter, std::uint64_t chunk, bool exclude_trivial) {
    const std::uint64_t chunks = sweep_chunk_count(diameter);
    if (chunk >= chunks) throw std::out_of_range("sweep chunk out of range");

    PairGraphTrimmer trimmer;
    std::vector<RuleTable> out;
    const auto consider = [&](std::uint64_t table) {
        // Cheap necessary conditions before the pair graph.
        for (int n = 1; n <= 6; ++n)
            if (!small_periodic_bijective(table, diameter, n)) return;
        if (exclude_trivial && is_trivial_raw(table, diameter)) return;
        RuleTable rule = from_raw(table, diameter);
        if (trimmer.injective(rule)) out.push_back(std::move(rule));
    };

    if (diameter == 5) {
        for_each_balanced_d5(chunk, consider);
    } else {
        const std::uint64_t total = std::uint64_t{1} << (std::uint64_t{1} << diameter);
        const std::uint64_t per = total / chunks;
        for (std::uint64_t t = chunk * per; t < (chunk + 1) * per; ++t) consider(t);
    }
    return out;
}

void sweep_injective(int diameter, const SweepOptions& options,
                     const std::function<void(const RuleTable&)>& sink) {
    check_sweep_allowed(diameter, options);
    const std::uint64_t chunks = sweep_chunk_count(diameter);

    std::mutex mutex;
    std::map<std::uint64_t, std::vector<RuleTable>> pending;
    std::uint64_t next = 0;
    parallel_chunks(chunks, chunks, [&](std::uint64_t chunk, std::uint64_t, std::uint64_t) {
        auto found = sweep_chunk(diameter, chunk, options.exclude_trivial);
        std::lock_guard lock(mutex);
        pending.emplace(chunk, std::move(found));
        while (!pending.empty() && pending.begin()->first == next) {
            for (const auto& rule : pending.begin()->second)
                if (!options.quiescent_only || !rule[0]) sink(rule);
            pending.erase(pending.begin());
            ++next;
        }
    });
}

std::vector<RuleTable> exhaustive_injective(int diameter, const SweepOptions& options) {
    std::vector<RuleTable> out;
    sweep_injective(diameter, options, [&](const RuleTable& rule) { out.push_back(rule); });
    return out;
}

}  // namespace revca
