// revca: command-line front end for pattern generation, rule induction,
// injectivity checks, exhaustive sweeps and simulation.
//
// Exit codes: 0 ok / injective, 1 not injective (verify), 2 usage,
// 3 validation, 4 internal invariant breach.

#include "revca/catalog.hpp"
#include "revca/ca_engine.hpp"
#include "revca/injectivity.hpp"
#include "revca/pattern.hpp"
#include "revca/rule_table.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace revca;

namespace {

constexpr int kOk = 0;
constexpr int kNotInjective = 1;
constexpr int kUsage = 2;
constexpr int kValidation = 3;
constexpr int kBreach = 4;

constexpr int kVerifyPeriod = 12;

struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

std::vector<std::string> read_lines(const std::string& source) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (source != "-") {
        file.open(source);
        if (!file) fail(kUsage, "cannot open " + source);
        in = &file;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(*in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(first, last - first + 1));
    }
    return lines;
}

PatternString parse_pattern(const std::string& text) {
    try {
        return PatternString::parse(text);
    } catch (const PatternError& e) {
        fail(kValidation, e.what());
    }
}

MixtureSet parse_mixture(const std::vector<std::string>& texts) {
    std::vector<PatternString> patterns;
    for (const auto& t : texts) patterns.push_back(parse_pattern(t));
    try {
        return build_mixture(std::move(patterns));
    } catch (const MixtureError& e) {
        fail(kValidation, e.what());
    } catch (const PatternError& e) {
        fail(kValidation, e.what());
    }
}

// --- gen-patterns / gen-extended / counts ---------------------------------

struct GenPatternsArgs {
    std::optional<int> diameter, left, right;
};

int gen_patterns(const GenPatternsArgs& a) {
    std::vector<PatternString> out;
    if (a.left || a.right) {
        if (!a.left || !a.right) fail(kUsage, "--left and --right must be given together");
        if (*a.left < 0 || *a.right < 0) fail(kUsage, "radii must be non-negative");
        if (a.diameter && *a.diameter != *a.left + *a.right + 1)
            fail(kUsage, "--diameter disagrees with --left + --right + 1");
        if (*a.left + *a.right + 1 > 32) fail(kUsage, "diameter above 32");
        out = generate_injective_patterns(*a.left, *a.right);
    } else if (a.diameter) {
        if (*a.diameter < 1 || *a.diameter > 32) fail(kUsage, "diameter must be in 1..32");
        out = generate_all_patterns(*a.diameter);
    } else {
        fail(kUsage, "gen-patterns needs --diameter or --left/--right");
    }
    for (const auto& p : out) std::cout << p.to_string() << '\n';
    std::cout << "# count " << out.size() << '\n';
    return kOk;
}

int gen_extended(int diameter) {
    if (diameter < 1 || diameter > 32) fail(kUsage, "diameter must be in 1..32");
    const auto out = enumerate_extended(diameter);
    for (const auto& p : out) std::cout << p.to_string() << '\n';
    std::cout << "# count " << out.size() << '\n';
    return kOk;
}

int counts(int max_diameter, bool as_json) {
    if (max_diameter < 3 || max_diameter > 12) fail(kUsage, "--max must be in 3..12");
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    if (!as_json) std::cout << "N\tpatterns\textended\n";
    for (int n = 3; n <= max_diameter; ++n) {
        const auto patterns = generate_all_patterns(n).size();
        const auto extended = enumerate_extended(n).size();
        if (as_json)
            rows.push_back({{"diameter", n}, {"patterns", patterns}, {"extended", extended}});
        else
            std::cout << n << '\t' << patterns << '\t' << extended << '\n';
    }
    if (as_json) std::cout << rows.dump() << '\n';
    return kOk;
}

// --- induce ----------------------------------------------------------------

struct InduceArgs {
    std::vector<std::string> patterns;
    std::string mixture_file;
    std::string each;
    bool verify = false;
    std::string catalog;
};

CatalogEntry induce_entry(const MixtureSet& mixture, bool verify) {
    RuleTable rule = induce(mixture);
    std::vector<std::string> provenance;
    for (const auto& m : mixture.members()) provenance.push_back(m.to_string());
    CatalogEntry entry = CatalogEntry::from_rule(rule, provenance);
    if (!verify) return entry;

    std::string joined;
    for (const auto& p : provenance) joined += (joined.empty() ? "" : " ") + p;
    const auto verdict = debruijn_injective(rule);
    if (!verdict.injective) {
        const auto& [a, b] = *verdict.witness;
        fail(kBreach, "INTERNAL ERROR: rule induced by {" + joined + "} is not injective; witness " + a.to_string() +
                          " / " + b.to_string());
    }
    entry.verified_debruijn = true;
    for (int n = 1; n <= kVerifyPeriod; ++n) {
        if (!periodic_bijective(rule, n) || !check_involution(rule, n))
            fail(kBreach, "INTERNAL ERROR: rule induced by {" + joined +
                              "} is not an involution on period " + std::to_string(n));
        entry.verified_periodic_to = n;
    }
    return entry;
}

void emit(CatalogEntry entry, const std::string& catalog) {
    std::cout << to_json(entry).dump() << '\n';
    if (!catalog.empty()) {
        entry.created_at = utc_timestamp();
        append_catalog(catalog, entry);
    }
}

int induce_cmd(const InduceArgs& a) {
    const int sources = !a.patterns.empty() + !a.mixture_file.empty() + !a.each.empty();
    if (sources != 1) fail(kUsage, "give exactly one of: patterns, --mixture FILE, --each FILE");

    if (!a.each.empty()) {
        for (const auto& line : read_lines(a.each)) emit(induce_entry(parse_mixture({line}), a.verify), a.catalog);
        return kOk;
    }
    const auto texts = a.patterns.empty() ? read_lines(a.mixture_file) : a.patterns;
    emit(induce_entry(parse_mixture(texts), a.verify), a.catalog);
    return kOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
    int diameter = 0;
    std::string wolfram;
    std::optional<int> anchor;
    int max_period = 10;
};

RuleTable rule_from_args(int diameter, const std::string& wolfram, std::optional<int> anchor) {
    if (diameter < 1 || diameter > kMaxRuleDiameter)
        fail(kUsage, "diameter must be in 1.." + std::to_string(kMaxRuleDiameter));
    if (anchor && (*anchor < 0 || *anchor >= diameter)) fail(kUsage, "anchor out of range");
    try {
        return from_wolfram(diameter, WolframNumber::from_decimal(wolfram), anchor.value_or(-1));
    } catch (const RuleError& e) {
        fail(kUsage, e.what());
    }
}

int verify_cmd(const VerifyArgs& a) {
    if (a.diameter > kMaxOracleDiameter)
        fail(kUsage, "verify supports diameters up to " + std::to_string(kMaxOracleDiameter));
    if (a.max_period < 0 || a.max_period > kDefaultExhaustiveBound)
        fail(kUsage, "--max-period must be in 0.." + std::to_string(kDefaultExhaustiveBound));
    const RuleTable rule = rule_from_args(a.diameter, a.wolfram, a.anchor);
    const auto verdict = debruijn_injective(rule);

    std::cout << "diameter: " << rule.diameter() << '\n'
              << "anchor: " << rule.anchor() << '\n'
              << "wolfram_decimal: " << to_wolfram(rule).to_decimal() << '\n'
              << "table_hex: " << to_table_hex(rule) << '\n'
              << "verdict: " << (verdict.injective ? "Injective" : "NotInjective") << '\n';
    if (verdict.witness) {
        const auto& [x, y] = *verdict.witness;
        std::cout << "witness: " << x.to_string() << " " << y.to_string() << " -> " << step(rule, x).to_string()
                  << '\n';
    }
    std::cout << "classification: " << to_string(classify_trivial(rule)) << '\n'
              << "balanced: " << (is_balanced(rule) ? "true" : "false") << '\n';

    if (a.max_period > 0) {
        std::optional<int> first_collision;
        for (int n = 1; n <= a.max_period && !first_collision; ++n)
            if (!periodic_bijective(rule, n)) first_collision = n;
        if (first_collision)
            std::cout << "periodic: collision at n=" << *first_collision << '\n';
        else
            std::cout << "periodic: bijective for n=1.." << a.max_period << '\n';
        if ((verdict.injective && first_collision) || !cross_validate(rule, a.max_period))
            fail(kBreach, "INTERNAL ERROR: de Bruijn verdict contradicts periodic check");
    }
    return verdict.injective ? kOk : kNotInjective;
}

// --- enumerate -------------------------------------------------------------

struct EnumerateArgs {
    int diameter = 0;
    bool exclude_trivial = false;
    bool allow_long = false;
    bool quiescent = false;
    std::string checkpoint;
};

int enumerate_cmd(const EnumerateArgs& a) {
    const SweepOptions options{
        .exclude_trivial = a.exclude_trivial, .allow_long = a.allow_long, .quiescent_only = a.quiescent};
    try {
        check_sweep_allowed(a.diameter, options);
    } catch (const SweepRefused& e) {
        fail(kUsage, e.what());
    }
    const auto print = [](const RuleTable& rule) {
        CatalogEntry e = CatalogEntry::from_rule(rule, {"exhaustive"});
        e.verified_debruijn = true;
        std::cout << to_json(e).dump() << '\n' << std::flush;
    };
    if (a.checkpoint.empty()) {
        sweep_injective(a.diameter, options, print);
    } else {
        const std::filesystem::path dir = a.checkpoint;
        std::filesystem::create_directories(dir);
        resumable_sweep(a.diameter, options, {dir / "progress.json", dir / "results.jsonl"}, print);
    }
    return kOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
    std::optional<int> diameter;
    std::string wolfram;
    std::vector<std::string> patterns;
    std::optional<int> anchor;
    std::string init;
    int steps = 1;
    std::string pbm;
};

int simulate_cmd(const SimulateArgs& a) {
    if (a.wolfram.empty() == a.patterns.empty()) fail(kUsage, "give exactly one of --wolfram or --pattern");
    RuleTable rule = [&] {
        if (!a.wolfram.empty()) {
            if (!a.diameter) fail(kUsage, "--wolfram needs --diameter");
            return rule_from_args(*a.diameter, a.wolfram, a.anchor);
        }
        const MixtureSet mixture = parse_mixture(a.patterns);
        if (a.diameter && *a.diameter != mixture.diameter())
            fail(kValidation, "--diameter " + std::to_string(*a.diameter) + " does not match pattern diameter " +
                                  std::to_string(mixture.diameter()));
        RuleTable r = induce(mixture);
        if (a.anchor) {
            if (*a.anchor < 0 || *a.anchor >= r.diameter()) fail(kUsage, "anchor out of range");
            r = r.with_anchor(*a.anchor);
        }
        return r;
    }();
    if (a.init.empty()) fail(kUsage, "--init must be a non-empty binary string");
    if (a.steps < 0) fail(kUsage, "--steps must be non-negative");

    Configuration c = [&] {
        try {
            return Configuration::parse(a.init);
        } catch (const std::invalid_argument& e) {
            fail(kUsage, e.what());
        }
    }();
    std::vector<Configuration> history{c};
    for (int t = 0; t < a.steps; ++t) history.push_back(step(rule, history.back()));

    if (a.pbm.empty()) {
        for (const auto& row : history) std::cout << row.to_string() << '\n';
    } else {
        std::ofstream out(a.pbm);
        out << to_pbm(history);
        if (!out) fail(kUsage, "cannot write " + a.pbm);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reversible one-dimensional cellular automata from injective patterns"};
    app.require_subcommand(1);

    GenPatternsArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-patterns", "List injective patterns");
    gen_cmd->add_option("-d,--diameter", gen.diameter, "Pattern diameter (all radii)");
    gen_cmd->add_option("--left", gen.left, "Left radius");
    gen_cmd->add_option("--right", gen.right, "Right radius");

    int ext_diameter = 0;
    auto* ext_cmd = app.add_subcommand("gen-extended", "List extended patterns");
    ext_cmd->add_option("-d,--diameter", ext_diameter, "Diameter")->required();

    int counts_max = 10;
    bool counts_json = false;
    auto* counts_cmd = app.add_subcommand("counts", "Pattern and extended-pattern counts per diameter");
    counts_cmd->add_option("--max", counts_max, "Largest diameter (3..12)")->capture_default_str();
    counts_cmd->add_flag("--json", counts_json, "Emit JSON");

    InduceArgs ind;
    auto* induce_sub = app.add_subcommand("induce", "Induce a rule from patterns or a mixture");
    induce_sub->add_option("patterns", ind.patterns, "Pattern texts forming one mixture");
    induce_sub->add_option("--mixture", ind.mixture_file, "File with one pattern per line");
    induce_sub->add_option("--each", ind.each, "Induce one rule per line of FILE ('-' for stdin)");
    induce_sub->add_flag("--verify", ind.verify, "Check injectivity and involution up to period 12");
    induce_sub->add_option("--catalog", ind.catalog, "Append entries to this JSONL catalog");

    VerifyArgs ver;
    auto* verify_sub = app.add_subcommand("verify", "Decide injectivity of a rule");
    verify_sub->add_option("-d,--diameter", ver.diameter, "Diameter")->required();
    verify_sub->add_option("-w,--wolfram", ver.wolfram, "Wolfram number (decimal)")->required();
    verify_sub->add_option("--anchor", ver.anchor, "Output cell within the window");
    verify_sub->add_option("--max-period", ver.max_period, "Cross-check periods 1..N")->capture_default_str();

    EnumerateArgs en;
    auto* enum_sub = app.add_subcommand("enumerate", "Exhaustively list injective rules");
    enum_sub->add_option("-d,--diameter", en.diameter, "Diameter")->required();
    enum_sub->add_flag("--exclude-trivial", en.exclude_trivial, "Drop projections and complements");
    enum_sub->add_flag("--allow-long", en.allow_long, "Permit the long diameter-5 sweep");
    enum_sub->add_flag("--quiescent", en.quiescent, "Keep only tables with f(0...0) = 0");
    enum_sub->add_option("--checkpoint", en.checkpoint, "Directory for resumable progress");

    SimulateArgs sim;
    auto* sim_sub = app.add_subcommand("simulate", "Run a rule on a cyclic configuration");
    sim_sub->add_option("-d,--diameter", sim.diameter, "Diameter");
    sim_sub->add_option("-w,--wolfram", sim.wolfram, "Wolfram number (decimal)");
    sim_sub->add_option("--pattern", sim.patterns, "Pattern (repeat for a mixture)");
    sim_sub->add_option("--anchor", sim.anchor, "Output cell within the window");
    sim_sub->add_option("--init", sim.init, "Initial configuration")->required();
    sim_sub->add_option("--steps", sim.steps, "Number of steps")->capture_default_str();
    sim_sub->add_option("--pbm", sim.pbm, "Write a PBM raster instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*gen_cmd) return gen_patterns(gen);
        if (*ext_cmd) return gen_extended(ext_diameter);
        if (*counts_cmd) return counts(counts_max, counts_json);
        if (*induce_sub) return induce_cmd(ind);
        if (*verify_sub) return verify_cmd(ver);
        if (*enum_sub) return enumerate_cmd(en);
        if (*sim_sub) return simulate_cmd(sim);
    } catch (const Failure& f) {
        std::cout.flush();
        std::cerr << "revca: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cout.flush();
        std::cerr << "revca: INTERNAL ERROR: " << e.what() << '\n';
        return kBreach;
    }
    return kUsage;
}
