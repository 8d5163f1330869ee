// wstar: forest exploration, set emission and the verification suites.
//
// Exit status: 0 success, 1 a failed check or a negative answer, 2 a
// configuration error.

#include "wstar/wstar.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace wstar;

struct RunConfig {
    std::string alpha = "1";
    std::optional<std::string> beta;
    std::size_t depth = 3;
    std::size_t branch = 2;
    std::string format = "text";
    std::size_t label_bound = 20;
    std::uint64_t coords = 64;
    std::uint64_t terms = 256;
    std::uint64_t seed = 1;
    std::size_t max_n = 6;
    std::size_t count = 50;
    std::size_t targets = 20;
    std::size_t samples = 1000;
    std::string generator;
    std::string addr;
    std::string label;
    std::string vec;
    bool brute = false;
    // Whether the value came from a flag, the environment or a config file.
    bool alpha_set = false;
    bool depth_set = false;
    bool branch_set = false;
    bool label_bound_set = false;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Ordinal ordinal_arg(const std::string& flag, const std::string& text) {
    try {
        return parse_ordinal(text);
    } catch (const ordinal_parse_error& e) {
        throw ConfigError("--" + flag + " '" + text + "': " + e.what());
    }
}

Forest forest_arg(const std::string& text) {
    try {
        return Forest::parse(text);
    } catch (const ordinal_parse_error& e) {
        throw ConfigError("--alpha '" + text + "': " + e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError("--alpha '" + text + "': " + e.what());
    }
}

Ordinal beta_arg(const RunConfig& c) {
    if (!c.beta) throw ConfigError("--beta is required");
    return ordinal_arg("beta", *c.beta);
}

VertexAddr addr_arg(const Forest& f, const std::string& text) {
    VertexAddr a;
    try {
        a = VertexAddr::parse(text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--addr: ") + e.what());
    }
    if (!f.contains(a)) throw ConfigError("--addr '" + text + "' is not a vertex of " + f.name());
    return a;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path + "': " + e.what());
    }
}

void print_forest(const FiniteForest& t, const std::string& format) {
    if (format == "json") {
        std::cout << to_json(t).dump(2) << "\n";
    } else if (format == "dot") {
        if (t.size() >= dot_vertex_limit) {
            std::cerr << "note: " << t.size() << " vertices exceed the DOT limit of " << dot_vertex_limit
                      << "; writing JSON instead\n";
            std::cout << to_json(t).dump(2) << "\n";
        } else {
            std::cout << to_dot(t);
        }
    } else {
        std::cout << to_text(t);
    }
}

int cmd_forest(const RunConfig& c, const std::string& action) {
    const Forest f = forest_arg(c.alpha);
    FiniteForest t = truncate(f, c.depth, c.branch);
    if (action == "derive") {
        const Ordinal beta = beta_arg(c);
        if (c.brute) {
            const std::uint64_t steps = finite_stage(beta, c.branch);
            t = brute_derive(t, steps);
            t.beta = to_text(beta);
        } else {
            t = restrict_to_derived(t, f, beta);
        }
    }
    print_forest(t, c.format);
    return 0;
}

int cmd_label(const RunConfig& c) {
    const Forest f = forest_arg(c.alpha);
    const VertexAddr a = addr_arg(f, c.addr);
    std::cout << LabelMap(f).label(a) << "\n";
    return 0;
}

int cmd_unlabel(const RunConfig& c) {
    const Forest f = forest_arg(c.alpha);
    Natural n;
    try {
        n = Natural(c.label);
    } catch (const std::exception&) {
        throw ConfigError("--label '" + c.label + "' is not a decimal integer");
    }
    if (n < 1) throw ConfigError("--label must be >= 1");
    auto a = LabelMap(f).unlabel(n);
    if (!a) {
        std::cout << "none\n";
        return 1;
    }
    std::cout << a->text() << "\n";
    return 0;
}

int cmd_sets(const RunConfig& c, const std::string& action) {
    const Forest f = forest_arg(c.alpha);
    const Ordinal beta = c.beta ? beta_arg(c) : Ordinal{};
    LabelMap lm(f);
    if (action == "member") {
        if (c.vec.empty()) throw ConfigError("--vec is required");
        RationalVec w;
        try {
            w = vec_from_json(nlohmann::json::parse(c.vec));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("--vec: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--vec: ") + e.what());
        }
        const bool in = in_X_beta(lm, beta, w);
        std::cout << (in ? "true" : "false") << "\n";
        return in ? 0 : 1;
    }
    auto xs = emit_X(lm, beta, Natural(c.label_bound));
    if (c.format == "json") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& p : xs) {
            nlohmann::ordered_json e;
            e["vertex"] = p.vertex.text();
            e["vector"] = to_json(p.vec);
            arr.push_back(e);
        }
        nlohmann::ordered_json out;
        out["alpha"] = f.name();
        out["beta"] = to_text(beta);
        out["label_bound"] = c.label_bound;
        out["count"] = xs.size();
        out["vectors"] = arr;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& p : xs) std::cout << p.vec.text() << "\t" << p.vertex.text() << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& c, const std::string& suite) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) throw ConfigError("unknown suite '" + suite + "'");
    SuiteConfig s;
    s.alphas = SuiteConfig::default_alphas();
    s.grid = SuiteConfig::default_grid();
    s.max_n = c.max_n;
    if (c.branch_set) s.branches = {c.branch};
    if (c.depth_set) s.depth = c.depth;
    if (c.label_bound_set) s.label_bound = c.label_bound;
    s.coords = c.coords;
    s.terms = c.terms;
    s.seed = c.seed;
    s.count = c.count;
    s.targets = c.targets;
    s.samples = c.samples;
    if (!c.generator.empty()) {
        s.generator = read_json_file(c.generator);
        try {
            generator_from_json(*s.generator);
        } catch (const std::exception& e) {
            throw ConfigError("'" + c.generator + "': " + e.what());
        }
    }
    if (c.alpha_set) {
        const Ordinal a = ordinal_arg("alpha", c.alpha);
        s.alphas = {a};
        if (c.beta) {
            const Ordinal b = beta_arg(c);
            if (!(b < a)) throw ConfigError("--beta must be smaller than --alpha");
            s.grid = {{a, b}};
        } else {
            std::vector<GridCell> cells;
            for (const auto& g : s.grid)
                if (g.alpha == a) cells.push_back(g);
            if (cells.empty() && a.kind() == OrdinalKind::successor) cells.push_back({a, predecessor(a)});
            s.grid = cells;
        }
        if (s.grid.empty() && (suite == "witness" || suite == "separation"))
            throw ConfigError("no (alpha, beta) cell for alpha = " + c.alpha + "; pass --beta");
    }
    SuiteReport r = run_suite(suite, s);
    std::cout << r.json().dump(2) << "\n";
    return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ordinal-indexed forests, their derived sets in l1, and checks of the limit and separation arguments."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file; flags override it", false);
    app.get_config_formatter_base()->arrayBounds('[', ']');

    RunConfig c;
    auto env = [](CLI::Option* o, const char* name) { return o->envname(std::string("WSTAR_") + name); };
    auto* alpha = env(app.add_option("--alpha", c.alpha, "ordinal, or copies(t) for omega copies of T_t"), "ALPHA");
    env(app.add_option("--beta", c.beta, "derivation stage"), "BETA");
    auto* depth = env(app.add_option("--depth", c.depth, "truncation depth")->check(CLI::PositiveNumber), "DEPTH");
    auto* branch = env(app.add_option("--branch", c.branch, "truncation branching")->check(CLI::PositiveNumber), "BRANCH");
    env(app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"dot", "json", "text"})), "FORMAT");
    auto* lb = env(app.add_option("--label-bound", c.label_bound, "largest label in emitted supports")->check(CLI::PositiveNumber),
                   "LABEL_BOUND");
    env(app.add_option("--coords", c.coords, "coordinates checked for convergence")->check(CLI::PositiveNumber), "COORDS");
    env(app.add_option("--terms", c.terms, "sequence terms checked")->check(CLI::PositiveNumber), "TERMS");
    env(app.add_option("--seed", c.seed, "seed for sampled generators"), "SEED");
    env(app.add_option("--max-n", c.max_n, "largest n for finite forests")->check(CLI::PositiveNumber), "MAX_N");
    env(app.add_option("--count", c.count, "number of random generators")->check(CLI::PositiveNumber), "COUNT");
    env(app.add_option("--targets", c.targets, "targets per grid cell")->check(CLI::PositiveNumber), "TARGETS");
    env(app.add_option("--samples", c.samples, "round-trip sample size")->check(CLI::PositiveNumber), "SAMPLES");
    env(app.add_option("--generator", c.generator, "generator JSON file"), "GENERATOR");
    app.add_option("--addr", c.addr, "vertex address such as R.3.R.1");
    app.add_option("--label", c.label, "vertex label");
    app.add_option("--vec", c.vec, "vector as JSON, e.g. {\"1\":\"1/1\"}");
    app.add_flag("--brute", c.brute, "derive by repeated leaf removal");

    std::string action, suite;
    auto* forest = app.add_subcommand("forest", "show or derive a truncated forest");
    forest->add_option("action", action)->required()->check(CLI::IsMember({"show", "derive"}));
    auto* label = app.add_subcommand("label", "label of --addr");
    auto* unlabel = app.add_subcommand("unlabel", "vertex with label --label");
    auto* sets = app.add_subcommand("sets", "emit X^beta or test membership of --vec");
    sets->add_option("action", action)->required()->check(CLI::IsMember({"emit", "member"}));
    auto* verify = app.add_subcommand("verify", "run a verification suite and print a JSON report");
    verify->add_option("suite", suite)->required()->check(CLI::IsMember(suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    c.alpha_set = alpha->count() > 0;
    c.depth_set = depth->count() > 0;
    c.branch_set = branch->count() > 0;
    c.label_bound_set = lb->count() > 0;

    try {
        if (*forest) return cmd_forest(c, action);
        if (*label) return cmd_label(c);
        if (*unlabel) return cmd_unlabel(c);
        if (*sets) return cmd_sets(c, action);
        if (*verify) return cmd_verify(c, suite);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
