#include "tcentroid/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcentroid/centroid.hpp"
#include "tcentroid/errors.hpp"
#include "tcentroid/figure.hpp"
#include "tcentroid/format.hpp"
#include "tcentroid/parallel.hpp"
#include "tcentroid/quadrature.hpp"
#include "tcentroid/sampler.hpp"
#include "tcentroid/verification.hpp"

namespace tcentroid::cli {

namespace {

using json = nlohmann::ordered_json;
namespace ver = verification;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    double mu = 0.0;
    double sigma = 1.0;
    double lower = -1.0;
    double upper = 1.0;
    double shift = 0.0;
    std::string method = "closed_form";
    std::size_t n = 1'000'000;
    std::optional<std::uint64_t> seed;
    std::string format = "text";
    std::string output;
    std::string config;
    std::vector<std::string> checks{"all"};
    std::string mode = "grid";
    std::optional<std::size_t> n_random;

    GaussianParams params() const { return {mu, sigma}; }
    ExcludedInterval hole() const { return {lower, upper}; }
};

// Command-line options that a --config file may fill in. A value given on
// the command line wins over the file.
struct Registry {
    std::map<std::string, CLI::Option*> options;

    bool given(const std::string& key) const {
        auto it = options.find(key);
        return it != options.end() && it->second->count() > 0;
    }
};

void add_model_flags(CLI::App& sub, Options& o, Registry& reg) {
    reg.options["mu"] = sub.add_option("--mu", o.mu, "Location of the untruncated Gaussian")
                            ->capture_default_str();
    reg.options["sigma"] =
        sub.add_option("--sigma", o.sigma,
                       "Scale (standard deviation, not variance) of the Gaussian")
            ->capture_default_str();
    reg.options["lower"] =
        sub.add_option("--lower", o.lower, "Lower end of the excluded interval")
            ->capture_default_str();
    reg.options["upper"] =
        sub.add_option("--upper", o.upper, "Upper end of the excluded interval")
            ->capture_default_str();
    reg.options["shift"] =
        sub.add_option("--shift", o.shift, "Shift h applied to the mean")->capture_default_str();
}

void add_seed(CLI::App& sub, Options& o, Registry& reg) {
    reg.options["seed"] = sub.add_option("--seed", o.seed, "Seed for randomized work (required)");
}

void add_output_flags(CLI::App& sub, Options& o, Registry& reg, bool with_format) {
    if (with_format) {
        reg.options["format"] = sub.add_option("--format", o.format, "Output format")
                                    ->check(CLI::IsMember({"json", "csv", "text"}))
                                    ->capture_default_str();
    }
    sub.add_option("--output", o.output, "Write results to this file instead of stdout");
    sub.add_option("--config", o.config,
                   "JSON file with inputs (e.g. earlier --format json output)")
        ->check(CLI::ExistingFile);
}

// Copies inputs from a config document into `o` for every key not given on
// the command line.
void apply_config(const std::string& path, const std::string& command, Options& o,
                  const Registry& reg) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file " + path);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw UsageError("config file must hold a JSON object");
    }
    if (doc.contains("command") && doc["command"] != command) {
        throw UsageError("config file is for command '" + doc["command"].dump() + "', not '" +
                         command + "'");
    }
    const auto take = [&](const std::string& key, const json* node, auto& target) {
        if (node == nullptr || !reg.options.contains(key) || reg.given(key)) {
            return;
        }
        try {
            node->get_to(target);
        } catch (const json::exception&) {
            throw UsageError("config field '" + key + "' has the wrong type");
        }
    };
    const auto field = [&](std::initializer_list<const char*> path_keys) -> const json* {
        const json* node = &doc;
        for (const char* k : path_keys) {
            if (!node->is_object() || !node->contains(k)) {
                return nullptr;
            }
            node = &(*node)[k];
        }
        return node;
    };
    take("mu", field({"params", "mu"}), o.mu);
    take("sigma", field({"params", "sigma"}), o.sigma);
    take("lower", field({"hole", "lower"}), o.lower);
    take("upper", field({"hole", "upper"}), o.upper);
    take("shift", field({"shift"}), o.shift);
    take("method", field({"method"}), o.method);
    take("n", field({"n"}), o.n);
    take("checks", field({"checks"}), o.checks);
    take("mode", field({"mode"}), o.mode);
    if (const json* s = field({"seed"}); s != nullptr && !reg.given("seed")) {
        std::uint64_t v = 0;
        take("seed", s, v);
        if (reg.options.contains("seed")) {
            o.seed = v;
        }
    }
    if (const json* nr = field({"n_random"}); nr != nullptr && !reg.given("n_random")) {
        std::size_t v = 0;
        take("n_random", nr, v);
        if (reg.options.contains("n_random")) {
            o.n_random = v;
        }
    }
}

void require_finite_flags(const Options& o) {
    const std::pair<const char*, double> flags[] = {
        {"--mu", o.mu}, {"--sigma", o.sigma}, {"--lower", o.lower},
        {"--upper", o.upper}, {"--shift", o.shift}};
    for (const auto& [name, v] : flags) {
        if (!std::isfinite(v)) {
            throw UsageError(std::string(name) + " must be a finite number");
        }
    }
}

std::uint64_t require_seed(const Options& o, const std::string& why) {
    if (!o.seed) {
        throw UsageError("--seed is required for " + why);
    }
    return *o.seed;
}

json params_json(const Options& o) {
    return {{"params", {{"mu", o.mu}, {"sigma", o.sigma}}},
            {"hole", {{"lower", o.lower}, {"upper", o.upper}}},
            {"shift", o.shift}};
}

std::vector<std::string> warning_names(const std::vector<Warning>& ws) {
    std::vector<std::string> out;
    for (Warning w : ws) {
        out.emplace_back(to_string(w));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (const std::string& p : parts) {
        if (!out.empty()) {
            out += sep;
        }
        out += p;
    }
    return out;
}

// ---- centroid and compare ----------------------------------------------

struct Evaluation {
    Method method = Method::closed_form;
    double value = 0.0;
    std::optional<double> support_mass;
    std::optional<double> std_error;
    std::vector<Warning> warnings;
};

std::vector<Method> requested_methods(const std::string& name) {
    if (name == "all") {
        return {Method::closed_form, Method::quadrature, Method::monte_carlo};
    }
    if (name == "quadrature") {
        return {Method::quadrature};
    }
    if (name == "monte_carlo") {
        return {Method::monte_carlo};
    }
    if (name == "closed_form") {
        return {Method::closed_form};
    }
    throw UsageError("unknown method '" + name + "'");
}

bool uses_monte_carlo(const std::vector<Method>& methods) {
    return std::find(methods.begin(), methods.end(), Method::monte_carlo) != methods.end();
}

Evaluation evaluate(Method method, const Options& o, double shift) {
    Evaluation e;
    e.method = method;
    switch (method) {
        case Method::closed_form:
        case Method::quadrature: {
            const CentroidResult r = method == Method::closed_form
                                         ? centroid_exterior(o.params(), o.hole(), shift)
                                         : quadrature::centroid_quadrature(o.params(), o.hole(), shift);
            e.value = r.value;
            e.support_mass = r.support_mass;
            e.warnings = r.warnings;
            break;
        }
        case Method::monte_carlo: {
            const auto batch = sampler::sample_exterior(o.params(), o.hole(), shift, o.n, *o.seed,
                                                        Execution::parallel);
            const auto est = sampler::monte_carlo_centroid(batch);
            e.value = est.mean;
            e.std_error = est.std_error;
            break;
        }
    }
    return e;
}

json evaluation_json(const Evaluation& e) {
    json j{{"method", to_string(e.method)}, {"value", e.value}};
    j["support_mass"] = e.support_mass ? json(*e.support_mass) : json(nullptr);
    j["std_error"] = e.std_error ? json(*e.std_error) : json(nullptr);
    j["warnings"] = warning_names(e.warnings);
    return j;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json inputs_json(const std::string& command, const Options& o, bool monte_carlo) {
    json j{{"command", command}};
    j.update(params_json(o));
    j["method"] = o.method;
    if (monte_carlo) {
        j["n"] = o.n;
        j["seed"] = *o.seed;
    }
    return j;
}

void run_centroid(const Options& o, std::ostream& out) {
    const auto methods = requested_methods(o.method);
    if (uses_monte_carlo(methods)) {
        require_seed(o, "monte_carlo");
    }
    std::vector<Evaluation> results;
    for (Method m : methods) {
        results.push_back(evaluate(m, o, o.shift));
    }
    const bool side_by_side = results.size() > 1;
    const double reference = results.front().value;

    if (o.format == "json") {
        json j = inputs_json("centroid", o, uses_monte_carlo(methods));
        j["results"] = json::array();
        for (const Evaluation& e : results) {
            j["results"].push_back(evaluation_json(e));
        }
        if (side_by_side) {
            j["discrepancies"] = json::array();
            for (std::size_t i = 1; i < results.size(); ++i) {
                json d{{"method", to_string(results[i].method)},
                       {"minus_closed_form", results[i].value - reference}};
                if (results[i].std_error) {
                    d["standard_errors"] = (results[i].value - reference) / *results[i].std_error;
                }
                j["discrepancies"].push_back(d);
            }
        }
        out << j.dump(2) << '\n';
        return;
    }
    if (o.format == "csv") {
        out << "method,value,support_mass,std_error,minus_closed_form,warnings\n";
        for (const Evaluation& e : results) {
            out << to_string(e.method) << ',' << format_double(e.value) << ','
                << optional_cell(e.support_mass) << ',' << optional_cell(e.std_error) << ','
                << (side_by_side ? format_double(e.value - reference) : "") << ','
                << join(warning_names(e.warnings), ';') << '\n';
        }
        return;
    }
    out << "centroid of N(" << format_double(o.mu) << ", sigma=" << format_double(o.sigma)
        << ") shifted by " << format_double(o.shift) << ", outside (" << format_double(o.lower)
        << ", " << format_double(o.upper) << ")\n";
    for (const Evaluation& e : results) {
        out << "  " << to_string(e.method) << ": " << format_double(e.value);
        if (e.std_error) {
            out << " +/- " << format_double(*e.std_error) << " (n=" << o.n << ")";
        }
        if (e.support_mass) {
            out << "  support_mass " << format_double(*e.support_mass);
        }
        for (Warning w : e.warnings) {
            out << "  [" << to_string(w) << "]";
        }
        out << '\n';
    }
    if (side_by_side) {
        for (std::size_t i = 1; i < results.size(); ++i) {
            out << "  " << to_string(results[i].method)
                << " - closed_form: " << format_double(results[i].value - reference) << '\n';
        }
    }
}

void run_compare(const Options& o, std::ostream& out) {
    const auto methods = requested_methods(o.method);
    if (uses_monte_carlo(methods)) {
        require_seed(o, "monte_carlo");
    }
    struct Pair {
        Evaluation base;
        Evaluation shifted;
        double delta;
    };
    std::vector<Pair> rows;
    for (Method m : methods) {
        Evaluation base = evaluate(m, o, 0.0);
        Evaluation shifted = evaluate(m, o, o.shift);
        const double delta = shifted.value - base.value;
        rows.push_back({std::move(base), std::move(shifted), delta});
    }

    if (o.format == "json") {
        json j = inputs_json("compare", o, uses_monte_carlo(methods));
        j["results"] = json::array();
        for (const Pair& p : rows) {
            j["results"].push_back({{"method", to_string(p.base.method)},
                                    {"base", evaluation_json(p.base)},
                                    {"shifted", evaluation_json(p.shifted)},
                                    {"delta", p.delta}});
        }
        out << j.dump(2) << '\n';
        return;
    }
    if (o.format == "csv") {
        out << "method,base,shifted,shift,delta\n";
        for (const Pair& p : rows) {
            out << to_string(p.base.method) << ',' << format_double(p.base.value) << ','
                << format_double(p.shifted.value) << ',' << format_double(o.shift) << ','
                << format_double(p.delta) << '\n';
        }
        return;
    }
    for (const Pair& p : rows) {
        const char* sign = p.delta > 0.0 ? "positive" : (p.delta < 0.0 ? "negative" : "zero");
        out << to_string(p.base.method) << ": base " << format_double(p.base.value)
            << ", shifted " << format_double(p.shifted.value) << ", delta "
            << format_double(p.delta) << " (" << sign << ")\n";
    }
}

// ---- verify ------------------------------------------------------------

struct NamedReport {
    std::string name;
    ver::VerificationReport report;
};

constexpr std::size_t kDefaultTheoremPoints = 10000;
constexpr std::size_t kDefaultDerivativePoints = 2000;
constexpr std::size_t kDefaultRescalings = 500;
constexpr std::size_t kDefaultEquivariancePoints = 1000;

std::vector<std::string> expand_checks(const std::vector<std::string>& checks) {
    static const std::vector<std::string> all{"monotonicity", "theorem",    "omega",
                                              "bounds",       "derivative", "oracle",
                                              "equivariance"};
    std::vector<std::string> out;
    for (const std::string& c : checks) {
        if (c == "all") {
            out.insert(out.end(), all.begin(), all.end());
        } else if (std::find(all.begin(), all.end(), c) != all.end()) {
            out.push_back(c);
        } else {
            throw UsageError("unknown check '" + c + "'");
        }
    }
    std::vector<std::string> unique;
    for (const std::string& c : out) {
        if (std::find(unique.begin(), unique.end(), c) == unique.end()) {
            unique.push_back(c);
        }
    }
    return unique;
}

NamedReport run_check(const std::string& name, const Options& o) {
    const bool random = o.mode == "random";
    const auto points = [&](std::size_t fallback) { return o.n_random.value_or(fallback); };
    const auto seed = [&] { return require_seed(o, "verify check '" + name + "'"); };
    const Execution exec = Execution::parallel;

    if (name == "monotonicity" && !random) {
        return {name, ver::verify_monotonicity(ver::monotonicity_grid_spec(), exec)};
    }
    if (name == "monotonicity" || name == "theorem") {
        return {name, ver::verify_monotonicity(
                          ver::theorem_random_spec(points(kDefaultTheoremPoints), seed()), exec)};
    }
    if (name == "omega") {
        return {name, ver::verify_omega_positive(ver::omega_grid_spec(), exec)};
    }
    if (name == "bounds") {
        return {name, ver::verify_bounds(ver::bounds_grid_spec(), exec)};
    }
    if (name == "derivative") {
        ver::SweepSpec spec = ver::derivative_grid_spec();
        if (random) {
            spec.mode = ver::SweepMode::random;
            spec.n_random = points(kDefaultDerivativePoints);
            spec.seed = seed();
        }
        return {name, ver::verify_derivative(spec, exec)};
    }
    if (name == "oracle") {
        ver::SweepSpec spec = ver::derivative_grid_spec();
        spec.n_random = points(kDefaultRescalings);
        if (spec.n_random > 0) {
            spec.seed = seed();
        }
        return {name, ver::verify_oracle_equivalence(spec, exec)};
    }
    ver::SweepSpec spec = ver::theorem_random_spec(points(kDefaultEquivariancePoints), seed());
    spec.h_range = {-3.0, 3.0, 1.0};
    return {name, ver::verify_equivariance(spec, exec)};
}

json record_json(const ver::CheckRecord& r) {
    return {{"check", r.check}, {"x1", r.x1},   {"x2", r.x2},        {"h", r.h},
            {"lhs", r.lhs},     {"rhs", r.rhs}, {"margin", r.margin}};
}

bool run_verify(const Options& o, std::ostream& out) {
    if (o.mode != "grid" && o.mode != "random") {
        throw UsageError("--mode must be grid or random");
    }
    const auto names = expand_checks(o.checks);
    std::vector<NamedReport> reports;
    for (const std::string& name : names) {
        reports.push_back(run_check(name, o));
    }
    bool passed = true;
    for (const NamedReport& r : reports) {
        passed = passed && r.report.passed();
    }

    if (o.format == "json") {
        json j{{"command", "verify"}, {"checks", names}, {"mode", o.mode}};
        if (o.n_random) {
            j["n_random"] = *o.n_random;
        }
        if (o.seed) {
            j["seed"] = *o.seed;
        }
        j["passed"] = passed;
        j["reports"] = json::array();
        for (const NamedReport& r : reports) {
            json entry{{"check", r.name},
                       {"checks_run", r.report.checks_run},
                       {"passed", r.report.passed()},
                       {"min_margin", r.report.min_margin},
                       {"untestable", r.report.untestable.size()}};
            entry["violations"] = json::array();
            for (const auto& v : r.report.violations) {
                entry["violations"].push_back(record_json(v));
            }
            entry["tightest"] = json::array();
            for (const auto& t : r.report.tightest) {
                entry["tightest"].push_back(record_json(t));
            }
            j["reports"].push_back(entry);
        }
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::vector<ver::VerificationReport> parts;
        for (const NamedReport& r : reports) {
            parts.push_back(r.report);
        }
        ver::write_report_csv(out, ver::combine(parts));
    } else {
        for (const NamedReport& r : reports) {
            out << (r.report.passed() ? "PASS " : "FAIL ") << r.name << ": "
                << r.report.checks_run << " checks, " << r.report.violations.size()
                << " violations, " << r.report.untestable.size() << " untestable, min_margin "
                << format_double(r.report.min_margin) << '\n';
            for (const auto& t : r.report.tightest) {
                out << "    tightest " << t.check << " at (" << format_double(t.x1) << ", "
                    << format_double(t.x2) << ", " << format_double(t.h) << "): margin "
                    << format_double(t.margin) << '\n';
            }
            for (const auto& v : r.report.violations) {
                out << "    violation " << v.check << " at (" << format_double(v.x1) << ", "
                    << format_double(v.x2) << ", " << format_double(v.h) << "): "
                    << format_double(v.lhs) << " vs " << format_double(v.rhs) << '\n';
            }
        }
        out << (passed ? "all checks passed" : "violations found") << '\n';
    }
    return passed;
}

// ---- sample ------------------------------------------------------------

void run_sample(const Options& o, std::ostream& out) {
    const std::uint64_t seed = require_seed(o, "sample");
    const auto batch =
        sampler::sample_exterior(o.params(), o.hole(), o.shift, o.n, seed, Execution::parallel);
    const bool summarize = batch.values.size() >= 2;
    const sampler::MonteCarloEstimate est =
        summarize ? sampler::monte_carlo_centroid(batch) : sampler::MonteCarloEstimate{};

    if (o.format == "json") {
        json j{{"command", "sample"}};
        j.update(params_json(o));
        j["n"] = o.n;
        j["seed"] = seed;
        j["strategy"] = to_string(batch.strategy);
        j["acceptance_rate"] = batch.acceptance_rate;
        j["mean"] = summarize ? json(est.mean) : json(nullptr);
        j["std_error"] = summarize ? json(est.std_error) : json(nullptr);
        j["values"] = batch.values;
        out << j.dump(2) << '\n';
        return;
    }
    if (o.format == "csv") {
        out << "value\n";
        for (double v : batch.values) {
            out << format_double(v) << '\n';
        }
        return;
    }
    out << o.n << " draws, strategy " << to_string(batch.strategy) << ", acceptance rate "
        << format_double(batch.acceptance_rate) << '\n';
    if (summarize) {
        out << "mean " << format_double(est.mean) << " +/- " << format_double(est.std_error)
            << '\n';
    }
}

// ---- driver ------------------------------------------------------------

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.output, std::ios::binary);
    if (!file || !(file << text) || !file.flush()) {
        throw Error("cannot write " + o.output);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Centroid of a Gaussian conditioned on falling outside an interval", "tcentroid"};
    app.require_subcommand(1);

    Options o;
    std::map<std::string, Registry> registries;

    CLI::App* centroid = app.add_subcommand("centroid", "Conditional mean outside the hole");
    CLI::App* compare = app.add_subcommand("compare", "Centroids at shift 0 and at --shift");
    for (CLI::App* sub : {centroid, compare}) {
        Registry& reg = registries[sub->get_name()];
        add_model_flags(*sub, o, reg);
        reg.options["method"] =
            sub->add_option("--method", o.method, "closed_form, quadrature, monte_carlo or all")
                ->check(CLI::IsMember({"closed_form", "quadrature", "monte_carlo", "all"}))
                ->capture_default_str();
        reg.options["n"] = sub->add_option("--n", o.n, "Monte Carlo sample count")
                               ->check(CLI::PositiveNumber)
                               ->capture_default_str();
        add_seed(*sub, o, reg);
        add_output_flags(*sub, o, reg, true);
    }

    CLI::App* verify = app.add_subcommand("verify", "Property sweeps over the inequalities");
    {
        Registry& reg = registries["verify"];
        reg.options["checks"] =
            verify
                ->add_option("--check", o.checks,
                             "monotonicity, theorem, omega, bounds, derivative, oracle, "
                             "equivariance or all")
                ->delimiter(',')
                ->capture_default_str();
        reg.options["mode"] = verify
                                  ->add_option("--mode", o.mode,
                                               "grid or random (monotonicity and derivative)")
                                  ->check(CLI::IsMember({"grid", "random"}))
                                  ->capture_default_str();
        reg.options["n_random"] =
            verify->add_option("--n-random", o.n_random,
                               "Random points (or oracle rescalings) per randomized check");
        add_seed(*verify, o, reg);
        add_output_flags(*verify, o, reg, true);
    }

    CLI::App* sample = app.add_subcommand("sample", "Draw from the exterior-truncated law");
    {
        Registry& reg = registries["sample"];
        add_model_flags(*sample, o, reg);
        reg.options["n"] =
            sample->add_option("--n", o.n, "Number of draws")->required()->check(CLI::PositiveNumber);
        add_seed(*sample, o, reg);
        add_output_flags(*sample, o, reg, true);
    }

    CLI::App* figure = app.add_subcommand("figure", "Write the figure-1 density CSV");
    figure->add_option("--output", o.output, "CSV path (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    try {
        std::ostringstream buffer;
        bool ok = true;
        if (figure->parsed()) {
            figure::write_figure1_csv(buffer, figure::figure1_data());
        } else {
            const std::string name = app.get_subcommands().front()->get_name();
            if (!o.config.empty()) {
                apply_config(o.config, name, o, registries[name]);
            }
            if (name != "verify") {
                require_finite_flags(o);
            }
            if (name == "centroid") {
                run_centroid(o, buffer);
            } else if (name == "compare") {
                run_compare(o, buffer);
            } else if (name == "verify") {
                ok = run_verify(o, buffer);
            } else {
                run_sample(o, buffer);
            }
        }
        emit(o, buffer.str(), out);
        if (!ok) {
            err << "verification found violations\n";
            return kExitFailure;
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace tcentroid::cli
