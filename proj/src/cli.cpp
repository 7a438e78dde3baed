#include "subordinate/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "subordinate/compartmental.hpp"
#include "subordinate/estimator.hpp"
#include "subordinate/format.hpp"
#include "subordinate/json_io.hpp"
#include "subordinate/moments.hpp"
#include "subordinate/time_change_rates.hpp"
#include "subordinate/trajectory.hpp"

namespace subordinate::cli {
namespace {

struct ProcessOptions {
    std::string spec;
    std::string family;
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    StateCount d0 = 0;
    std::vector<double> rates;
    StateCount initial = 0;

    void attach(CLI::App* app) {
        app->add_option("--spec", spec, "Process spec as inline JSON or a path to a JSON file");
        app->add_option("--family", family, "poisson | linear_birth | linear_death | nonlinear_death | general");
        app->add_option("--alpha", alpha, "Poisson rate");
        app->add_option("--beta", beta, "Per-individual birth rate");
        app->add_option("--delta", delta, "Per-individual death rate");
        app->add_option("--d0", d0, "Initial population of a death process");
        app->add_option("--rates", rates, "Per-state rates for the general family")->delimiter(',');
        app->add_option("--initial", initial, "Initial state");
    }

    ProcessSpec build() const {
        if (!spec.empty()) {
            std::string text = spec;
            if (text.find('{') == std::string::npos) {
                std::ifstream in(spec);
                if (!in) throw DomainError("cannot read spec file " + spec);
                std::stringstream buf;
                buf << in.rdbuf();
                text = buf.str();
            }
            Json parsed;
            try {
                parsed = Json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw DomainError(std::string("invalid spec JSON: ") + e.what());
            }
            return process_spec_from_json(parsed);
        }
        if (family.empty()) throw DomainError("either --spec or --family is required");
        Json params;
        if (family == "poisson") params = {{"alpha", alpha}};
        if (family == "linear_birth") params = {{"beta", beta}};
        if (family == "linear_death") params = {{"delta", delta}, {"d0", d0}};
        if (family == "nonlinear_death") params = {{"d0", d0}};
        if (family == "general") params = {{"rates", rates}};
        return process_spec_from_json(Json{{"family", family}, {"params", params}, {"initial_state", initial}});
    }
};

// Writes to --output when given, else to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw DomainError("cannot open output " + path);
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

void require_format(const std::string& format) {
    if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
}

int cmd_rates(const ProcessOptions& p, StateCount state, std::optional<StateCount> kmax, double eps,
              const std::string& format, std::ostream& out) {
    require_format(format);
    const ProcessSpec spec = p.build();
    const TransitionRateRow row = transition_rates(spec.rate, state, eps);
    const StateCount top = kmax.value_or(row.max_jump());
    const double lambda_s = rate_function_S(spec.rate, state);
    if (format == "json") {
        Json j = to_json(row);
        j["lambda_S"] = lambda_s;
        out << j.dump() << '\n';
        return kExitOk;
    }
    out << "s,k,q\n";
    for (StateCount k = 1; k <= top; ++k) out << state << ',' << k << ',' << format_real(row.q(k)) << '\n';
    out << "s,lambda_S\n" << state << ',' << format_real(lambda_s) << '\n';
    return kExitOk;
}

int cmd_moments(const ProcessOptions& p, StateCount from, StateCount to, bool closed_form, double eps,
                std::ostream& out) {
    const ProcessSpec spec = p.build();
    if (to < from) throw DomainError("--to must be >= --state");
    out << "s,mu,sigma2,D,err\n";
    for (StateCount s = from; s <= to; ++s) {
        MomentSummary m = moments_from_rates(transition_rates(spec.rate, s, eps));
        if (closed_form) {
            if (const auto* pois = std::get_if<Poisson>(&spec.rate)) {
                m = poisson_poisson_moments(pois->alpha);
            } else if (const auto* d = std::get_if<LinearDeathCounting>(&spec.rate); d && s < d->d0) {
                m = binomial_poisson_moments(d->delta, d->d0, s);
            }
        }
        out << s << ',' << format_real(m.inf_mean) << ',' << format_real(m.inf_var) << ','
            << (m.dispersion ? format_real(*m.dispersion) : std::string()) << ',' << format_real(m.error_bound)
            << '\n';
    }
    return kExitOk;
}

void write_trajectory(std::ostream& out, const Trajectory& traj, const std::string& format) {
    if (format == "json") {
        out << to_json(traj).dump() << '\n';
    } else {
        write_csv(out, traj);
    }
}

std::vector<EstimateReport> run_suite(const std::string& suite, std::uint64_t seed, std::size_t reps, double h,
                                      const std::optional<ProcessSpec>& custom, StateCount state) {
    std::vector<EstimateReport> reports;
    const ProcessSpec poisson1{Poisson{1.0}, 0};
    const ProcessSpec poisson2{Poisson{2.0}, 0};
    const ProcessSpec death{LinearDeathCounting{0.7, 10}, 0};
    const bool all = suite == "all";
    bool known = all;
    if (custom) {
        reports.push_back(estimate_transition_rates(*custom, state, h, reps, seed));
        reports.push_back(estimate_interevent(*custom, state, reps, seed));
        reports.push_back(estimate_jump_sizes(*custom, state, reps, seed));
        reports.push_back(estimate_dispersion(*custom, state, h, reps, seed));
        return reports;
    }
    if (all || suite == "theorem1" || suite == "rates") {
        known = true;
        reports.push_back(estimate_transition_rates(poisson1, 0, h, reps, seed));
        reports.push_back(estimate_jump_sizes(poisson1, 0, reps, seed));
        reports.push_back(estimate_jump_sizes(death, 0, reps, seed));
    }
    if (all || suite == "interevent") {
        known = true;
        reports.push_back(estimate_interevent(death, 0, reps, seed));
    }
    if (all || suite == "dispersion") {
        known = true;
        reports.push_back(estimate_dispersion(poisson2, 0, h, reps, seed));
        reports.push_back(estimate_dispersion(poisson2, 0, h, reps, seed, false));
        reports.push_back(estimate_dispersion(death, 9, h, reps, seed));
    }
    if (all || suite == "sir") {
        known = true;
        SirConfig c;
        c.population = 1000;
        c.contact_rate = 1.5;
        c.recovery_rate = 2.0;
        c.overdispersed_ir = true;
        c.step = 0.01;
        c.initial = {900, 100, 0, 0, 0};
        reports.push_back(sir_dispersion_probe(c, 0.01, std::max<std::size_t>(2, reps / 10), seed));
    }
    if (!known) throw DomainError("unknown suite '" + suite + "' (theorem1|rates, interevent, dispersion, sir, all)");
    return reports;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Poisson time changes of simple Markov counting processes"};
    app.require_subcommand(1);

    ProcessOptions proc;
    std::string format = "csv";
    std::string output;
    double eps = kDefaultKernelTolerance;
    std::uint64_t seed = 0;

    auto* rates = app.add_subcommand("rates", "Transition rates q_{s,k} and lambda_S(s) of the time-changed process");
    proc.attach(rates);
    StateCount state = 0;
    std::optional<StateCount> kmax;
    rates->add_option("--state", state, "Conditioning state s")->required();
    rates->add_option("--kmax", kmax, "Largest jump size to print");
    rates->add_option("--eps", eps, "Kernel truncation tolerance");
    rates->add_option("--format", format, "csv | json");
    rates->add_option("--output", output, "Output file");

    auto* moments = app.add_subcommand("moments", "Infinitesimal mean, variance and dispersion");
    proc.attach(moments);
    StateCount to_state = -1;
    bool closed_form = false;
    moments->add_option("--state", state, "First state")->required();
    moments->add_option("--to", to_state, "Last state (default: --state)");
    moments->add_flag("--closed-form", closed_form, "Use the closed-form moment expressions where available");
    moments->add_option("--eps", eps, "Kernel truncation tolerance");
    moments->add_option("--output", output, "Output file");

    double t_end = 0.0;
    std::uint64_t stream = 0;
    bool time_changed = false;
    auto* simulate = app.add_subcommand("simulate", "Simulate one trajectory");
    proc.attach(simulate);
    simulate->add_option("--t-end", t_end, "Simulation horizon")->required();
    simulate->add_option("--seed", seed, "Master seed")->required();
    simulate->add_option("--stream", stream, "Stream index");
    simulate->add_flag("--time-changed", time_changed, "Simulate S = X(N(t)) instead of X");
    simulate->add_option("--format", format, "csv | json");
    simulate->add_option("--output", output, "Output file");

    std::string clock_out;
    std::string base_out;
    auto* compose_cmd = app.add_subcommand("compose", "Simulate N and X and write the composed path S = X(N)");
    proc.attach(compose_cmd);
    compose_cmd->add_option("--t-end", t_end, "Horizon of the clock")->required();
    compose_cmd->add_option("--seed", seed, "Master seed")->required();
    compose_cmd->add_option("--stream", stream, "Stream index");
    compose_cmd->add_option("--clock-output", clock_out, "Also write N here");
    compose_cmd->add_option("--base-output", base_out, "Also write X here");
    compose_cmd->add_option("--format", format, "csv | json");
    compose_cmd->add_option("--output", output, "Output file");

    std::string suite = "all";
    std::size_t reps = 100000;
    double h = 0.01;
    auto* verify = app.add_subcommand("verify", "Monte Carlo checks against the closed forms");
    verify->set_help_flag("--help", "Print this help message and exit");
    proc.attach(verify);
    verify->add_option("--suite", suite, "theorem1 (alias rates) | interevent | dispersion | sir | all");
    verify->add_option("--seed", seed, "Master seed")->required();
    verify->add_option("--reps", reps, "Replicates per check")->check(CLI::PositiveNumber);
    verify->add_option("--h", h, "Window for finite-h estimators")->check(CLI::PositiveNumber);
    verify->add_option("--state", state, "State for a custom process (with --family/--spec)");
    verify->add_option("--output", output, "Output file");

    std::string config_path;
    auto* sir = app.add_subcommand("sir", "Simulate the SIR system built from time-changed blocks");
    sir->add_option("--config", config_path, "SIR config JSON file")->required();
    sir->add_option("--t-end", t_end, "Horizon")->required();
    sir->add_option("--seed", seed, "Master seed")->required();
    sir->add_option("--stream", stream, "Stream index");
    sir->add_option("--output", output, "Output file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();  // program name
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (rates->parsed()) {
            Sink sink(output, out);
            return cmd_rates(proc, state, kmax, eps, format, *sink);
        }
        if (moments->parsed()) {
            Sink sink(output, out);
            return cmd_moments(proc, state, to_state < 0 ? state : to_state, closed_form, eps, *sink);
        }
        if (simulate->parsed()) {
            require_format(format);
            const ProcessSpec spec = proc.build();
            RngStream rng(seed, stream);
            Sink sink(output, out);
            write_trajectory(*sink, time_changed ? simulate_time_changed(spec, t_end, rng).composed
                                                 : simulate_simple(spec, t_end, rng),
                             format);
            return kExitOk;
        }
        if (compose_cmd->parsed()) {
            require_format(format);
            const ProcessSpec spec = proc.build();
            RngStream rng(seed, stream);
            const TimeChangedPaths paths = simulate_time_changed(spec, t_end, rng);
            if (!clock_out.empty()) {
                Sink s(clock_out, out);
                write_trajectory(*s, paths.clock, format);
            }
            if (!base_out.empty()) {
                Sink s(base_out, out);
                write_trajectory(*s, paths.base, format);
            }
            Sink sink(output, out);
            write_trajectory(*sink, paths.composed, format);
            return kExitOk;
        }
        if (verify->parsed()) {
            std::optional<ProcessSpec> custom;
            if (!proc.spec.empty() || !proc.family.empty()) custom = proc.build();
            const auto reports = run_suite(suite, seed, reps, h, custom, state);
            Sink sink(output, out);
            bool ok = true;
            for (const auto& r : reports) {
                write_json_lines(*sink, r);
                ok = ok && r.passed();
            }
            return ok ? kExitOk : kExitCheckFailed;
        }
        if (sir->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw DomainError("cannot read config " + config_path);
            Json j;
            try {
                j = Json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw DomainError(std::string("invalid config JSON: ") + e.what());
            }
            const SirConfig config = sir_config_from_json(j);
            RngStream rng(seed, stream);
            const auto path = simulate_sir(config, t_end, rng);
            Sink sink(output, out);
            write_csv(*sink, path);
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace subordinate::cli
