/*
   Copyright 2026 The maxmart Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "io.hpp"
#include "maxmart/bounds.hpp"
#include "maxmart/embeddings.hpp"
#include "maxmart/martingales.hpp"

namespace maxmart::cli {

namespace {

struct SimOptions {
    std::size_t paths;
    double dt;
    double horizon = 0.0;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    Extremes extremes = Extremes::bridge;
    LocalTimeMethod local_time = LocalTimeMethod::tanaka;
    double epsilon = 0.05;
    std::string out = "out";

    SimConfig config(double default_horizon) const
    {
        SimConfig c;
        c.dt = dt;
        c.horizon = horizon > 0.0 ? horizon : default_horizon;
        c.n_paths = paths;
        c.seed = seed;
        c.local_time_epsilon = epsilon;
        c.local_time = local_time;
        c.extremes = extremes;
        c.threads = threads;
        try {
            c.validate();
        } catch (const std::logic_error& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

void add_output(CLI::App* app, std::string& out)
{
    app->add_option("--out", out, "Output directory, or the summary .json path")->capture_default_str();
}

void add_sim(CLI::App* app, SimOptions& o)
{
    app->add_option("--paths", o.paths, "Number of paths")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--dt", o.dt, "Time step")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--horizon", o.horizon, "Simulation horizon (0: subcommand default)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    app->add_option("--threads", o.threads, "Worker threads (0: MAXMART_THREADS, then hardware)");
    app->add_option("--extremes", o.extremes, "Running extremes between grid points")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Extremes>{{"grid", Extremes::grid}, {"bridge", Extremes::bridge}}))
        ->default_str("bridge");
    app->add_option("--local-time", o.local_time, "Local-time estimator")
        ->transform(CLI::CheckedTransformer(std::map<std::string, LocalTimeMethod>{
            {"tanaka", LocalTimeMethod::tanaka}, {"downcrossing", LocalTimeMethod::downcrossing}}))
        ->default_str("tanaka");
    app->add_option("--epsilon", o.epsilon, "Downcrossing band width")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_output(app, o.out);
}

class Clock {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int verdict(bool pass)
{
    return pass ? kExitPass : kExitAssertion;
}

Json sim_json(const SimConfig& c)
{
    return Json{{"dt", c.dt}, {"horizon", c.horizon}, {"n_paths", c.n_paths},
        {"extremes", c.extremes == Extremes::bridge ? "bridge" : "grid"},
        {"local_time", c.local_time == LocalTimeMethod::tanaka ? "tanaka" : "downcrossing"},
        {"local_time_epsilon", c.local_time_epsilon}};
}

// Binomial proportion with its standard error.
StatReport proportion(std::size_t hits, std::size_t n, std::uint64_t seed)
{
    const double p = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
    const double se = n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return StatReport{p, se, n, seed, 0.0};
}

std::vector<double> stopped(const std::vector<StopOutcome>& out, double StopOutcome::*field)
{
    std::vector<double> v;
    for (const auto& o : out) {
        if (o.stopped) {
            v.push_back(o.*field);
        }
    }
    return v;
}

StatReport tail_fraction(const std::vector<double>& v, double level, std::uint64_t seed)
{
    const auto hits = static_cast<std::size_t>(
        std::count_if(v.begin(), v.end(), [&](double x) { return x >= level; }));
    return proportion(hits, v.size(), seed);
}

// top * k / count for k = 1..count.
std::vector<double> default_grid(double top, int count)
{
    std::vector<double> v;
    for (int k = 1; k <= count; ++k) {
        v.push_back(top * k / count);
    }
    return v;
}

// Levels strictly inside (0, top), where the supremum law is not degenerate.
std::vector<double> interior_grid(double top)
{
    auto v = default_grid(top, 10);
    v.pop_back();
    return v;
}

// ---- embed -----------------------------------------------------------------

struct EmbedOptions {
    SimOptions sim{100'000, 1e-4};
    std::string target;
    std::string method;
    double ks_tolerance = 0.0;
    std::size_t law_atoms = 2000;
    std::size_t dump = 0;
};

int run_embed(const EmbedOptions& o)
{
    Clock clock;
    const AtomicMeasure target = load_target(o.target);
    const bool ay = o.method == "ay";
    const StoppingRule rule = ay ? azema_yor_rule(target) : vallois_rule(target);
    const SimConfig config = o.sim.config(default_horizon(target));
    const auto r = run_embedding(rule, target, ay ? Embedded::b : Embedded::abs_b, config, o.law_atoms);
    const bool pass = !r.unstopped_flag && (o.ks_tolerance <= 0.0 || r.ks <= o.ks_tolerance);

    OutputSet out(o.sim.out, "embed");
    Json doc{{"subcommand", "embed"}, {"method", o.method}, {"rule", r.rule},
        {"embedded", ay ? "B_T" : "|B_T|"}, {"target_atoms", target.size()}, {"config", sim_json(config)},
        {"n_stopped", r.n_stopped}, {"unstopped_fraction", r.unstopped_fraction},
        {"unstopped_flag", r.unstopped_flag}, {"ks", r.ks}, {"wasserstein", r.wasserstein}};
    if (o.ks_tolerance > 0.0) {
        doc["ks_tolerance"] = o.ks_tolerance;
    }
    doc["pass"] = pass;
    doc["mean_embedded"] = to_json(r.mean_embedded);
    doc["mean_time"] = to_json(r.mean_time);
    doc["mean_ell"] = to_json(r.mean_ell);
    doc["laws"] = Json{{"B", to_json(r.b_law)}, {"sup", to_json(r.sup_law)}, {"ell", to_json(r.ell_law)}};

    // Empirical against target CDF at (at most 200) target atoms.
    auto values = stopped(r.outcomes, &StopOutcome::b);
    if (!ay) {
        for (double& v : values) {
            v = std::abs(v);
        }
    }
    std::sort(values.begin(), values.end());
    CsvWriter csv(out.table(), {"x", "empirical_cdf", "target_cdf"});
    const std::size_t stride = std::max<std::size_t>(1, target.size() / 200);
    for (std::size_t i = 0; i < target.size(); i += stride) {
        const double x = target.location(i);
        const auto below = std::upper_bound(values.begin(), values.end(), x) - values.begin();
        csv << x << (values.empty() ? 0.0 : static_cast<double>(below) / static_cast<double>(values.size()))
            << cdf(target, x);
        csv.end_row();
    }
    if (o.dump > 0) {
        dump_paths(out, config, rule, o.dump);
    }
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

// ---- suplaw ----------------------------------------------------------------

struct SupLawOptions {
    SimOptions sim{100'000, 1e-4};
    std::string target;
    std::string points;
    double tolerance = 0.02;
};

int run_suplaw(const SupLawOptions& o)
{
    Clock clock;
    const AtomicMeasure mu = load_target(o.target);
    const StoppingRule rule = azema_yor_rule(mu);
    const SimConfig config = o.sim.config(default_horizon(mu));
    const auto outcomes = stop_paths(config, rule);
    const auto sup = stopped(outcomes, &StopOutcome::sup);
    const auto lambdas = o.points.empty() ? interior_grid(mu.max_location()) : parse_list(o.points);

    // B_T = Psi^{-1}(sup_T) under this rule; its steps sit at the values of Psi.
    const BarycentreTable psi(mu);
    const std::vector<double> breaks(psi.values().begin(), psi.values().end());
    const auto phi = [&](double s) { return barycentre_right_inverse(mu, s); };

    OutputSet out(o.sim.out, "suplaw");
    CsvWriter csv(out.table(), {"point", "law", "bound", "empirical", "stderr", "flag"});
    bool pass = true;
    Json rows = Json::array();
    for (double lambda : lambdas) {
        const double law = lambda >= mu.max_location() && lambda > 0.0 ? 0.0 : sup_law_from_phi(phi, lambda, breaks);
        const double bound = blackwell_dubins_bound(mu, lambda);
        const StatReport emp = tail_fraction(sup, lambda, config.seed);
        const bool flag = emp.estimate > bound + 3.0 * emp.std_error
            || std::abs(emp.estimate - law) > o.tolerance + 3.0 * emp.std_error;
        pass = pass && !flag;
        csv << lambda << law << bound << emp.estimate << emp.std_error << flag;
        csv.end_row();
        rows.push_back(Json{{"point", lambda}, {"law", law}, {"bound", bound}, {"empirical", to_json(emp)},
            {"flag", flag}});
    }
    Json doc{{"subcommand", "suplaw"}, {"rule", rule.name()}, {"config", sim_json(config)},
        {"n_stopped", sup.size()}, {"tolerance", o.tolerance}, {"pass", pass}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

// ---- ltlaw -----------------------------------------------------------------

struct LtLawOptions {
    SimOptions sim{100'000, 1e-4};
    std::string target;
    std::string points;
    double tolerance = 0.01;
};

int run_ltlaw(const LtLawOptions& o)
{
    Clock clock;
    const AtomicMeasure m = load_target(o.target);
    const StoppingRule rule = vallois_rule(m);
    const SimConfig config = o.sim.config(default_horizon(m));
    const auto r = run_embedding(rule, m, Embedded::abs_b, config);
    auto ell = stopped(r.outcomes, &StopOutcome::ell);
    const auto points = o.points.empty() ? default_grid(3.0 * mean(m), 12) : parse_list(o.points);
    const double ks = ks_statistic(ell, [&](double x) { return 1.0 - vallois_local_time_tail(m, x); });

    OutputSet out(o.sim.out, "ltlaw");
    CsvWriter csv(out.table(), {"point", "law", "empirical", "stderr", "flag"});
    bool pass = !r.unstopped_flag;
    Json rows = Json::array();
    for (double x : points) {
        const double law = vallois_local_time_tail(m, x);
        const StatReport emp = tail_fraction(ell, x, config.seed);
        const bool flag = std::abs(emp.estimate - law) > o.tolerance + 3.0 * emp.std_error;
        pass = pass && !flag;
        csv << x << law << emp.estimate << emp.std_error << flag;
        csv.end_row();
        rows.push_back(Json{{"point", x}, {"law", law}, {"empirical", to_json(emp)}, {"flag", flag}});
    }
    const double target_mean = mean(m);
    const bool mean_ok = std::abs(r.mean_ell.estimate - target_mean)
        <= 3.0 * r.mean_ell.std_error + o.tolerance * target_mean;
    pass = pass && mean_ok;
    Json doc{{"subcommand", "ltlaw"}, {"rule", r.rule}, {"config", sim_json(config)},
        {"n_stopped", r.n_stopped}, {"unstopped_fraction", r.unstopped_fraction}, {"ks", ks},
        {"mean_ell", to_json(r.mean_ell)}, {"target_mean", target_mean}, {"mean_within", mean_ok},
        {"tolerance", o.tolerance}, {"pass", pass}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

// ---- doob-enum -------------------------------------------------------------

struct DoobOptions {
    int n = 12;
    std::string p = "1.1,2,3";
    std::string lambda = "1,2,3";
    std::string out = "out";
};

int run_doob(const DoobOptions& o)
{
    Clock clock;
    OutputSet out(o.out, "doob-enum");
    bool pass = true;
    Json lp = Json::array();
    {
        CsvWriter csv(out.table(), {"n", "p_or_lambda", "lhs", "rhs", "holds"});
        for (double p : parse_list(o.p)) {
            if (!(p > 1.0)) {
                throw UsageError("--p values must exceed 1");
            }
            const auto r = doob_lp_check(o.n, p);
            pass = pass && r.holds && r.intermediate_holds;
            csv << static_cast<double>(o.n) << p << r.lhs << r.rhs << r.holds;
            csv.end_row();
            lp.push_back(Json{{"p", p}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"holds", r.holds},
                {"intermediate_lhs", r.intermediate_lhs}, {"intermediate_rhs", r.intermediate_rhs},
                {"intermediate_holds", r.intermediate_holds}});
        }
    }
    Json maximal = Json::array();
    if (!o.lambda.empty()) {
        CsvWriter csv(out.table("maximal"), {"n", "p_or_lambda", "lhs", "rhs", "holds"});
        for (double lambda : parse_list(o.lambda)) {
            const auto r = doob_maximal_check(o.n, lambda);
            pass = pass && r.holds;
            csv << static_cast<double>(o.n) << lambda << r.lhs << r.rhs << r.holds;
            csv.end_row();
            maximal.push_back(Json{{"lambda", lambda}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
        }
    }
    Json doc{{"subcommand", "doob-enum"}, {"n", o.n}, {"paths", std::uint64_t{1} << o.n}, {"pass", pass},
        {"lp", lp}, {"maximal", maximal}};
    write_summary(out, doc, 0, clock.seconds());
    return verdict(pass);
}

// ---- balayage-check --------------------------------------------------------

struct BalayageOptions {
    SimOptions sim{100'000, 1e-3};
    int n = 12;
    double tolerance = 1e-12;
    std::vector<std::string> family{
        "indicator:0.5", "indicator:1", "indicator:2", "indicator:3", "indicator:5", "power:1,1", "power:1,2"};
    std::string mc_function;
};

int run_balayage(const BalayageOptions& o)
{
    Clock clock;
    OutputSet out(o.sim.out, "balayage-check");
    bool pass = true;
    Json exhaustive = Json::array();
    {
        CsvWriter csv(out.table(), {"n", "discrepancy", "holds"});
        for (int k = 1; k <= o.n; ++k) {
            const double d = balayage_exhaustive_check(k);
            const bool holds = d <= o.tolerance;
            pass = pass && holds;
            csv << static_cast<double>(k) << d << holds;
            csv.end_row();
            exhaustive.push_back(Json{{"n", k}, {"discrepancy", d}, {"holds", holds}});
        }
    }
    Json sfn = Json::array();
    {
        CsvWriter csv(out.table("sfn"), {"f", "prefixes", "worst_excess", "holds"});
        for (const auto& spec : o.family) {
            const auto r = sfn_supermartingale_check(o.n, parse_function(spec), o.tolerance);
            pass = pass && r.holds;
            csv << spec << static_cast<double>(r.prefixes) << r.worst_excess << r.holds;
            csv.end_row();
            sfn.push_back(Json{{"f", spec}, {"prefixes", r.prefixes}, {"worst_excess", r.worst_excess},
                {"holds", r.holds}});
        }
    }
    Json doc{{"subcommand", "balayage-check"}, {"n", o.n}, {"tolerance", o.tolerance}};
    std::uint64_t seed = 0;
    if (!o.mc_function.empty()) {
        const SimConfig config = o.sim.config(1.0);
        seed = config.seed;
        const auto r = balayage_drift_test(parse_function(o.mc_function), config, 0.5 * config.horizon, config.horizon);
        pass = pass && r.passes;
        doc["monte_carlo"] = Json{{"function", o.mc_function}, {"config", sim_json(config)},
            {"drift", to_json(r.drift)}, {"passes", r.passes}};
    }
    doc["pass"] = pass;
    doc["exhaustive"] = exhaustive;
    doc["sfn"] = sfn;
    write_summary(out, doc, seed, clock.seconds());
    return verdict(pass);
}

// ---- bounds ----------------------------------------------------------------

const std::vector<std::string> kBoundsHeader{"point", "bound", "empirical", "stderr", "flag"};

struct BoundsSupOptions {
    SimOptions sim{100'000, 1e-4};
    std::string target;
    std::string points;
};

int run_bounds_sup(const BoundsSupOptions& o)
{
    Clock clock;
    const AtomicMeasure mu = load_target(o.target);
    const SimConfig config = o.sim.config(default_horizon(mu));
    const auto lambdas = o.points.empty() ? interior_grid(mu.max_location()) : parse_list(o.points);
    const auto r = verify_sup_bound(azema_yor_rule(mu), mu, lambdas, config);
    OutputSet out(o.sim.out, "bounds-sup");
    CsvWriter csv(out.table(), kBoundsHeader);
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        csv << r.points[i] << r.bound[i] << r.empirical[i].estimate << r.empirical[i].std_error
            << static_cast<bool>(r.violation[i]);
        csv.end_row();
        rows.push_back(Json{{"point", r.points[i]}, {"bound", r.bound[i]}, {"empirical", to_json(r.empirical[i])},
            {"violation", static_cast<bool>(r.violation[i])}});
    }
    const bool pass = !r.any_violation();
    Json doc{{"subcommand", "bounds sup"}, {"config", sim_json(config)}, {"pass", pass}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

struct BoundsExpectOptions {
    SimOptions sim{100'000, 1e-3};
    std::string rule = "fixed:1";
};

int run_bounds_expect(const BoundsExpectOptions& o)
{
    Clock clock;
    const StoppingRule rule = parse_bounded_rule(o.rule);
    double horizon = 1.0;
    if (const auto* f = std::get_if<FixedTime>(&rule.variant())) {
        horizon = std::max(f->t, o.sim.dt);
    } else if (const auto* e = std::get_if<FirstExit>(&rule.variant())) {
        // Exit times have exponential tails on the scale of the squared width.
        horizon = 20.0 * (e->upper - e->lower) * (e->upper - e->lower);
    }
    const SimConfig config = o.sim.config(horizon);
    const auto r = expectation_bounds_check(rule, config);
    OutputSet out(o.sim.out, "bounds-expect");
    CsvWriter csv(out.table(), kBoundsHeader);
    const auto row = [&](const std::string& name, double bound, const StatReport& lhs, double se, bool holds) {
        csv << name << bound << lhs.estimate << se << !holds;
        csv.end_row();
        return Json{{"bound", bound}, {"empirical", to_json(lhs)}, {"stderr", se}, {"holds", holds}};
    };
    Json doc{{"subcommand", "bounds expect"}, {"rule", rule.name()}, {"config", sim_json(config)},
        {"mean_time", to_json(r.time)}};
    doc["sup"] = row("sup", r.rhs_sup, r.sup, r.se_sup, r.holds_sup);
    doc["abs_sup"] = row("abs_sup", r.rhs_abs_sup, r.abs_sup, r.se_abs_sup, r.holds_abs_sup);
    doc["range"] = row("range", r.rhs_range, r.range, r.se_range, r.holds_range);
    doc["identity_gap"] = row("identity", 0.0, r.identity_gap, r.identity_gap.std_error, r.identity_holds);
    const bool pass = r.holds_sup && r.holds_abs_sup && r.holds_range && r.identity_holds;
    doc["pass"] = pass;
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

struct BoundsLtimeOptions {
    SimOptions sim{100'000, 1e-3};
    std::string target;
    std::string alt = "randomized";
    std::string p = "0:0.9:0.1";
};

int run_bounds_ltime(const BoundsLtimeOptions& o)
{
    Clock clock;
    const AtomicMeasure m = load_target(o.target);
    const SimConfig config = o.sim.config(default_horizon(m));
    std::vector<double> levels;
    std::vector<double> probs;
    for (const Atom& a : m.atoms()) {
        levels.push_back(a.x);
        probs.push_back(a.w);
    }
    const StoppingRule alt = o.alt == "vallois" ? vallois_rule(m)
                                                : StoppingRule::randomized_abs_hitting(levels, probs);
    const auto r = local_time_bound_check(m, alt, parse_list(o.p), config);
    OutputSet out(o.sim.out, "bounds-ltime");
    CsvWriter csv(out.table(), kBoundsHeader);
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const double se = std::hypot(r.empirical[i].std_error, r.bound_stderr[i]);
        csv << r.points[i] << r.bound[i] << r.empirical[i].estimate << se << static_cast<bool>(r.violation[i]);
        csv.end_row();
        rows.push_back(Json{{"p", r.points[i]}, {"p_star", p_star(m, r.points[i])}, {"bound", r.bound[i]},
            {"bound_stderr", r.bound_stderr[i]}, {"empirical", to_json(r.empirical[i])},
            {"violation", static_cast<bool>(r.violation[i])}});
    }
    const bool pass = !r.any_violation();
    Json doc{{"subcommand", "bounds ltime"}, {"alt_rule", alt.name()}, {"config", sim_json(config)},
        {"pass", pass}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

struct BoundsRogersOptions {
    SimOptions sim{1'000'000, 1e-3};
    std::string target;
    std::size_t bins = 50;
    double min_mass = 0.01;
    double tolerance = 0.1;
};

int run_bounds_rogers(const BoundsRogersOptions& o)
{
    Clock clock;
    const AtomicMeasure mu = load_target(o.target);
    const SimConfig config = o.sim.config(default_horizon(mu));
    const auto outcomes = stop_paths(config, azema_yor_rule(mu));
    std::vector<double> sup;
    std::vector<double> drawdown;
    for (const auto& oc : outcomes) {
        if (oc.stopped) {
            sup.push_back(oc.sup);
            drawdown.push_back(oc.sup - oc.b);
        }
    }
    const auto r = rogers_condition_check(sup, drawdown, rogers_edges(sup, o.bins), o.min_mass);
    OutputSet out(o.sim.out, "bounds-rogers");
    CsvWriter csv(out.table(), kBoundsHeader);
    Json rows = Json::array();
    for (const auto& b : r.bins) {
        const bool used = b.mass >= o.min_mass;
        const double rel = b.rhs.estimate != 0.0 ? std::abs(b.lhs.estimate - b.rhs.estimate) / b.rhs.estimate : 0.0;
        const bool flag = used && rel > o.tolerance;
        csv << 0.5 * (b.lo + b.hi) << b.lhs.estimate << b.rhs.estimate
            << std::hypot(b.lhs.std_error, b.rhs.std_error) << flag;
        csv.end_row();
        rows.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"mass", b.mass}, {"lhs", to_json(b.lhs)},
            {"rhs", to_json(b.rhs)}, {"used", used}});
    }
    const bool pass = r.bins_used > 0 && r.max_relative <= o.tolerance;
    Json doc{{"subcommand", "bounds rogers"}, {"config", sim_json(config)}, {"max_relative", r.max_relative},
        {"bins_used", r.bins_used}, {"tolerance", o.tolerance}, {"pass", pass}, {"bins", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

struct BoundsLaplaceOptions {
    SimOptions sim{20'000, 1e-3};
    std::string f = "const:1";
    double x = 1.0;
};

int run_bounds_laplace(const BoundsLaplaceOptions& o)
{
    Clock clock;
    if (!(o.x > 0.0)) {
        throw UsageError("--x must be positive");
    }
    const SimConfig config = o.sim.config(65.0);
    const auto r = hitting_laplace_check(parse_function(o.f), o.x, config);
    OutputSet out(o.sim.out, "bounds-laplace");
    CsvWriter csv(out.table(), kBoundsHeader);
    csv << o.x << r.rhs << r.lhs.estimate << r.lhs.std_error << !r.within;
    csv.end_row();
    Json doc{{"subcommand", "bounds laplace"}, {"f", o.f}, {"x", o.x}, {"config", sim_json(config)},
        {"rhs", r.rhs}, {"lhs", to_json(r.lhs)}, {"unresolved", r.unresolved}, {"pass", r.within}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(r.within);
}

// ---- penalize --------------------------------------------------------------

struct PenalizeOptions {
    SimOptions sim{100'000, 1.0 / 64.0};
    std::string f = "exp";
    std::string event = "endpoint:0";
    double s = 1.0;
    std::string t = "4,16,64";
};

int run_penalize(const PenalizeOptions& o)
{
    Clock clock;
    PenalizationSpec spec{parse_density(o.f), parse_event(o.event), o.s, parse_list(o.t)};
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const SimConfig config = o.sim.config(spec.t_list.back());
    const auto table = convergence_experiment(spec, config);
    OutputSet out(o.sim.out, "penalize");
    CsvWriter csv(out.table(), {"t", "penalized", "stderr", "gap", "gap_stderr", "within"});
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        csv << row.t << row.penalized.estimate << row.penalized.std_error << row.gap << row.gap_stderr
            << row.within;
        csv.end_row();
        rows.push_back(Json{{"t", row.t}, {"penalized", to_json(row.penalized)}, {"gap", row.gap},
            {"gap_stderr", row.gap_stderr}, {"within", row.within}});
    }
    Json doc{{"subcommand", "penalize"}, {"f", o.f}, {"event", o.event}, {"s", o.s}, {"config", sim_json(config)},
        {"limit", to_json(table.limit)}, {"final_within", table.final_within},
        {"nonincreasing", table.nonincreasing}, {"pass", table.final_within}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(table.final_within);
}

// ---- density-check ---------------------------------------------------------

struct DensityOptions {
    SimOptions sim{100'000, 1e-3};
    double t = 1.0;
    double tolerance = 0.05;
};

int run_density(const DensityOptions& o)
{
    Clock clock;
    if (!(o.t > 0.0)) {
        throw UsageError("--t must be positive");
    }
    const SimConfig config = o.sim.config(o.t);
    const auto r = joint_density_check(o.t, config);
    OutputSet out(o.sim.out, "density-check");
    CsvWriter csv(out.table(), {"x_lo", "y_lo", "expected", "observed"});
    const std::size_t ny = 20;
    const double x_lo = -0.5 * static_cast<double>(r.expected.size() / ny) * r.cell_width;
    for (std::size_t k = 0; k < r.expected.size(); ++k) {
        csv << x_lo + r.cell_width * static_cast<double>(k / ny) << r.cell_width * static_cast<double>(k % ny)
            << r.expected[k] << r.observed[k];
        csv.end_row();
    }
    const bool norm_ok = std::abs(r.normalization - 1.0) <= 1e-3;
    const bool pass = norm_ok && r.tv <= o.tolerance;
    Json doc{{"subcommand", "density-check"}, {"t", o.t}, {"config", sim_json(config)},
        {"normalization", r.normalization}, {"tv", r.tv}, {"cells", r.cells}, {"tolerance", o.tolerance},
        {"pass", pass}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

// ---- mart-drift ------------------------------------------------------------

struct DriftOptions {
    SimOptions sim{100'000, 1e-3};
    std::vector<std::string> f{"indicator:1", "power:2,1", "exp:1,-1"};
    std::vector<std::string> g{"indicator-open:1"};
    std::vector<std::string> balayage;
    double t1 = 0.5;
    double t2 = 1.0;
};

int run_drift(const DriftOptions& o)
{
    Clock clock;
    if (!(o.t1 >= 0.0 && o.t2 > o.t1)) {
        throw UsageError("need 0 <= --t1 < --t2");
    }
    const SimConfig config = o.sim.config(o.t2);
    OutputSet out(o.sim.out, "mart-drift");
    CsvWriter csv(out.table(), {"kind", "function", "drift", "stderr", "z", "passes"});
    bool pass = true;
    Json rows = Json::array();
    const auto record = [&](const std::string& kind, const std::string& spec, const DriftReport& r) {
        pass = pass && r.passes;
        csv << kind << spec << r.drift.estimate << r.drift.std_error << r.drift.z_score(0.0) << r.passes;
        csv.end_row();
        rows.push_back(Json{{"kind", kind}, {"function", spec}, {"drift", to_json(r.drift)}, {"passes", r.passes}});
    };
    for (const auto& spec : o.f) {
        record("max", spec, martingale_drift_test(parse_function(spec), config, o.t1, o.t2));
    }
    for (const auto& spec : o.g) {
        record("local_time", spec, local_time_drift_test(parse_function(spec), config, o.t1, o.t2));
    }
    for (const auto& spec : o.balayage) {
        record("balayage", spec, balayage_drift_test(parse_function(spec), config, o.t1, o.t2));
    }
    Json doc{{"subcommand", "mart-drift"}, {"t1", o.t1}, {"t2", o.t2}, {"config", sim_json(config)},
        {"pass", pass}, {"rows", rows}};
    write_summary(out, doc, config.seed, clock.seconds());
    return verdict(pass);
}

} // namespace

int dispatch(const std::vector<std::string>& args)
{
    CLI::App app{"maxmart: max-martingales, Skorokhod embeddings and their Monte-Carlo checks", "maxmart"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "maxmart 0.1.0");

    std::function<int()> action;

    EmbedOptions embed;
    auto* s = app.add_subcommand("embed", "Run an Azema-Yor or local-time embedding");
    s->add_option("--target", embed.target, "Target measure (JSON file or built-in)")->required();
    s->add_option("--method", embed.method, "ay or vallois")->required()->check(CLI::IsMember({"ay", "vallois"}));
    s->add_option("--ks-tolerance", embed.ks_tolerance, "Fail when KS exceeds this (0: report only)");
    s->add_option("--law-atoms", embed.law_atoms, "Atoms per reported law")->capture_default_str();
    s->add_option("--dump-paths", embed.dump, "Write the first N (<= 100) paths as CSV");
    add_sim(s, embed.sim);
    s->callback([&] { action = [&] { return run_embed(embed); }; });

    SupLawOptions suplaw;
    s = app.add_subcommand("suplaw", "Law of the supremum of the Azema-Yor embedding");
    s->add_option("--target", suplaw.target, "Centered target measure")->required();
    s->add_option("--points", suplaw.points, "Levels (list or start:stop:step)");
    s->add_option("--tolerance", suplaw.tolerance, "Allowed |MC - law| beyond 3 sigma")->capture_default_str();
    add_sim(s, suplaw.sim);
    s->callback([&] { action = [&] { return run_suplaw(suplaw); }; });

    LtLawOptions ltlaw;
    s = app.add_subcommand("ltlaw", "Law of the local time of the local-time embedding");
    s->add_option("--target", ltlaw.target, "Target law of |B_T| on (0, inf)")->required();
    s->add_option("--points", ltlaw.points, "Levels (list or start:stop:step)");
    s->add_option("--tolerance", ltlaw.tolerance, "Allowed |MC - law| beyond 3 sigma")->capture_default_str();
    add_sim(s, ltlaw.sim);
    s->callback([&] { action = [&] { return run_ltlaw(ltlaw); }; });

    DoobOptions doob;
    s = app.add_subcommand("doob-enum", "Doob inequalities by exhaustive walk enumeration");
    s->add_option("--n", doob.n, "Walk length")->capture_default_str()->check(CLI::Range(0, kMaxEnumeration));
    s->add_option("--p", doob.p, "Exponents for the L^p inequality")->capture_default_str();
    s->add_option("--lambda", doob.lambda, "Levels for the maximal inequality")->capture_default_str();
    add_output(s, doob.out);
    s->callback([&] { action = [&] { return run_doob(doob); }; });

    BalayageOptions bal;
    s = app.add_subcommand("balayage-check", "Discrete balayage identity and S^f supermartingale");
    s->add_option("--n", bal.n, "Walk length")->capture_default_str()->check(CLI::Range(0, kMaxEnumeration));
    s->add_option("--tolerance", bal.tolerance, "Allowed discrepancy")->capture_default_str();
    s->add_option("--f", bal.family, "Functions for the S^f check")->capture_default_str();
    s->add_option("--mc", bal.mc_function, "Also test f(ell) B for this f by simulation");
    add_sim(s, bal.sim);
    s->callback([&] { action = [&] { return run_balayage(bal); }; });

    auto* bounds = app.add_subcommand("bounds", "Bounds on the supremum and the local time");
    bounds->require_subcommand(1);

    BoundsSupOptions bsup;
    s = bounds->add_subcommand("sup", "Blackwell-Dubins bound against the Azema-Yor embedding");
    s->add_option("--target", bsup.target, "Centered target measure")->required();
    s->add_option("--points", bsup.points, "Levels (list or start:stop:step)");
    add_sim(s, bsup.sim);
    s->callback([&] { action = [&] { return run_bounds_sup(bsup); }; });

    BoundsExpectOptions bexp;
    s = bounds->add_subcommand("expect", "E sup, E sup|B| and E range against sqrt(c E T)");
    s->add_option("--rule", bexp.rule, "fixed:t or exit:a,b")->capture_default_str();
    add_sim(s, bexp.sim);
    s->callback([&] { action = [&] { return run_bounds_expect(bexp); }; });

    BoundsLtimeOptions blt;
    s = bounds->add_subcommand("ltime", "Excess-wealth bound on the local time");
    s->add_option("--target", blt.target, "Law of |B_T| on (0, inf)")->required();
    s->add_option("--alt", blt.alt, "randomized or vallois")
        ->capture_default_str()
        ->check(CLI::IsMember({"randomized", "vallois"}));
    s->add_option("--p", blt.p, "Probability levels")->capture_default_str();
    add_sim(s, blt.sim);
    s->callback([&] { action = [&] { return run_bounds_ltime(blt); }; });

    BoundsRogersOptions brog;
    s = bounds->add_subcommand("rogers", "Joint-law condition on (sup_T, sup_T - B_T)");
    s->add_option("--target", brog.target, "Centered target measure")->required();
    s->add_option("--bins", brog.bins, "Bins over [0, max sup]")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--min-mass", brog.min_mass, "Smallest bin mass compared")->capture_default_str();
    s->add_option("--tolerance", brog.tolerance, "Largest relative discrepancy")->capture_default_str();
    add_sim(s, brog.sim);
    s->callback([&] { action = [&] { return run_bounds_rogers(brog); }; });

    BoundsLaplaceOptions blap;
    s = bounds->add_subcommand("laplace", "Hitting-time Laplace identity");
    s->add_option("--f", blap.f, "Function of the supremum")->capture_default_str();
    s->add_option("--x", blap.x, "Level")->capture_default_str();
    add_sim(s, blap.sim);
    s->callback([&] { action = [&] { return run_bounds_laplace(blap); }; });

    PenalizeOptions pen;
    s = app.add_subcommand("penalize", "Penalization by a function of the supremum");
    s->add_option("--f", pen.f, "exp or indicator:a")->capture_default_str();
    s->add_option("--event", pen.event, "endpoint:a, sup:a or all")->capture_default_str();
    s->add_option("--s", pen.s, "Time of the event")->capture_default_str();
    s->add_option("--t", pen.t, "Penalization horizons")->capture_default_str();
    add_sim(s, pen.sim);
    s->callback([&] { action = [&] { return run_penalize(pen); }; });

    DensityOptions dens;
    s = app.add_subcommand("density-check", "Histogram of (B_t, sup_t) against the joint density");
    s->add_option("--t", dens.t, "Time")->capture_default_str();
    s->add_option("--tolerance", dens.tolerance, "Largest binned total variation")->capture_default_str();
    add_sim(s, dens.sim);
    s->callback([&] { action = [&] { return run_density(dens); }; });

    DriftOptions drift;
    s = app.add_subcommand("mart-drift", "Drift of the max- and local-time martingales");
    s->add_option("--f", drift.f, "f for F(sup) - f(sup)(sup - B)")->capture_default_str();
    s->add_option("--g", drift.g, "g for G(ell) - g(ell)|B|")->capture_default_str();
    s->add_option("--balayage", drift.balayage, "f for f(ell) B");
    s->add_option("--t1", drift.t1, "First time")->capture_default_str();
    s->add_option("--t2", drift.t2, "Second time")->capture_default_str();
    add_sim(s, drift.sim);
    s->callback([&] { action = [&] { return run_drift(drift); }; });

    if (args.empty()) {
        std::cerr << app.help();
        return kExitUsage;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitPass : kExitUsage;
    }
    if (!action) {
        std::cerr << app.help();
        return kExitUsage;
    }
    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "maxmart: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::logic_error& e) {
        // Library precondition failures: bad measures, rules or parameters.
        std::cerr << "maxmart: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "maxmart: error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int dispatch(int argc, const char* const* argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return dispatch(args);
}

} // namespace maxmart::cli
