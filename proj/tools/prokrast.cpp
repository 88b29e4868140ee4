// prokrast: present-biased agents on layered task graphs.
//
// Subcommands: ratio, simulate, zvalue, worstcase, bounds, examples, pricing.
// Every run is reproducible: randomized outputs depend only on --seed and
// --trials, never on thread count (PROKRAST_THREADS only changes how the
// work is split).
//
// Exit codes: 0 success, 1 a checked property failed, 2 invalid input.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prokrast/agent.hpp"
#include "prokrast/bounds.hpp"
#include "prokrast/io.hpp"
#include "prokrast/pricing.hpp"
#include "prokrast/scenarios.hpp"
#include "prokrast/worstcase.hpp"

namespace {

using namespace prokrast;
using nlohmann::json;

struct Output {
    std::string path = "-";
    std::string format = "csv";

    void emit(const std::string& csv, const json& j) const {
        const std::string text = format == "json" ? j.dump(2) + "\n" : csv;
        if (path == "-") std::cout << text;
        else io::write_file(path, text);
    }
};

json ratio_report_json(const RatioReport& r) {
    json j{{"method", r.method},
           {"ratio", r.ratio},
           {"d_start", r.d_start},
           {"expected_cost", r.expected_cost}};
    if (r.method == "simulate") {
        j["std_error"] = r.std_error;
        j["trials"] = r.trials;
    }
    return j;
}

int cmd_ratio(const std::string& graph_path, const std::string& dist_path, const Output& out) {
    const TaskGraph g = io::load_graph(graph_path);
    const BiasDistribution dist = io::load_dist(dist_path);
    const RatioReport r = exact_ratio(g, dist);
    out.emit(io::csv_ratio_report(r), ratio_report_json(r));
    return 0;
}

int cmd_simulate(const std::string& graph_path, const std::string& dist_path, std::uint64_t seed,
                 std::uint64_t trials, int threads, const std::string& trace_path,
                 const Output& out) {
    const TaskGraph g = io::load_graph(graph_path);
    const BiasDistribution dist = io::load_dist(dist_path);
    std::vector<Trajectory> trajectories;
    const bool trace = !trace_path.empty();
    const RatioReport r =
        simulate(g, dist, seed, trials, threads, trace ? &trajectories : nullptr);
    if (trace) io::write_file(trace_path, io::csv_trajectories(g, trajectories));
    out.emit(io::csv_ratio_report(r), ratio_report_json(r));
    return 0;
}

int cmd_zvalue(const std::string& dist_path, const Output& out) {
    const ZValue zv = io::load_dist(dist_path).z_value();
    std::ostringstream csv;
    csv << "z,argmax_b,exact\n"
        << fmt_sig(zv.z) << ',' << fmt_sig(zv.argmax_b) << ',' << (zv.exact ? "true" : "false")
        << '\n';
    out.emit(csv.str(), json{{"z", zv.z}, {"argmax_b", zv.argmax_b}, {"exact", zv.exact}});
    return 0;
}

int cmd_worstcase(const std::string& dist_path, int n, const std::string& emit_graph,
                  const Output& out) {
    const BiasDistribution dist = io::load_dist(dist_path);
    const Synthesis syn = synthesize(dist, n);
    if (!emit_graph.empty()) io::save_graph(emit_graph, syn.graph);
    json j{{"n", syn.spec.n},
           {"ratio", syn.spec.ratios[0]},
           {"prices", syn.spec.prices},
           {"distances", syn.spec.distances},
           {"ratios", syn.spec.ratios}};
    out.emit(io::csv_worst_case_spec(syn.spec), j);
    return 0;
}

int cmd_pricing(const std::string& dist_path, double alpha, double beta, bool capped,
                const Output& out) {
    const BiasDistribution dist = io::load_dist(dist_path);
    std::ostringstream csv;
    json j;
    if (capped) {
        const CappedMenu m = optimal_capped_menu(dist, {alpha, beta});
        csv << "variant,alpha,beta,x_star,threshold,value,expected_allocation,expected_payment\n"
            << "capped," << fmt_sig(alpha) << ',' << fmt_sig(beta) << ',' << fmt_sig(m.x_star)
            << ',' << fmt_sig(m.threshold) << ',' << fmt_sig(m.value) << ','
            << fmt_sig(m.expected_allocation) << ',' << fmt_sig(m.expected_payment) << '\n';
        j = json{{"variant", "capped"},       {"alpha", alpha},
                 {"beta", beta},              {"x_star", m.x_star},
                 {"threshold", m.threshold},  {"value", m.value},
                 {"expected_allocation", m.expected_allocation},
                 {"expected_payment", m.expected_payment}};
    } else {
        const PostedPrice p = optimal_posted_price(dist, {alpha, beta});
        csv << "variant,alpha,beta,price,value,expected_allocation,expected_payment\n"
            << "posted," << fmt_sig(alpha) << ',' << fmt_sig(beta) << ',' << fmt_sig(p.price)
            << ',' << fmt_sig(p.value) << ',' << fmt_sig(p.expected_allocation) << ','
            << fmt_sig(p.expected_payment) << '\n';
        j = json{{"variant", "posted"},       {"alpha", alpha},
                 {"beta", beta},              {"price", p.price},
                 {"value", p.value},          {"expected_allocation", p.expected_allocation},
                 {"expected_payment", p.expected_payment}};
    }
    out.emit(csv.str(), j);
    return 0;
}

int cmd_examples(const std::string& scenario, int n, int m, double epsilon, double delta,
                 const std::string& dist_path, const std::string& emit_graph, const Output& out) {
    ScenarioSpec spec;
    spec.scenario = scenario == "homework" ? Scenario::homework
                    : scenario == "marathon" ? Scenario::marathon
                                             : Scenario::ski;
    spec.n = n;
    spec.m = m;
    spec.epsilon = epsilon;
    spec.delta = delta;
    const TaskGraph g = build_scenario(spec);
    if (!emit_graph.empty()) io::save_graph(emit_graph, g);

    std::optional<RatioReport> ratio;
    if (!dist_path.empty()) ratio = exact_ratio(g, io::load_dist(dist_path));

    const DistanceTable dt = distances(g);
    std::ostringstream csv;
    csv << "scenario,n,node,layer,dist,exact_ratio\n";
    const std::string ratio_str = ratio ? fmt_sig(ratio->ratio) : "";
    for (int v = 0; v < g.num_nodes(); ++v)
        csv << scenario << ',' << n << ',' << g.id(v) << ',' << g.layer(v) << ','
            << fmt_sig(dt.at(v)) << ',' << ratio_str << '\n';

    json j{{"scenario", scenario}, {"n", n}, {"nodes", json::array()}};
    for (int v = 0; v < g.num_nodes(); ++v)
        j["nodes"].push_back({{"id", g.id(v)}, {"layer", g.layer(v)}, {"dist", dt.at(v)}});
    if (ratio) j["exact_ratio"] = ratio->ratio;
    out.emit(csv.str(), j);
    return 0;
}

int cmd_bounds(const std::string& check, const std::string& dist_path,
               const std::string& graph_path, int n, double b0, std::uint64_t trials,
               std::uint64_t seed, const Output& out) {
    const BiasDistribution dist = io::load_dist(dist_path);
    std::ostringstream csv;
    json j{{"check", check}};
    bool pass = true;

    if (check == "claim1") {
        if (graph_path.empty()) throw PreconditionError("claim1 needs --graph");
        const TaskGraph g = io::load_graph(graph_path);
        const StepBoundReport rep = check_step_cost_bound(g, dist, trials, seed);
        pass = rep.passed;
        csv << "check,n,trials,violations,max_total,total_bound,pass\n"
            << check << ',' << g.days() << ',' << rep.trials << ',' << rep.violations << ','
            << fmt_sig(rep.max_total) << ',' << fmt_sig(rep.total_bound) << ','
            << (pass ? "true" : "false") << '\n';
        j.update({{"n", g.days()},
                  {"trials", rep.trials},
                  {"violations", rep.violations},
                  {"max_total", rep.max_total},
                  {"total_bound", rep.total_bound},
                  {"pass", pass}});
    } else if (check == "thm3") {
        const ZValue zv = dist.z_value();
        const Synthesis syn = synthesize(dist, n);
        const double bound = geometric_bound(zv.z, n);
        pass = syn.spec.ratios[0] <= bound * (1.0 + 1e-9);
        csv << "check,n,z,ratio,bound,pass\n"
            << check << ',' << n << ',' << fmt_sig(zv.z) << ',' << fmt_sig(syn.spec.ratios[0])
            << ',' << fmt_sig(bound) << ',' << (pass ? "true" : "false") << '\n';
        j.update({{"n", n}, {"z", zv.z}, {"ratio", syn.spec.ratios[0]}, {"bound", bound},
                  {"pass", pass}});
    } else if (check == "thm4") {
        if (!(b0 > 1.0)) throw PreconditionError("thm4 needs --b0 greater than 1");
        const ThresholdGrowth tg = threshold_growth_graph(dist, b0, n);
        const double bound = geometric_bound(dist.z_value().z, n);
        pass = tg.graph_ratio >= 1.0 - 1e-9 && tg.graph_ratio <= bound * (1.0 + 1e-9);
        csv << "check,n,b0,z0,graph_ratio,formula_value,gap,discrepant,pass\n"
            << check << ',' << n << ',' << fmt_sig(b0) << ',' << fmt_sig(tg.z0) << ','
            << fmt_sig(tg.graph_ratio) << ',' << fmt_sig(tg.formula_value) << ','
            << fmt_sig(tg.formula_value - tg.graph_ratio) << ','
            << (tg.discrepant ? "true" : "false") << ',' << (pass ? "true" : "false") << '\n';
        j.update({{"n", n},
                  {"b0", b0},
                  {"z0", tg.z0},
                  {"graph_ratio", tg.graph_ratio},
                  {"formula_value", tg.formula_value},
                  {"gap", tg.formula_value - tg.graph_ratio},
                  {"discrepant", tg.discrepant},
                  {"pass", pass}});
    } else if (check == "thm5") {
        const DriftWalkParams p = drift_walk_params(dist);
        const TaskGraph g = drift_walk_graph(p, n);
        const RatioReport rep = simulate(g, dist, seed, trials);
        csv << "check,n,b_star,alpha,beta,delta,gamma,mean_ratio,std_error,pass\n"
            << check << ',' << n << ',' << fmt_sig(p.b_star) << ',' << p.alpha << ',' << p.beta
            << ',' << fmt_sig(p.delta) << ',' << fmt_sig(p.gamma) << ',' << fmt_sig(rep.ratio)
            << ',' << fmt_sig(rep.std_error) << ",true\n";
        j.update({{"n", n},
                  {"b_star", p.b_star},
                  {"alpha", p.alpha},
                  {"beta", p.beta},
                  {"delta", p.delta},
                  {"gamma", p.gamma},
                  {"mean_ratio", rep.ratio},
                  {"std_error", rep.std_error},
                  {"pass", true}});
    } else {  // thm6
        if (graph_path.empty()) throw PreconditionError("thm6 needs --graph");
        const TaskGraph g = io::load_graph(graph_path);
        const MonotoneBoundReport rep = check_monotone_constant(g, dist);
        pass = rep.passed;
        csv << "check,n,beta_m,delta_m,bound,ratio,pass\n"
            << check << ',' << g.days() << ',' << fmt_sig(rep.condition.beta) << ','
            << fmt_sig(rep.condition.delta) << ',' << fmt_sig(rep.condition.bound) << ','
            << fmt_sig(rep.ratio) << ',' << (pass ? "true" : "false") << '\n';
        j.update({{"n", g.days()},
                  {"beta_m", rep.condition.beta},
                  {"delta_m", rep.condition.delta},
                  {"bound", rep.condition.bound},
                  {"ratio", rep.ratio},
                  {"pass", pass}});
    }
    out.emit(csv.str(), j);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"present-biased agents on layered task graphs"};
    app.require_subcommand(1);

    std::string graph_path, dist_path, trace_path, emit_graph, scenario, check;
    Output out;
    std::uint64_t seed = 0, trials = 1000;
    int n = 10, m = 4, threads = 0;
    double alpha = 0.0, beta = 1.0, epsilon = 0.05, delta = 0.5, b0 = 0.0;
    bool capped = false;

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--output", out.path, "output path ('-' for stdout)");
        cmd->add_option("--format", out.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* ratio = app.add_subcommand("ratio", "exact procrastination ratio");
    ratio->add_option("--graph", graph_path)->required();
    ratio->add_option("--dist", dist_path)->required();
    add_output(ratio);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo ratio estimate");
    sim->add_option("--graph", graph_path)->required();
    sim->add_option("--dist", dist_path)->required();
    sim->add_option("--trials", trials);
    sim->add_option("--seed", seed);
    sim->add_option("--threads", threads, "0 = PROKRAST_THREADS or hardware");
    sim->add_option("--trace", trace_path, "write per-step trajectory CSV here");
    add_output(sim);

    auto* zv = app.add_subcommand("zvalue", "posted-price revenue sup of a distribution");
    zv->add_option("--dist", dist_path)->required();
    add_output(zv);

    auto* wc = app.add_subcommand("worstcase", "synthesize the worst-case task graph");
    wc->add_option("--dist", dist_path)->required();
    wc->add_option("--n", n)->required();
    wc->add_option("--emit-graph", emit_graph, "also write the graph JSON here");
    add_output(wc);

    auto* bounds = app.add_subcommand("bounds", "bound checks with numbers");
    bounds->add_option("--dist", dist_path)->required();
    bounds->add_option("--n", n);
    bounds->add_option("--check", check)->required()
        ->check(CLI::IsMember({"claim1", "thm3", "thm4", "thm5", "thm6"}));
    bounds->add_option("--graph", graph_path, "graph file (claim1, thm6)");
    bounds->add_option("--b0", b0, "bias threshold (thm4)");
    bounds->add_option("--trials", trials);
    bounds->add_option("--seed", seed);
    add_output(bounds);

    auto* ex = app.add_subcommand("examples", "scenario graphs and cost tables");
    ex->add_option("--scenario", scenario)->required()
        ->check(CLI::IsMember({"homework", "marathon", "ski"}));
    ex->add_option("--n", n)->required();
    ex->add_option("--m", m, "marathon fitness levels");
    ex->add_option("--epsilon", epsilon, "marathon level-0 upkeep");
    ex->add_option("--delta", delta, "ski rent cost");
    ex->add_option("--dist", dist_path, "also report the exact ratio under this distribution");
    ex->add_option("--emit-graph", emit_graph, "write the graph JSON here");
    add_output(ex);

    auto* pr = app.add_subcommand("pricing", "optimal posted price or capped menu");
    pr->add_option("--dist", dist_path)->required();
    pr->add_option("--alpha", alpha, "coefficient on E[x]")->required();
    pr->add_option("--beta", beta, "coefficient on E[p]")->required();
    pr->add_flag("--cap", capped, "restrict prices to 1 (capped menus)");
    add_output(pr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (ratio->parsed()) return cmd_ratio(graph_path, dist_path, out);
        if (sim->parsed())
            return cmd_simulate(graph_path, dist_path, seed, trials, threads, trace_path, out);
        if (zv->parsed()) return cmd_zvalue(dist_path, out);
        if (wc->parsed()) return cmd_worstcase(dist_path, n, emit_graph, out);
        if (bounds->parsed())
            return cmd_bounds(check, dist_path, graph_path, n, b0, trials, seed, out);
        if (ex->parsed())
            return cmd_examples(scenario, n, m, epsilon, delta, dist_path, emit_graph, out);
        if (pr->parsed()) return cmd_pricing(dist_path, alpha, beta, capped, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
