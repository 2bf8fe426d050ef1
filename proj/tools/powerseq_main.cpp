#include "powerseq/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

using namespace powerseq;

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json shell(const char* command, std::uint64_t seed) {
  json j;
  j["command"] = command;
  j["version"] = kArtifactVersion;
  j["seed"] = seed;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error("cannot open file for writing: " + path);
  out << content;
}

std::vector<CirclePoint> parse_angle_row(const json& row) {
  std::vector<CirclePoint> pts;
  for (const auto& cell : row) pts.emplace_back(rat_from_string(cell.get<std::string>()));
  return pts;
}

GridInstance load_table_instance(const std::string& path, std::size_t k_max) {
  std::ifstream in(path);
  if (!in) throw error("cannot open table file: " + path);
  json doc = json::parse(in);
  auto grid = parse_angle_row(doc.at("grid"));
  std::map<Int, std::vector<CirclePoint>> table;
  for (const auto& [key, row] : doc.at("f").items()) {
    table[Int(key)] = parse_angle_row(row);
  }
  std::vector<CirclePoint> limit;
  if (doc.contains("g")) limit = parse_angle_row(doc.at("g"));
  return GridInstance::from_table(std::move(grid), std::move(table), std::move(limit), k_max);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"powerseq: exact and Monte Carlo experiments on power-sequence convergence\n"
               "in the circle group, O(2), and the solenoid"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("--seed", seed, "PRNG seed for Monte Carlo runs")
      ->envname("POWERSEQ_SEED")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker thread cap (results are thread-count independent)")
      ->capture_default_str();

  // classify-set
  std::string set_text, filter_text, horizon_text = "1000000";
  auto* classify = app.add_subcommand("classify-set", "thinness, Hadamard and density verdicts");
  classify->add_option("set", set_text, "set descriptor, e.g. factshift(1)")->required();
  classify->add_option("--horizon", horizon_text, "window for empirical density");

  // density
  auto* dens = app.add_subcommand("density", "asymptotic density verdict");
  dens->add_option("set", set_text, "set descriptor")->required();
  dens->add_option("--horizon", horizon_text, "window for empirical estimates");

  // filter-member
  auto* member = app.add_subcommand("filter-member", "decide membership of a set in a filter");
  member->add_option("filter", filter_text, "filter descriptor, e.g. niceF or principal(factorial)")
      ->required();
  member->add_option("set", set_text, "set descriptor")->required();

  // converge
  std::string angle_text;
  bool reflection = false;
  std::uint64_t budget = 64;
  auto* conv = app.add_subcommand("converge", "decide x^n -> 1 along a set or filter");
  conv->add_option("angle", angle_text, "angle of x in turns, e.g. 1/5")->required();
  conv->add_option("--set", set_text, "index set descriptor");
  conv->add_option("--filter", filter_text, "filter descriptor");
  conv->add_flag("--reflection", reflection, "treat x as the reflection with this angle in O(2)");
  conv->add_option("--budget", budget, "member search budget for generated filters");

  // measure
  std::string eps_text = "1/10", plot_path;
  std::size_t depth = 5, interval_budget = 1'000'000;
  std::uint64_t samples = 100'000;
  auto* meas = app.add_subcommand("measure",
                                  "exact measure sequence of the near-1 constraint intersection");
  meas->add_option("--set", set_text, "constraint exponent set")->required();
  meas->add_option("--eps", eps_text, "tolerance")->capture_default_str();
  meas->add_option("--depth", depth, "number of constraints")->capture_default_str();
  meas->add_option("--samples", samples, "Monte Carlo cross-check samples")->capture_default_str();
  meas->add_option("--interval-budget", interval_budget, "interval count budget")
      ->capture_default_str();
  meas->add_option("--plot-data", plot_path, "write the measure sequence as CSV");

  // solenoid-build
  std::string target_text = "1/2";
  std::size_t stages = 6;
  auto* sol = app.add_subcommand("solenoid-build",
                                 "run the two-limit construction with a certified error bound");
  sol->add_option("--set", set_text, "thin index set (default tail(factorial,1))");
  sol->add_option("--stages", stages, "stage count")->capture_default_str();
  sol->add_option("--target", target_text, "rational embedded as the limit along even stages")
      ->capture_default_str();

  // cover
  std::string table_path;
  std::string cover_order_max = "6";
  std::size_t cover_k_max = 3;
  std::string cover_horizon = "10000";
  auto* cov = app.add_subcommand("cover", "finite-stage cover search on a torsion grid");
  cov->add_option("--order-max", cover_order_max, "largest torsion order in the grid")
      ->capture_default_str();
  cov->add_option("--k-max", cover_k_max, "deepest tuple length")->capture_default_str();
  cov->add_option("--horizon", cover_horizon, "candidate exponent horizon")->capture_default_str();
  cov->add_option("--table", table_path, "JSON function table instead of the power maps");

  // experiment
  std::string experiment_name;
  std::string q_max_text, constraints_text, k_max_text, order_max_text, exp_horizon_text,
      exp_eps_text, exp_target_text;
  std::uint64_t exp_samples = 0, exp_depth = 0, exp_stages = 0;
  auto* exp = app.add_subcommand("experiment", "run a named experiment and report pass/fail");
  exp->add_option("name", experiment_name, "one of the registered experiments")->required();
  exp->add_option("--q-max", q_max_text, "largest torsion order");
  exp->add_option("--eps", exp_eps_text, "tolerance");
  exp->add_option("--depth", exp_depth, "constraint depth");
  exp->add_option("--samples", exp_samples, "Monte Carlo samples");
  exp->add_option("--constraints", constraints_text, "number of even-exponent constraints");
  exp->add_option("--stages", exp_stages, "solenoid build stages");
  exp->add_option("--target", exp_target_text, "solenoid target rational");
  exp->add_option("--k-max", k_max_text, "cover tuple depth / torsion bound");
  exp->add_option("--order-max", order_max_text, "largest torsion order in the grid");
  exp->add_option("--horizon", exp_horizon_text, "cover candidate horizon");
  exp->add_option("--plot-data", plot_path, "CSV sidecar for measure-type experiments");

  auto* list = app.add_subcommand("experiments", "list registered experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (*classify) {
      OmegaSet s = parse_set_descriptor(set_text);
      json rep = shell("classify-set", seed);
      rep["inputs"] = json{{"set", print_set(s)}, {"horizon", horizon_text}};
      rep["thin"] = thin_json(is_thin(s));
      rep["hadamard"] = hadamard_json(is_hadamard(s));
      rep["density"] = density_json(density(s, Int(horizon_text)));
      emit(rep);
    } else if (*dens) {
      OmegaSet s = parse_set_descriptor(set_text);
      json rep = shell("density", seed);
      rep["inputs"] = json{{"set", print_set(s)}, {"horizon", horizon_text}};
      rep["density"] = density_json(density(s, Int(horizon_text)));
      emit(rep);
    } else if (*member) {
      FilterSpec f = parse_filter_descriptor(filter_text);
      OmegaSet s = parse_set_descriptor(set_text);
      json rep = shell("filter-member", seed);
      rep["inputs"] = json{{"filter", print_filter(f)}, {"set", print_set(s)}};
      rep["membership"] = membership_json(filter_member(f, s));
      emit(rep);
    } else if (*conv) {
      if (set_text.empty() == filter_text.empty())
        throw error("converge: give exactly one of --set or --filter");
      CirclePoint x(rat_from_string(angle_text));
      json rep = shell("converge", seed);
      json verdict;
      if (!set_text.empty()) {
        OmegaSet b = parse_set_descriptor(set_text);
        rep["inputs"] = json{{"angle", rat_json(x.angle())},
                             {"reflection", reflection},
                             {"set", print_set(b)}};
        verdict = reflection ? verdict_json(in_C_B_orth(OrthElement{x, true}, b))
                             : verdict_json(in_C_B(x, b));
      } else {
        if (reflection) throw error("converge: --reflection applies only with --set");
        FilterSpec f = parse_filter_descriptor(filter_text);
        rep["inputs"] = json{{"angle", rat_json(x.angle())}, {"filter", print_filter(f)}};
        verdict = verdict_json(in_D_F(x, f, budget));
      }
      rep["verdict"] = verdict;
      emit(rep);
    } else if (*meas) {
      OmegaSet b = parse_set_descriptor(set_text);
      Rat eps = rat_from_string(eps_text);
      auto report = c_set_approx(b, eps, depth, interval_budget);
      attach_mc_cross_check(report, samples, seed, threads);
      json rep = shell("measure", seed);
      rep["inputs"] = json{{"set", print_set(b)}, {"eps", rat_json(eps)}, {"depth", depth}};
      rep["measure_report"] = measure_report_json(report);
      if (!plot_path.empty()) write_file(plot_path, measure_csv(report));
      emit(rep);
    } else if (*sol) {
      OmegaSet a_spec =
          set_text.empty() ? OmegaSet::tail(OmegaSet::factorial(), 1) : parse_set_descriptor(set_text);
      auto schedule = make_schedule(a_spec, stages);
      unsigned top = *std::max_element(schedule.gamma.begin(), schedule.gamma.end());
      SolenoidElement v = embed_rational(rat_from_string(target_text), top + 2);
      SolenoidElement w = SolenoidElement::identity(top + 2);
      std::vector<bool> mask(stages + 1);
      for (std::size_t j = 0; j <= stages; ++j) mask[j] = (j % 2 == 0);
      auto [z, cert] = build(schedule, mask, v, w);
      json rep = shell("solenoid-build", seed);
      rep["inputs"] = json{{"set", print_set(a_spec)},
                           {"stages", stages},
                           {"target", target_text},
                           {"mask", "even stages aim at the target, odd at the identity"}};
      json levels = json::array();
      for (const auto& c : z.levels) levels.push_back(rat_json(c.angle()));
      rep["element_levels"] = levels;
      rep["certificate"] = build_certificate_json(cert);
      emit(rep);
      rc = cert.all_ok ? 0 : 1;
    } else if (*cov) {
      GridInstance inst =
          table_path.empty()
              ? GridInstance::power_maps(torsion_grid(Int(cover_order_max)), cover_k_max)
              : load_table_instance(table_path, cover_k_max);
      auto res = select_covers(inst, Int(cover_horizon));
      json rep = shell("cover", seed);
      rep["inputs"] = json{{"grid_size", inst.grid.size()},
                           {"k_max", cover_k_max},
                           {"horizon", cover_horizon},
                           {"table", table_path.empty() ? "power maps" : table_path}};
      rep["cover"] = cover_json(res);
      emit(rep);
      bool ok = true;
      for (bool v : res.stage_verified) ok = ok && v;
      rc = ok ? 0 : 1;
    } else if (*exp) {
      json params;
      if (!q_max_text.empty()) params["q_max"] = q_max_text;
      if (!exp_eps_text.empty()) params["eps"] = exp_eps_text;
      if (exp_depth) params["depth"] = exp_depth;
      if (exp_samples) params["samples"] = exp_samples;
      if (!constraints_text.empty()) params["constraints"] = Int(constraints_text).convert_to<std::uint64_t>();
      if (exp_stages) params["stages"] = exp_stages;
      if (!exp_target_text.empty()) params["target"] = exp_target_text;
      if (!k_max_text.empty()) params["k_max"] = k_max_text;
      if (!order_max_text.empty()) params["order_max"] = order_max_text;
      if (!exp_horizon_text.empty()) params["horizon"] = exp_horizon_text;
      auto result = run_experiment(experiment_name, params, seed, threads);
      if (!plot_path.empty() && result.report.contains("results") &&
          result.report["results"].contains("measure_report")) {
        // reconstruct the CSV from the serialized sequence
        std::ostringstream csv;
        csv << "step,constraint,measure_num,measure_den\n";
        const auto& mr = result.report["results"]["measure_report"];
        for (std::size_t i = 0; i < mr["exact_sequence"].size(); ++i) {
          csv << i + 1 << "," << mr["constraints"][i].get<std::string>() << ","
              << mr["exact_sequence"][i][0].get<std::string>() << ","
              << mr["exact_sequence"][i][1].get<std::string>() << "\n";
        }
        write_file(plot_path, csv.str());
      }
      emit(result.report);
      rc = result.exit_code();
    } else if (*list) {
      json rep = shell("experiments", seed);
      rep["names"] = experiment_names();
      emit(rep);
    }
  } catch (const parse_error& e) {
    std::cerr << "descriptor error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  std::cerr << "elapsed_ms=" << elapsed.count() << "\n";
  return rc;
}
