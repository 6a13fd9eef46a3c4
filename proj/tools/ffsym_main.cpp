#include <complex>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ffsym/complexan.hpp"
#include "ffsym/evaluate.hpp"
#include "ffsym/network.hpp"
#include "ffsym/nonlinearity.hpp"
#include "ffsym/rewrite.hpp"
#include "ffsym/serialization.hpp"
#include "ffsym/symmetry.hpp"
#include "ffsym/util.hpp"

using ffsym::Json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + item + "' in '" + csv + "'");
    }
    if (used != item.size()) throw UsageError("bad number '" + item + "' in '" + csv + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty number list '" + csv + "'");
  return out;
}

std::string fmt(double x) { return ffsym::fmt_double(x); }

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += " ";
    out += fmt(xs[i]);
  }
  return out;
}

void emit_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

ffsym::Nonlinearity rho_from_file_json(const Json& j) {
  return ffsym::nonlinearity_from_json(j.contains("rho") ? j.at("rho") : j);
}

std::vector<ffsym::SymTerm> terms_from_json(const Json& j) {
  std::vector<ffsym::SymTerm> terms;
  for (const auto& t : j)
    terms.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
  return terms;
}

ffsym::PointCloud cloud_from_file(const std::string& path) {
  std::vector<ffsym::Pole> poles;
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    poles = ffsym::cloud_from_csv(buf.str());
  } else {
    poles = ffsym::cloud_from_json(ffsym::load_json_file(path));
  }
  ffsym::PointCloud cloud;
  for (const auto& p : poles) cloud.push_back(p.position);
  return cloud;
}

Json cloud_points_json(const ffsym::PointCloud& cloud) {
  Json pts = Json::array();
  for (const auto& p : cloud) pts.push_back(Json{{"re", p.real()}, {"im", p.imag()}});
  return pts;
}

struct Options {
  std::string format = "text";
  uint32_t seed = 42;
  double tol = 1e-9;
  bool tol_set = false;
  int grid = 100;
  double window = 20.0;
  int budget = 4;
  int samples = 100;
  std::string out;
};

int run_validate(const Options& opt, const std::string& net_path) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::RegularityReport rep = ffsym::regularity_report(net);
  if (opt.format == "json") {
    emit_json(Json{{"valid", rep.valid},
                   {"violations", rep.violations},
                   {"non_degenerate", rep.non_degenerate},
                   {"strongly_non_degenerate", rep.strongly_non_degenerate},
                   {"irreducible", rep.irreducible},
                   {"regular", rep.regular},
                   {"trivial", rep.trivial}});
  } else {
    if (rep.valid) {
      std::cout << "valid\n";
      std::cout << "regular " << (rep.regular ? "true" : "false") << "\n";
      std::cout << "strongly_non_degenerate " << (rep.strongly_non_degenerate ? "true" : "false")
                << "\n";
    } else {
      for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
    }
  }
  return rep.valid ? 0 : 1;
}

int run_eval(const Options& opt, const std::string& net_path, const std::string& at) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  std::vector<double> values = parse_doubles(at);
  if (values.size() != net.inputs.size())
    throw UsageError("--at needs " + std::to_string(net.inputs.size()) + " values, got " +
                     std::to_string(values.size()));
  std::map<ffsym::NodeId, double> assign;
  std::size_t i = 0;
  for (const auto& v : net.inputs) assign[v] = values[i++];
  std::vector<double> out = ffsym::eval_map(net, assign);
  if (opt.format == "json")
    emit_json(Json{{"at", values}, {"values", out}});
  else
    std::cout << join_doubles(out) << "\n";
  return 0;
}

int run_reduce(const Options& opt, const std::string& net_path) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::ReduceResult res = ffsym::reduce_to_regular(net);
  if (!opt.out.empty()) ffsym::save_json_file(opt.out, ffsym::network_to_json(res.net));
  if (opt.format == "json") {
    Json log = Json::array();
    for (const auto& e : res.log)
      log.push_back(Json{{"op", e.op}, {"inputs", e.inputs}, {"result_hash", e.result_hash}});
    emit_json(Json{{"steps", res.log.size()},
                   {"log", log},
                   {"hash", ffsym::network_hash(res.net)},
                   {"network", ffsym::network_to_json(res.net)}});
  } else {
    for (const auto& e : res.log) {
      std::cout << "step " << e.op;
      for (const auto& v : e.inputs) std::cout << " " << v;
      std::cout << " -> " << e.result_hash << "\n";
    }
    std::cout << "steps " << res.log.size() << "\n";
    std::cout << "hash " << ffsym::network_hash(res.net) << "\n";
  }
  return 0;
}

int run_modify(const Options& opt, const std::string& net_path, const std::string& plan_path,
               bool do_invert) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::ModificationPlan plan = ffsym::plan_from_json(ffsym::load_json_file(plan_path));
  ffsym::Network result = ffsym::apply_modification(net, plan);
  if (do_invert) {
    ffsym::ModificationPlan inverse = ffsym::invert_modification(net, plan, result);
    ffsym::Network back = ffsym::apply_modification(result, inverse);
    if (!opt.out.empty()) ffsym::save_json_file(opt.out, ffsym::plan_to_json(inverse));
    bool same = ffsym::network_hash(back) == ffsym::network_hash(net);
    if (opt.format == "json")
      emit_json(Json{{"inverse", ffsym::plan_to_json(inverse)},
                     {"round_trip_hash_equal", same},
                     {"result_hash", ffsym::network_hash(result)}});
    else {
      std::cout << "result_hash " << ffsym::network_hash(result) << "\n";
      std::cout << "round_trip_hash_equal " << (same ? "true" : "false") << "\n";
    }
    return same ? 0 : 1;
  }
  if (!opt.out.empty()) ffsym::save_json_file(opt.out, ffsym::network_to_json(result));
  if (opt.format == "json")
    emit_json(Json{{"hash", ffsym::network_hash(result)},
                   {"network", ffsym::network_to_json(result)}});
  else
    std::cout << "hash " << ffsym::network_hash(result) << "\n";
  return 0;
}

int run_iso_sign(const Options& opt, const std::string& a_path, const std::string& b_path) {
  ffsym::Network a = ffsym::load_network_file(a_path);
  ffsym::Network b = ffsym::load_network_file(b_path);
  ffsym::SignIsoResult res = opt.tol_set ? ffsym::sign_isomorphic(a, b, opt.tol)
                                         : ffsym::sign_isomorphic(a, b);
  std::string status = res.status == ffsym::SearchStatus::Found        ? "found"
                       : res.status == ffsym::SearchStatus::OverBudget ? "over-budget"
                                                                       : "none";
  if (opt.format == "json") {
    Json j{{"status", status}};
    if (res.witness) j["witness"] = ffsym::sign_witness_to_json(*res.witness);
    emit_json(j);
  } else {
    std::cout << status << "\n";
    if (res.witness)
      for (const auto& [v, w] : res.witness->mapping)
        std::cout << v << " -> " << w << " sign " << res.witness->sign.at(v) << "\n";
  }
  return res.status == ffsym::SearchStatus::Found ? 0 : 1;
}

int run_iso_rho(const Options& opt, const std::string& a_path, const std::string& b_path) {
  ffsym::Network a = ffsym::load_network_file(a_path);
  ffsym::Network b = ffsym::load_network_file(b_path);
  ffsym::RhoIsoResult res = ffsym::rho_isomorphic_bounded(a, b, opt.budget);
  std::string status = res.status == ffsym::SearchStatus::Found        ? "found"
                       : res.status == ffsym::SearchStatus::OverBudget ? "over-budget"
                                                                       : "none";
  if (opt.format == "json") {
    Json chain = Json::array();
    for (const auto& step : res.chain)
      chain.push_back(
          Json{{"plan", ffsym::plan_to_json(step.plan)}, {"result_hash", step.result_hash}});
    Json j{{"status", status}, {"chain", chain}, {"detail", res.detail}};
    if (res.join) j["join"] = ffsym::sign_witness_to_json(*res.join);
    emit_json(j);
  } else {
    std::cout << status << "\n";
    if (!res.detail.empty()) std::cout << "detail " << res.detail << "\n";
    std::cout << "chain_length " << res.chain.size() << "\n";
    for (const auto& step : res.chain) std::cout << "step -> " << step.result_hash << "\n";
  }
  return res.status == ffsym::SearchStatus::Found ? 0 : 1;
}

int run_anchor(const Options& opt, const std::string& net_path, const std::string& input_id,
               double value) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::AnchorResult res = ffsym::anchor_input(net, input_id, value);
  if (!opt.out.empty()) ffsym::save_json_file(opt.out, ffsym::network_to_json(res.net));
  if (opt.format == "json") {
    Json dropped_values;
    for (const auto& [v, x] : res.dropped_values) dropped_values[v] = x;
    emit_json(Json{{"dropped", res.dropped},
                   {"dropped_values", dropped_values},
                   {"warnings", res.warnings},
                   {"hash", ffsym::network_hash(res.net)},
                   {"network", ffsym::network_to_json(res.net)}});
  } else {
    std::cout << "anchored " << input_id << " at " << fmt(value) << "\n";
    for (const auto& v : res.dropped) std::cout << "dropped " << v << "\n";
    for (const auto& w : res.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "hash " << ffsym::network_hash(res.net) << "\n";
  }
  return 0;
}

int run_anchor_search(const Options& opt, const std::string& net_path,
                      const std::string& input_id) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  std::vector<double> samples =
      ffsym::seeded_uniform(opt.seed, static_cast<std::size_t>(opt.samples), -10.0, 10.0);
  ffsym::AnchorSearchResult res = ffsym::anchor_search(net, input_id, samples);
  if (opt.format == "json") {
    Json j{{"found", res.found},
           {"samples_tried", res.samples_tried},
           {"warnings", res.warnings}};
    if (res.found) {
      j["a_star"] = res.a_star;
      j["regular"] = res.regular;
    }
    emit_json(j);
  } else {
    if (res.found)
      std::cout << "a_star " << fmt(res.a_star) << " after " << res.samples_tried
                << " samples\n";
    else
      std::cout << "exhausted " << res.samples_tried << " samples\n";
  }
  return res.found ? 0 : 1;
}

int run_zero_probe(const Options& opt, const std::string& net_path) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::ZeroProbeResult res = ffsym::zero_map_probe(net, opt.grid, opt.seed);
  if (opt.format == "json")
    emit_json(Json{{"max_abs", res.max_abs},
                   {"zero_on_grid", res.zero_on_grid},
                   {"points", res.points}});
  else
    std::cout << "max_abs " << fmt(res.max_abs) << " points " << res.points << " zero_on_grid "
              << (res.zero_on_grid ? "true" : "false") << "\n";
  return res.zero_on_grid ? 0 : 1;
}

int run_poles(const Options& opt, const std::string& path) {
  Json j = ffsym::load_json_file(path);
  if (j.contains("nodes")) {
    ffsym::Network net = ffsym::network_from_json(j);
    ffsym::SingleLayerPoleReport rep = ffsym::single_layer_pole_check(net, opt.window);
    if (opt.format == "json")
      emit_json(Json{{"confirmed", ffsym::cloud_to_json(rep.confirmed)},
                     {"ambiguous", ffsym::cloud_to_json(rep.ambiguous)},
                     {"pruned", rep.pruned},
                     {"all_confirmed", rep.all_confirmed}});
    else if (opt.format == "csv")
      std::cout << ffsym::cloud_to_csv(rep.confirmed);
    else {
      std::cout << "confirmed " << rep.confirmed.size() << " ambiguous " << rep.ambiguous.size()
                << " pruned " << rep.pruned << " all_confirmed "
                << (rep.all_confirmed ? "true" : "false") << "\n";
      for (const auto& p : rep.confirmed)
        std::cout << fmt(p.position.real()) << " " << fmt(p.position.imag()) << " residue "
                  << fmt(p.residue.real()) << " " << fmt(p.residue.imag()) << "\n";
    }
    return rep.all_confirmed ? 0 : 1;
  }
  ffsym::Nonlinearity rho = rho_from_file_json(j);
  std::vector<ffsym::Pole> lattice = ffsym::pole_lattice(rho, opt.window);
  if (opt.format == "json")
    emit_json(ffsym::cloud_to_json(lattice));
  else if (opt.format == "csv")
    std::cout << ffsym::cloud_to_csv(lattice);
  else {
    std::cout << "poles " << lattice.size() << "\n";
    for (const auto& p : lattice)
      std::cout << fmt(p.position.real()) << " " << fmt(p.position.imag()) << " residue "
                << fmt(p.residue.real()) << " " << fmt(p.residue.imag()) << "\n";
  }
  return 0;
}

int run_cluster(const Options& opt, const std::string& path) {
  ffsym::PointCloud cloud = cloud_from_file(path);
  ffsym::ClusterReport rep = ffsym::cluster_depth(cloud, ffsym::default_eps_schedule());
  if (opt.format == "json")
    emit_json(Json{{"schedule", rep.schedule},
                   {"depths", rep.depths},
                   {"stabilized", rep.stabilized},
                   {"value", rep.value}});
  else {
    for (std::size_t i = 0; i < rep.schedule.size(); ++i)
      std::cout << "eps " << fmt(rep.schedule[i]) << " depth " << rep.depths[i] << "\n";
    std::cout << "stabilized " << (rep.stabilized ? "true" : "false") << "\n";
    std::cout << "value " << rep.value << "\n";
  }
  return 0;
}

int run_density(const Options& opt, const std::string& path, const std::string& line_spec,
                const std::string& ref_path, double eps) {
  ffsym::PointCloud cloud = cloud_from_file(path);
  double density = 0.0;
  if (!line_spec.empty()) {
    std::vector<double> v = parse_doubles(line_spec);
    if (v.size() != 4) throw UsageError("--line needs re,im,dre,dim");
    density = ffsym::density_along(cloud, ffsym::LineSpec{{v[0], v[1]}, {v[2], v[3]}}, eps,
                                   opt.window);
  } else if (!ref_path.empty()) {
    density = ffsym::density_along(cloud, cloud_from_file(ref_path), eps, opt.window);
  } else {
    throw UsageError("density needs --line or --ref");
  }
  if (opt.format == "json")
    emit_json(Json{{"eps", eps}, {"window", opt.window}, {"density", density}});
  else if (opt.format == "csv")
    std::cout << "eps,window,density\n"
              << fmt(eps) << "," << fmt(opt.window) << "," << fmt(density) << "\n";
  else
    std::cout << "density " << fmt(density) << "\n";
  return 0;
}

int run_partition(const Options& opt, const std::string& path) {
  Json j = ffsym::load_json_file(path);
  ffsym::Nonlinearity rho = rho_from_file_json(j);
  std::vector<ffsym::SymTerm> terms = terms_from_json(j.at("terms"));
  ffsym::PartitionReport rep = ffsym::alignment_partition(rho, terms);
  if (opt.format == "json") {
    Json parts = Json::array();
    for (const auto& part : rep.parts)
      parts.push_back(Json{{"term_indices", part.term_indices},
                           {"residues_cancel", part.residues_cancel}});
    emit_json(Json{{"parts", parts}, {"combination_entire", rep.combination_entire}});
  } else {
    for (std::size_t i = 0; i < rep.parts.size(); ++i) {
      std::cout << "part " << i << ":";
      for (int t : rep.parts[i].term_indices) std::cout << " " << t;
      std::cout << " residues_cancel " << (rep.parts[i].residues_cancel ? "true" : "false")
                << "\n";
    }
    std::cout << "combination_entire " << (rep.combination_entire ? "true" : "false") << "\n";
  }
  return 0;
}

int run_sym_verify(const Options& opt, const std::string& path) {
  Json j = ffsym::load_json_file(path);
  ffsym::Nonlinearity rho = rho_from_file_json(j);
  ffsym::AffineSymmetry sym;
  sym.zeta = j.value("zeta", 0.0);
  sym.terms = terms_from_json(j.at("terms"));
  ffsym::VerifyReport rep = opt.tol_set ? ffsym::verify_symmetry(rho, sym, opt.tol)
                                        : ffsym::verify_symmetry(rho, sym);
  if (opt.format == "json")
    emit_json(Json{{"holds", rep.holds},
                   {"minimal", rep.minimal},
                   {"max_residual", rep.max_residual},
                   {"sv_min_ratio", rep.sv_min_ratio},
                   {"sv_second_ratio", rep.sv_second_ratio},
                   {"status", rep.status}});
  else
    std::cout << "holds " << (rep.holds ? "true" : "false") << " minimal "
              << (rep.minimal ? "true" : "false") << " residual " << fmt(rep.max_residual)
              << " status " << rep.status << "\n";
  return rep.holds ? 0 : 1;
}

int run_sym_discover(const Options& opt, const std::string& path) {
  Json j = ffsym::load_json_file(path);
  ffsym::Nonlinearity rho = rho_from_file_json(j);
  std::vector<std::pair<double, double>> beta_gamma;
  for (const auto& bg : j.at("beta_gamma"))
    beta_gamma.push_back({bg.at(0).get<double>(), bg.at(1).get<double>()});
  std::optional<int> required;
  if (j.contains("required")) required = j.at("required").get<int>();
  ffsym::DiscoveryResult res =
      opt.tol_set ? ffsym::discover_symmetry(rho, beta_gamma, required, opt.tol)
                  : ffsym::discover_symmetry(rho, beta_gamma, required);
  std::string status = res.status == ffsym::DiscoveryStatus::Found          ? "found"
                       : res.status == ffsym::DiscoveryStatus::Inconclusive ? "inconclusive"
                                                                            : "none";
  if (opt.format == "json") {
    Json out{{"status", status}, {"support", res.support}, {"detail", res.detail}};
    if (res.symmetry) out["symmetry"] = ffsym::symmetry_to_json(*res.symmetry);
    emit_json(out);
  } else {
    std::cout << status << "\n";
    if (!res.detail.empty()) std::cout << "detail " << res.detail << "\n";
    if (res.symmetry) {
      std::cout << "zeta " << fmt(res.symmetry->zeta) << "\n";
      for (const auto& t : res.symmetry->terms)
        std::cout << "term " << fmt(t.alpha) << " " << fmt(t.beta) << " " << fmt(t.gamma)
                  << "\n";
    }
  }
  return res.status == ffsym::DiscoveryStatus::Found ? 0 : 1;
}

int run_sym_exotic(const Options& opt, const std::string& alpha_spec) {
  std::vector<double> alphas = parse_doubles(alpha_spec);
  ffsym::ExoticResult res = ffsym::construct_exotic(alphas);
  Json sym_json{{"rho", ffsym::nonlinearity_to_json(ffsym::zab_rho(res.sigma))},
                {"zeta", res.symmetry.zeta},
                {"terms", ffsym::symmetry_to_json(res.symmetry).at("terms")}};
  if (!opt.out.empty()) ffsym::save_json_file(opt.out, sym_json);
  if (opt.format == "json")
    emit_json(Json{{"b", res.b},
                   {"truncation", res.truncation},
                   {"growth", res.growth},
                   {"unit_circle_root", res.unit_circle_root},
                   {"truncation_capped", res.truncation_capped},
                   {"zeta", res.zeta},
                   {"symmetry", sym_json}});
  else
    std::cout << "b " << fmt(res.b) << " truncation " << res.truncation << " growth "
              << fmt(res.growth) << " unit_circle_root "
              << (res.unit_circle_root ? "true" : "false") << " capped "
              << (res.truncation_capped ? "true" : "false") << " zeta " << fmt(res.zeta)
              << "\n";
  return 0;
}

int run_depth_scan(const Options& opt, const std::string& net_path) {
  ffsym::Network net = ffsym::load_network_file(net_path);
  ffsym::DepthScanReport rep =
      ffsym::empirical_cluster_vs_depth(net, opt.window, ffsym::default_eps_schedule());
  if (opt.format == "json")
    emit_json(Json{{"network_depth", rep.network_depth},
                   {"cluster_value", rep.cluster_value},
                   {"stabilized", rep.stabilized},
                   {"matches_depth", rep.matches_depth},
                   {"grid_evals", rep.grid_evals},
                   {"effective_schedule", rep.effective_schedule},
                   {"depths", rep.depths},
                   {"singularities", cloud_points_json(rep.singularities)}});
  else if (opt.format == "csv") {
    std::cout << "re,im,residue_re,residue_im\n";
    for (const auto& p : rep.singularities)
      std::cout << fmt(p.real()) << "," << fmt(p.imag()) << ",0,0\n";
  } else {
    std::cout << "network_depth " << rep.network_depth << " cluster_value " << rep.cluster_value
              << " stabilized " << (rep.stabilized ? "true" : "false") << " matches "
              << (rep.matches_depth ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < rep.effective_schedule.size(); ++i)
      std::cout << "eps " << fmt(rep.effective_schedule[i]) << " depth " << rep.depths[i]
                << "\n";
    std::cout << "singularities " << rep.singularities.size() << " evals " << rep.grid_evals
              << "\n";
  }
  return rep.matches_depth ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feed-forward network symmetry toolkit"};
  app.require_subcommand(1);

  Options opt;
  int rc = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Output format: json, csv or text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--seed", opt.seed, "Seed for all derived randomness");
    sub->add_option("--tol", opt.tol, "Map tolerance")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { opt.tol_set = true; });
    sub->add_option("--grid", opt.grid, "Grid points")->check(CLI::PositiveNumber);
    sub->add_option("--window", opt.window, "Complex window half-width")
        ->check(CLI::PositiveNumber);
    return sub;
  };

  std::string net_path, second_path, at_spec, input_id, line_spec, ref_path, alpha_spec;
  double anchor_value = 0.0;
  double eps = 0.5;

  CLI::App* validate = add_common(app.add_subcommand("validate", "Check a network file"));
  validate->add_option("network", net_path)->required();
  validate->callback([&] { rc = run_validate(opt, net_path); });

  CLI::App* eval = add_common(app.add_subcommand("eval", "Evaluate the map at a point"));
  eval->add_option("network", net_path)->required();
  eval->add_option("--at", at_spec, "Comma-separated input values")->required();
  eval->callback([&] { rc = run_eval(opt, net_path, at_spec); });

  CLI::App* reduce = add_common(app.add_subcommand("reduce", "Reduce to a regular network"));
  reduce->add_option("network", net_path)->required();
  reduce->add_option("--out", opt.out, "Write the reduced network here");
  reduce->callback([&] { rc = run_reduce(opt, net_path); });

  CLI::App* modify = add_common(app.add_subcommand("modify", "Apply a modification plan"));
  modify->add_option("network", net_path)->required();
  modify->add_option("plan", second_path)->required();
  modify->add_option("--out", opt.out, "Write the modified network here");
  modify->callback([&] { rc = run_modify(opt, net_path, second_path, false); });

  CLI::App* invert = add_common(
      app.add_subcommand("invert", "Invert a plan against its result and round-trip"));
  invert->add_option("network", net_path)->required();
  invert->add_option("plan", second_path)->required();
  invert->add_option("--out", opt.out, "Write the inverse plan here");
  invert->callback([&] { rc = run_modify(opt, net_path, second_path, true); });

  CLI::App* iso_sign =
      add_common(app.add_subcommand("iso-sign", "Sign-isomorphism witness search"));
  iso_sign->add_option("first", net_path)->required();
  iso_sign->add_option("second", second_path)->required();
  iso_sign->callback([&] { rc = run_iso_sign(opt, net_path, second_path); });

  CLI::App* iso_rho =
      add_common(app.add_subcommand("iso-rho", "Bounded modification-chain search"));
  iso_rho->add_option("first", net_path)->required();
  iso_rho->add_option("second", second_path)->required();
  iso_rho->add_option("--budget", opt.budget, "Maximum chain length");
  iso_rho->callback([&] { rc = run_iso_rho(opt, net_path, second_path); });

  CLI::App* anchor = add_common(app.add_subcommand("anchor", "Anchor an input to a value"));
  anchor->add_option("network", net_path)->required();
  anchor->add_option("input", input_id)->required();
  anchor->add_option("value", anchor_value)->required();
  anchor->add_option("--out", opt.out, "Write the anchored network here");
  anchor->callback([&] { rc = run_anchor(opt, net_path, input_id, anchor_value); });

  CLI::App* anchor_search = add_common(
      app.add_subcommand("anchor-search", "Search anchor values giving a regular network"));
  anchor_search->add_option("network", net_path)->required();
  anchor_search->add_option("input", input_id)->required();
  anchor_search->add_option("--samples", opt.samples, "Number of seeded samples")
      ->check(CLI::PositiveNumber);
  anchor_search->callback([&] { rc = run_anchor_search(opt, net_path, input_id); });

  CLI::App* zero_probe =
      add_common(app.add_subcommand("zero-probe", "Probe whether the map is zero on a grid"));
  zero_probe->add_option("network", net_path)->required();
  zero_probe->callback([&] { rc = run_zero_probe(opt, net_path); });

  CLI::App* poles = add_common(
      app.add_subcommand("poles", "Pole cloud of a network read-out or a nonlinearity"));
  poles->add_option("file", net_path)->required();
  poles->callback([&] { rc = run_poles(opt, net_path); });

  CLI::App* cluster =
      add_common(app.add_subcommand("cluster", "Cluster depth of a point cloud"));
  cluster->add_option("cloud", net_path)->required();
  cluster->callback([&] { rc = run_cluster(opt, net_path); });

  CLI::App* density =
      add_common(app.add_subcommand("density", "Finite-window density along a line"));
  density->add_option("cloud", net_path)->required();
  density->add_option("--line", line_spec, "Line as re,im,dre,dim");
  density->add_option("--ref", ref_path, "Reference cloud file");
  density->add_option("--eps", eps, "Distance tolerance")->check(CLI::PositiveNumber);
  density->callback([&] { rc = run_density(opt, net_path, line_spec, ref_path, eps); });

  CLI::App* partition =
      add_common(app.add_subcommand("partition", "Alignment partition of symmetry terms"));
  partition->add_option("terms", net_path)->required();
  partition->callback([&] { rc = run_partition(opt, net_path); });

  CLI::App* sym_verify =
      add_common(app.add_subcommand("sym-verify", "Verify an affine symmetry"));
  sym_verify->add_option("symmetry", net_path)->required();
  sym_verify->callback([&] { rc = run_sym_verify(opt, net_path); });

  CLI::App* sym_discover =
      add_common(app.add_subcommand("sym-discover", "Discover a minimal symmetry"));
  sym_discover->add_option("candidates", net_path)->required();
  sym_discover->callback([&] { rc = run_sym_discover(opt, net_path); });

  CLI::App* sym_exotic =
      add_common(app.add_subcommand("sym-exotic", "Construct an exotic translate symmetry"));
  sym_exotic->add_option("--alpha", alpha_spec, "Comma-separated coefficients")->required();
  sym_exotic->add_option("--out", opt.out, "Write the symmetry (rho, zeta, terms) here");
  sym_exotic->callback([&] { rc = run_sym_exotic(opt, alpha_spec); });

  CLI::App* depth_scan = add_common(
      app.add_subcommand("depth-scan", "Empirical cluster depth against network depth"));
  depth_scan->add_option("network", net_path)->required();
  depth_scan->callback([&] { rc = run_depth_scan(opt, net_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cout << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
