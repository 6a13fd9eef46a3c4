#include "ffsym/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ffsym/util.hpp"

namespace ffsym {

Json nonlinearity_to_json(const Nonlinearity& rho) {
  Json j;
  j["kind"] = rho_name(rho);
  if (rho.kind == RhoKind::Zab) {
    j["a"] = rho.zab.a;
    j["b"] = rho.zab.b;
    j["constant"] = rho.zab.constant;
    Json coeffs = Json::array();
    for (const auto& [k, c] : rho.zab.coeffs) coeffs.push_back(Json::array({k, c}));
    j["coeffs"] = coeffs;
  }
  return j;
}

Nonlinearity nonlinearity_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "tanh") return tanh_rho();
  if (kind == "crelu") return crelu_rho();
  if (kind == "zab") {
    ZabSeries z;
    z.a = j.at("a").get<double>();
    z.b = j.at("b").get<double>();
    z.constant = j.value("constant", 0.0);
    for (const auto& pair : j.at("coeffs"))
      z.coeffs[pair.at(0).get<int>()] = pair.at(1).get<double>();
    if (z.a <= 0.0 || z.b <= 0.0)
      throw std::runtime_error("zab parameters a, b must be positive");
    return zab_rho(std::move(z));
  }
  throw std::runtime_error("unknown nonlinearity kind '" + kind + "'");
}

Json network_to_json(const Network& net) {
  Json j;
  j["dim_out"] = net.dim_out;
  j["nonlinearity"] = nonlinearity_to_json(net.rho);
  Json nodes = Json::array();
  for (const auto& v : net.inputs) nodes.push_back(Json{{"id", v}});
  for (const auto& [v, b] : net.bias) nodes.push_back(Json{{"id", v}, {"bias", b}});
  j["nodes"] = nodes;
  j["inputs"] = net.inputs;
  Json edges = Json::array();
  for (const auto& [u, ps] : net.in_edges)
    for (const auto& [p, w] : ps)
      edges.push_back(Json{{"from", p}, {"to", u}, {"weight", w}});
  j["edges"] = edges;
  Json outputs = Json::array();
  for (const auto& [w, scal] : net.outputs)
    outputs.push_back(Json{{"node", w}, {"scalars", scal}});
  j["outputs"] = outputs;
  j["constants"] = net.constants;
  return j;
}

Network network_from_json(const Json& j) {
  Network net;
  net.dim_out = j.at("dim_out").get<int>();
  net.rho = nonlinearity_from_json(j.at("nonlinearity"));
  std::set<NodeId> declared_inputs;
  for (const auto& v : j.at("inputs")) declared_inputs.insert(v.get<std::string>());
  for (const auto& node : j.at("nodes")) {
    NodeId id = node.at("id").get<std::string>();
    if (node.contains("bias")) {
      if (declared_inputs.count(id))
        throw std::runtime_error("node '" + id + "' is listed as input but carries a bias");
      net.bias[id] = node.at("bias").get<double>();
    } else {
      if (!declared_inputs.count(id))
        throw std::runtime_error("node '" + id + "' has no bias but is not listed as input");
      net.inputs.insert(id);
    }
  }
  if (net.inputs != declared_inputs)
    throw std::runtime_error("inputs list does not match the bias-free nodes");
  for (const auto& e : j.at("edges")) {
    NodeId from = e.at("from").get<std::string>();
    NodeId to = e.at("to").get<std::string>();
    double w = e.at("weight").get<double>();
    if (net.in_edges[to].count(from))
      throw std::runtime_error("duplicate edge " + from + " -> " + to);
    net.in_edges[to][from] = w;
  }
  for (const auto& o : j.at("outputs")) {
    NodeId w = o.at("node").get<std::string>();
    net.outputs[w] = o.at("scalars").get<std::vector<double>>();
  }
  net.constants = j.at("constants").get<std::vector<double>>();
  return net;
}

Json symmetry_to_json(const AffineSymmetry& sym) {
  Json terms = Json::array();
  for (const auto& t : sym.terms) terms.push_back(Json::array({t.alpha, t.beta, t.gamma}));
  return Json{{"zeta", sym.zeta}, {"terms", terms}};
}

AffineSymmetry symmetry_from_json(const Json& j) {
  AffineSymmetry sym;
  sym.zeta = j.at("zeta").get<double>();
  for (const auto& t : j.at("terms"))
    sym.terms.push_back({t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>()});
  return sym;
}

Json plan_to_json(const ModificationPlan& plan) {
  Json a = Json::array();
  for (std::size_t i = 0; i < plan.a_nodes.size(); ++i)
    a.push_back(Json{{"node", plan.a_nodes[i]}, {"alpha", plan.a_alphas[i]}});
  Json b = Json::array();
  for (std::size_t i = 0; i < plan.b_nodes.size(); ++i)
    b.push_back(Json{{"node", plan.b_nodes[i]}, {"alpha", plan.b_alphas[i]}});
  Json c = Json::array();
  for (const auto& t : plan.c_terms)
    c.push_back(Json{{"id", t.id}, {"alpha", t.alpha}, {"beta", t.beta}, {"gamma", t.gamma}});
  return Json{{"a", a}, {"b", b}, {"c", c}, {"zeta", plan.zeta}};
}

ModificationPlan plan_from_json(const Json& j) {
  ModificationPlan plan;
  for (const auto& e : j.at("a")) {
    plan.a_nodes.push_back(e.at("node").get<std::string>());
    plan.a_alphas.push_back(e.at("alpha").get<double>());
  }
  for (const auto& e : j.at("b")) {
    plan.b_nodes.push_back(e.at("node").get<std::string>());
    plan.b_alphas.push_back(e.at("alpha").get<double>());
  }
  for (const auto& e : j.at("c"))
    plan.c_terms.push_back({e.at("id").get<std::string>(), e.at("alpha").get<double>(),
                            e.at("beta").get<double>(), e.at("gamma").get<double>()});
  plan.zeta = j.at("zeta").get<double>();
  return plan;
}

Json cloud_to_json(const std::vector<Pole>& poles) {
  Json pts = Json::array();
  for (const auto& p : poles)
    pts.push_back(Json{{"re", p.position.real()},
                       {"im", p.position.imag()},
                       {"residue_re", p.residue.real()},
                       {"residue_im", p.residue.imag()}});
  return Json{{"points", pts}};
}

std::vector<Pole> cloud_from_json(const Json& j) {
  std::vector<Pole> out;
  for (const auto& p : j.at("points"))
    out.push_back({{p.at("re").get<double>(), p.at("im").get<double>()},
                   {p.value("residue_re", 0.0), p.value("residue_im", 0.0)}});
  return out;
}

std::string cloud_to_csv(const std::vector<Pole>& poles) {
  std::string out = "re,im,residue_re,residue_im\n";
  for (const auto& p : poles) {
    out += fmt_double(p.position.real()) + "," + fmt_double(p.position.imag()) + "," +
           fmt_double(p.residue.real()) + "," + fmt_double(p.residue.imag()) + "\n";
  }
  return out;
}

std::vector<Pole> cloud_from_csv(const std::string& text) {
  std::vector<Pole> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find("re") == 0 || line.find("\"re\"") == 0) continue;
    }
    double re = 0, im = 0, rre = 0, rim = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &re, &im, &rre, &rim) < 2)
      throw std::runtime_error("bad csv line: " + line);
    out.push_back({{re, im}, {rre, rim}});
  }
  return out;
}

Json witness_to_json(const ReductionWitness& w) {
  Json kappa;
  for (const auto& [v, k] : w.kappa) kappa[v] = k;
  return Json{{"group", w.group},
              {"removed", w.removed},
              {"kappa", kappa},
              {"symmetry", symmetry_to_json(w.sym)}};
}

Json sign_witness_to_json(const SignWitness& w) {
  Json mapping, sign;
  for (const auto& [a, b] : w.mapping) mapping[a] = b;
  for (const auto& [a, s] : w.sign) sign[a] = s;
  return Json{{"mapping", mapping}, {"sign", sign}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

Network load_network_file(const std::string& path) {
  try {
    return network_from_json(load_json_file(path));
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("bad network in " + path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ffsym
