#pragma once

#include <string>

#include <json.hpp>

#include "ffsym/complexan.hpp"
#include "ffsym/network.hpp"
#include "ffsym/rewrite.hpp"
#include "ffsym/symmetry.hpp"

namespace ffsym {

using Json = nlohmann::ordered_json;

Json network_to_json(const Network& net);
Network network_from_json(const Json& j);

Json nonlinearity_to_json(const Nonlinearity& rho);
Nonlinearity nonlinearity_from_json(const Json& j);

Json symmetry_to_json(const AffineSymmetry& sym);
AffineSymmetry symmetry_from_json(const Json& j);

Json plan_to_json(const ModificationPlan& plan);
ModificationPlan plan_from_json(const Json& j);

Json cloud_to_json(const std::vector<Pole>& poles);
std::vector<Pole> cloud_from_json(const Json& j);

// CSV with header re,im,residue_re,residue_im.
std::string cloud_to_csv(const std::vector<Pole>& poles);
std::vector<Pole> cloud_from_csv(const std::string& text);

Json witness_to_json(const ReductionWitness& w);
Json sign_witness_to_json(const SignWitness& w);

// Reads a file into a json value. Throws std::runtime_error with the path
// on unreadable files or parse errors.
Json load_json_file(const std::string& path);
Network load_network_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace ffsym
