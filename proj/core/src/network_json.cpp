// SPDX-License-Identifier: Apache-2.0
#include "extru/network_json.hpp"

#include <stdexcept>

#include "json.hpp"

namespace extru {

using nlohmann::json;

std::string kind_name(NetworkKind kind) { return kind == NetworkKind::Omega ? "omega" : "log"; }

NetworkKind parse_kind(std::string_view name) {
  if (name == "omega") return NetworkKind::Omega;
  if (name == "log") return NetworkKind::LogExtra;
  throw std::invalid_argument("unknown network kind '" + std::string(name) + "' (expected omega or log)");
}

std::string to_json(const Topology& topo, const Trn* trn) {
  json j;
  j["n"] = topo.n();
  j["kind"] = kind_name(topo.kind());
  j["m"] = topo.extra_stages();
  j["stages"] = topo.stages();
  j["switches"] = topo.switch_count();
  j["selector_count"] = topo.selector_count();
  j["mirrored"] = topo.mirrored();
  if (trn != nullptr) {
    if (trn->size() != topo.selector_count()) throw std::invalid_argument("trn does not match topology");
    j["trn"] = trn->to_hex();
  }
  return j.dump();
}

NetworkDescription parse_network_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("network json: ") + e.what());
  }
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    const auto m = j.value("m", std::size_t{0});
    Topology topo = Topology::build(n, kind, m);
    if (j.value("mirrored", false)) topo = topo.mirror();
    if (j.contains("stages") && j["stages"].get<std::size_t>() != topo.stages()) {
      throw std::invalid_argument("network json: stages disagrees with n/kind/m");
    }
    if (j.contains("selector_count") && j["selector_count"].get<std::size_t>() != topo.selector_count()) {
      throw std::invalid_argument("network json: selector_count disagrees with n/kind/m");
    }
    NetworkDescription d{topo, std::nullopt};
    if (j.contains("trn")) d.trn = Trn(BitVector::from_hex(j["trn"].get<std::string>(), topo.selector_count()));
    return d;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("network json: ") + e.what());
  }
}

}  // namespace extru
