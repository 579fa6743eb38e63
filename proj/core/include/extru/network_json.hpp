// SPDX-License-Identifier: Apache-2.0
//
// Canonical JSON description of a network and, optionally, its configuration:
//   {"n":64,"kind":"log","m":4,"stages":10,"selector_count":960,
//    "mirrored":false,"trn":"<hex, most-significant selector first>"}
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "extru/cstn.hpp"

namespace extru {

struct NetworkDescription {
  Topology topology;
  std::optional<Trn> trn;
};

std::string kind_name(NetworkKind kind);
/// Accepts "omega" and "log".
NetworkKind parse_kind(std::string_view name);

/// Single-line JSON. Pass trn = nullptr to omit the configuration.
std::string to_json(const Topology& topo, const Trn* trn = nullptr);

/// Validates that the derived fields (stages, selector_count) agree with
/// (n, kind, m) and that the trn length matches.
NetworkDescription parse_network_json(std::string_view text);

}  // namespace extru
