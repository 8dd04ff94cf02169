// Copyright 2026 The oscnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oscnet/entropy.hpp"
#include "oscnet/gaussian_state.hpp"
#include "oscnet/network.hpp"

namespace oscnet {

/// Optional run settings that may accompany a network document.
struct RunOptions {
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::vector<std::size_t>> lengths;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;
  std::optional<double> tail_tolerance;
  std::optional<RVector> initial_occupations;
};

struct NetworkDocument {
  NetworkSpec spec;
  std::optional<ChainParams> chain;  // set for {"chain": ...} documents
  RunOptions options;
};

/// Accepts {"chain": {"L", "omega", "lambda", "gamma", "n1", "nL", "Gamma"}} or
/// {"general": {"H_re", "H_im", "baths": [{"mode", "rate", "occupation" |
/// "temperature", "kind"}]}} with 1-based modes, plus optional top-level
/// "t_final", "dt", "Ls", "samples", "seed", "n_max", "tail_tolerance" and
/// "initial_occupations". Structural problems throw ParseError; physically
/// invalid values throw ModelError.
NetworkDocument parse_network_document(const nlohmann::json& doc);
NetworkDocument parse_network_document(std::string_view text);

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double value);

nlohmann::json to_json(const ReducedState& state);
ReducedState reduced_state_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const EntropyReport& report);
/// Header "mode,kind,flux,production", one row per channel (1-based mode),
/// then a "total" row.
std::string entropy_csv(const EntropyReport& report);

}  // namespace oscnet
