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

#include "oscnet/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "oscnet/errors.hpp"

namespace oscnet {

namespace {

using nlohmann::json;

const json& require_key(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  return obj.at(key);
}

double number_of(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

std::size_t count_of(const json& value, const std::string& where) {
  if (!value.is_number_integer() && !value.is_number_unsigned()) {
    throw ParseError(where + ": expected an integer");
  }
  const auto v = value.get<std::int64_t>();
  if (v < 0) throw ParseError(where + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

double optional_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return number_of(obj.at(key), where + "." + key);
}

RMatrix real_matrix(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  Eigen::Index cols = -1;
  RMatrix out;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = value.at(static_cast<std::size_t>(i));
    if (!row.is_array()) throw ParseError(where + ": row " + std::to_string(i + 1) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError(where + ": rows have different lengths");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = number_of(row.at(static_cast<std::size_t>(j)), where);
    }
  }
  return out;
}

RVector real_vector(const json& value, const std::string& where) {
  if (!value.is_array()) throw ParseError(where + ": expected an array");
  RVector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number_of(value.at(i), where);
  }
  return out;
}

json matrix_json(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ChainParams parse_chain(const json& obj) {
  const std::string where = "chain";
  if (!obj.is_object()) throw ParseError("chain: expected an object");
  ChainParams p;
  p.length = count_of(require_key(obj, "L", where), "chain.L");
  p.omega = optional_number(obj, "omega", 1.0, where);
  p.lambda = number_of(require_key(obj, "lambda", where), "chain.lambda");
  p.gamma = number_of(require_key(obj, "gamma", where), "chain.gamma");
  p.n1 = number_of(require_key(obj, "n1", where), "chain.n1");
  p.nL = number_of(require_key(obj, "nL", where), "chain.nL");
  p.Gamma = optional_number(obj, "Gamma", 0.0, where);
  return p;
}

NetworkSpec parse_general(const json& obj) {
  if (!obj.is_object()) throw ParseError("general: expected an object");
  const RMatrix re = real_matrix(require_key(obj, "H_re", "general"), "general.H_re");
  RMatrix im = RMatrix::Zero(re.rows(), re.cols());
  if (obj.contains("H_im")) im = real_matrix(obj.at("H_im"), "general.H_im");
  if (re.rows() != re.cols() || im.rows() != re.rows() || im.cols() != re.cols()) {
    throw ParseError("general: H_re and H_im must be square matrices of the same size");
  }

  NetworkSpec spec;
  spec.hamiltonian = re.cast<Complex>() + kImag * im.cast<Complex>();
  const json& baths = require_key(obj, "baths", "general");
  if (!baths.is_array()) throw ParseError("general.baths: expected an array");
  for (std::size_t i = 0; i < baths.size(); ++i) {
    const json& b = baths.at(i);
    const std::string where = "general.baths[" + std::to_string(i) + "]";
    if (!b.is_object()) throw ParseError(where + ": expected an object");
    BathAttachment bath;
    const std::size_t mode = count_of(require_key(b, "mode", where), where + ".mode");
    if (mode == 0) throw ParseError(where + ".mode: modes are numbered from 1");
    bath.mode = mode - 1;
    bath.rate = number_of(require_key(b, "rate", where), where + ".rate");
    if (b.contains("kind")) {
      if (!b.at("kind").is_string()) throw ParseError(where + ".kind: expected a string");
      const auto kind = b.at("kind").get<std::string>();
      if (kind == "physical") {
        bath.kind = BathKind::kPhysical;
      } else if (kind == "self-consistent") {
        bath.kind = BathKind::kSelfConsistent;
      } else {
        throw ParseError(where + ".kind: expected \"physical\" or \"self-consistent\"");
      }
    }
    if (bath.kind == BathKind::kPhysical) {
      const bool has_occ = b.contains("occupation");
      const bool has_temp = b.contains("temperature");
      if (has_occ == has_temp) {
        throw ParseError(where + ": give exactly one of \"occupation\" or \"temperature\"");
      }
      if (has_occ) {
        bath.occupation = number_of(b.at("occupation"), where + ".occupation");
      } else {
        if (bath.mode >= spec.size()) throw ModelError(where + ": mode out of range");
        const double omega = spec.hamiltonian(static_cast<Eigen::Index>(bath.mode),
                                              static_cast<Eigen::Index>(bath.mode)).real();
        bath.occupation =
            occupation_from_temperature(omega, number_of(b.at("temperature"), where + ".temperature"));
      }
    }
    spec.baths.push_back(bath);
  }
  return spec;
}

RunOptions parse_options(const json& doc) {
  RunOptions o;
  if (doc.contains("t_final")) o.t_final = number_of(doc.at("t_final"), "t_final");
  if (doc.contains("dt")) o.dt = number_of(doc.at("dt"), "dt");
  if (doc.contains("Ls")) {
    const json& ls = doc.at("Ls");
    if (!ls.is_array()) throw ParseError("Ls: expected an array of integers");
    std::vector<std::size_t> lengths;
    for (const auto& v : ls) lengths.push_back(count_of(v, "Ls"));
    o.lengths = std::move(lengths);
  }
  if (doc.contains("samples")) o.samples = count_of(doc.at("samples"), "samples");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) throw ParseError("seed: expected an integer");
    o.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("n_max")) o.n_max = count_of(doc.at("n_max"), "n_max");
  if (doc.contains("tail_tolerance")) o.tail_tolerance = number_of(doc.at("tail_tolerance"), "tail_tolerance");
  if (doc.contains("initial_occupations")) {
    o.initial_occupations = real_vector(doc.at("initial_occupations"), "initial_occupations");
  }
  return o;
}

}  // namespace

NetworkDocument parse_network_document(const json& doc) {
  if (!doc.is_object()) throw ParseError("network document must be a JSON object");
  const bool chain = doc.contains("chain");
  const bool general = doc.contains("general");
  if (chain == general) throw ParseError("network document needs exactly one of \"chain\" or \"general\"");

  NetworkDocument out;
  out.options = parse_options(doc);
  if (chain) {
    out.chain = parse_chain(doc.at("chain"));
    out.spec = build_chain(*out.chain);
  } else {
    out.spec = parse_general(doc.at("general"));
    require_valid(out.spec);
  }
  return out;
}

NetworkDocument parse_network_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_network_document(doc);
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

json to_json(const ReducedState& state) {
  json out;
  out["C_re"] = matrix_json(state.C.real());
  out["C_im"] = matrix_json(state.C.imag());
  out["S_re"] = matrix_json(state.S.real());
  out["S_im"] = matrix_json(state.S.imag());
  out["mu_re"] = vector_json(state.mu.real());
  out["mu_im"] = vector_json(state.mu.imag());
  return out;
}

ReducedState reduced_state_from_json(const json& doc) {
  const std::string where = "state";
  const RMatrix c_re = real_matrix(require_key(doc, "C_re", where), "C_re");
  const RMatrix c_im = real_matrix(require_key(doc, "C_im", where), "C_im");
  const RMatrix s_re = real_matrix(require_key(doc, "S_re", where), "S_re");
  const RMatrix s_im = real_matrix(require_key(doc, "S_im", where), "S_im");
  const RVector mu_re = real_vector(require_key(doc, "mu_re", where), "mu_re");
  const RVector mu_im = real_vector(require_key(doc, "mu_im", where), "mu_im");
  if (c_im.rows() != c_re.rows() || c_im.cols() != c_re.cols() || s_re.rows() != c_re.rows() ||
      s_im.rows() != c_re.rows() || s_re.cols() != c_re.cols() || s_im.cols() != c_re.cols() ||
      mu_re.size() != c_re.rows() || mu_im.size() != c_re.rows()) {
    throw ParseError("state: component shapes disagree");
  }
  ReducedState state;
  state.C = c_re.cast<Complex>() + kImag * c_im.cast<Complex>();
  state.S = s_re.cast<Complex>() + kImag * s_im.cast<Complex>();
  state.mu = mu_re.cast<Complex>() + kImag * mu_im.cast<Complex>();
  require_valid(state);
  return state;
}

json to_json(const EntropyReport& report) {
  json channels = json::array();
  for (const auto& entry : report.channels) {
    channels.push_back({{"mode", entry.channel.mode + 1},
                        {"kind", std::string(to_string(entry.kind))},
                        {"rate", entry.channel.rate},
                        {"occupation", entry.channel.occupation},
                        {"flux", entry.flux},
                        {"production", entry.production}});
  }
  return {{"channels", channels},
          {"total_flux", report.total_flux},
          {"total_production", report.total_production},
          {"currents", matrix_json(report.currents)},
          {"wigner_entropy", report.wigner_entropy}};
}

std::string entropy_csv(const EntropyReport& report) {
  std::ostringstream os;
  os << "mode,kind,flux,production\n";
  for (const auto& entry : report.channels) {
    os << entry.channel.mode + 1 << ',' << to_string(entry.kind) << ',' << format_double(entry.flux)
       << ',' << format_double(entry.production) << '\n';
  }
  os << "total,," << format_double(report.total_flux) << ',' << format_double(report.total_production)
     << '\n';
  return os.str();
}

}  // namespace oscnet
