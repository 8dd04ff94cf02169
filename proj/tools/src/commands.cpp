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

#include "oscnet_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oscnet/chain.hpp"
#include "oscnet/dynamics.hpp"
#include "oscnet/entropy.hpp"
#include "oscnet/errors.hpp"
#include "oscnet/fock.hpp"
#include "oscnet/lyapunov.hpp"
#include "oscnet/serialization.hpp"

namespace oscnet::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kFockCheckTolerance = 1e-5;
constexpr double kDefaultFockTail = 1e-8;
constexpr double kCutoffTail = 1e-9;
constexpr double kDefaultFockTFinal = 200.0;
constexpr double kDefaultFockDt = 0.05;

// Unreadable config or unwritable output; reported like a usage error.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Stationary {
  ReducedState state;
  std::optional<RVector> sc_occupations;
};

NetworkDocument load_document(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  return parse_network_document(std::string_view(text));
}

Stationary stationary(const NetworkSpec& spec) {
  if (!spec.has_self_consistent()) return {solve_ness(spec), std::nullopt};
  auto solution = solve_selfconsistent(spec);
  return {std::move(solution.state), std::move(solution.sc_occupations)};
}

std::optional<RVector> sc_occupations_for(const NetworkSpec& spec) {
  if (!spec.has_self_consistent()) return std::nullopt;
  return solve_selfconsistent(spec).sc_occupations;
}

ChainParams chain_of(const NetworkDocument& doc, const char* command) {
  if (doc.chain) return *doc.chain;
  if (auto p = chain_params_of(doc.spec)) return *p;
  throw ModelError(std::string(command) + " needs a boundary-driven chain network");
}

ReducedState initial_state(const NetworkDocument& doc) {
  if (!doc.options.initial_occupations) return ReducedState::vacuum(doc.spec.size());
  const RVector& n = *doc.options.initial_occupations;
  if (n.size() != static_cast<Eigen::Index>(doc.spec.size())) {
    throw ModelError("initial_occupations must have one entry per mode");
  }
  if ((n.array() < 0.0).any()) throw ModelError("initial_occupations must be non-negative");
  return ReducedState::thermal(n);
}

fs::path prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

double required(const std::optional<double>& flag, const std::optional<double>& config,
                const char* name) {
  if (flag) return *flag;
  if (config) return *config;
  throw ParseError(std::string("missing ") + name + " (flag or config)");
}

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

void cmd_ness(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const fs::path out = prepare_out(cfg.out);
  const auto ness = stationary(doc.spec);
  const auto gen = build_generators(doc.spec, ness.sc_occupations);

  json j = to_json(ness.state);
  j["modes"] = doc.spec.size();
  j["residual"] = ness_residual(ness.state.C, gen, doc.spec.hamiltonian);
  if (ness.sc_occupations) {
    json sc = json::array();
    for (Eigen::Index k = 0; k < ness.sc_occupations->size(); ++k) sc.push_back((*ness.sc_occupations)(k));
    j["sc_occupations"] = sc;
  }
  const auto report = entropy_report(ness.state, doc.spec, ness.sc_occupations);
  write_file_atomic(out / "ness.json", j.dump(2) + "\n");
  write_file_atomic(out / "entropy.csv", entropy_csv(report));
  log << "ness: total flux " << format_double(report.total_flux) << ", total production "
      << format_double(report.total_production) << "\n";
}

void cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const double t_final = required(cfg.t_final, doc.options.t_final, "--t-final");
  const double dt = required(cfg.dt, doc.options.dt, "--dt");
  const fs::path out = prepare_out(cfg.out);
  const auto sc = sc_occupations_for(doc.spec);
  const auto gen = build_generators(doc.spec, sc);

  EvolveOptions options;
  options.sample_every = cfg.sample_every;
  const auto trajectory = evolve(initial_state(doc), gen, doc.spec.hamiltonian, t_final, dt, options);

  std::ostringstream csv;
  csv << "t";
  for (std::size_t k = 0; k < doc.spec.size(); ++k) csv << ",occ_" << k + 1;
  csv << ",S_W,Pi_total,Phi_total\n";
  for (const auto& point : trajectory) {
    const auto report = entropy_report(point.state, doc.spec, sc);
    csv << format_double(point.time);
    for (std::size_t k = 0; k < doc.spec.size(); ++k) csv << ',' << format_double(point.state.occupation(k));
    csv << ',' << format_double(report.wigner_entropy) << ',' << format_double(report.total_production)
        << ',' << format_double(report.total_flux) << '\n';
  }
  write_file_atomic(out / "trajectory.csv", csv.str());
  log << "evolve: " << trajectory.size() << " samples up to t = " << format_double(t_final) << "\n";
}

void cmd_entropy(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const fs::path out = prepare_out(cfg.out);
  ReducedState state;
  std::optional<RVector> sc;
  if (cfg.state) {
    std::ifstream in(*cfg.state, std::ios::binary);
    if (!in) throw IoError("cannot read state file " + cfg.state->string());
    json j;
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed state JSON: ") + e.what());
    }
    state = reduced_state_from_json(j);
    if (state.size() != doc.spec.size()) throw ModelError("state and network sizes differ");
    sc = sc_occupations_for(doc.spec);
  } else {
    auto ness = stationary(doc.spec);
    state = std::move(ness.state);
    sc = std::move(ness.sc_occupations);
  }
  const auto report = entropy_report(state, doc.spec, sc);
  write_file_atomic(out / "entropy.csv", entropy_csv(report));
  write_file_atomic(out / "entropy.json", to_json(report).dump(2) + "\n");

  const auto samples = cfg.samples ? cfg.samples : doc.options.samples;
  if (samples) {
    std::mt19937_64 rng(cfg.seed.value_or(doc.options.seed.value_or(kDefaultSeed)));
    std::ostringstream csv;
    csv << "mode,kind,production,mc_estimate,mc_std_error\n";
    for (const auto& entry : report.channels) {
      if (!(entry.channel.rate > 0.0)) continue;
      const auto mc = mc_production_estimate(state, entry.channel, *samples, rng);
      csv << row({std::to_string(entry.channel.mode + 1), std::string(to_string(entry.kind)),
                  format_double(entry.production), format_double(mc.estimate),
                  format_double(mc.std_error)});
    }
    write_file_atomic(out / "entropy_mc.csv", csv.str());
  }
  log << "entropy: S_W = " << format_double(report.wigner_entropy) << ", production "
      << format_double(report.total_production) << "\n";
}

void cmd_profile(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const ChainParams params = chain_of(doc, "profile");
  const fs::path out = prepare_out(cfg.out);
  const RVector occ = occupation_profile(params);
  std::ostringstream csv;
  csv << "k,occupation\n";
  for (Eigen::Index k = 0; k < occ.size(); ++k) csv << k + 1 << ',' << format_double(occ(k)) << '\n';
  write_file_atomic(out / "profile.csv", csv.str());
  log << "profile: " << occ.size() << " sites\n";
}

std::vector<std::size_t> default_lengths() {
  std::vector<std::size_t> out;
  for (std::size_t L = 2; L <= 2048; L *= 2) out.push_back(L);
  return out;
}

json fit_json(const LineFit& fit) {
  return {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared},
          {"points", fit.points}};
}

void cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const ChainParams params = chain_of(doc, "sweep");
  auto lengths = cfg.lengths ? *cfg.lengths : doc.options.lengths.value_or(default_lengths());
  if (lengths.empty()) throw ParseError("sweep needs at least one length");
  for (auto L : lengths) {
    if (L < 2) throw ModelError("chain lengths must be at least 2");
  }
  if (!std::is_sorted(lengths.begin(), lengths.end())) throw ParseError("lengths must be ascending");
  const fs::path out = prepare_out(cfg.out);

  const auto result = scaling_sweep(params, lengths);
  std::ostringstream csv;
  csv << "L,j,pi_total,pi_r,pi_sc\n";
  for (const auto& r : result.rows) {
    csv << row({std::to_string(r.length), format_double(r.current_j), format_double(r.pi_total),
                format_double(r.pi_r), format_double(r.pi_sc)});
  }
  write_file_atomic(out / "sweep.csv", csv.str());

  json fit;
  fit["fit_min_L"] = result.fit_min_length;
  fit["crossover_L"] = result.crossover ? json(*result.crossover) : json(nullptr);
  fit["pi_r"] = result.fit_pi_r ? fit_json(*result.fit_pi_r) : json(nullptr);
  fit["pi_sc"] = result.fit_pi_sc ? fit_json(*result.fit_pi_sc) : json(nullptr);
  if (!result.fit_pi_r && !result.fit_pi_sc) {
    fit["note"] = "no log-log fit: needs at least two distinct lengths with positive production";
  } else if (!result.fit_pi_sc) {
    fit["note"] = "pi_sc is zero (no self-consistent baths); only pi_r is fitted";
  }
  write_file_atomic(out / "fit.json", fit.dump(2) + "\n");
  log << "sweep: " << result.rows.size() << " lengths";
  if (result.fit_pi_r) log << ", slope(pi_r) = " << format_double(result.fit_pi_r->slope);
  if (result.fit_pi_sc) log << ", slope(pi_sc) = " << format_double(result.fit_pi_sc->slope);
  log << "\n";
}

double max_abs_difference(const ReducedState& a, const ReducedState& b) {
  return std::max({(a.C - b.C).cwiseAbs().maxCoeff(), (a.S - b.S).cwiseAbs().maxCoeff(),
                   (a.mu - b.mu).cwiseAbs().maxCoeff()});
}

void cmd_fock_check(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const std::size_t L = doc.spec.size();
  if (L > 3) throw ModelError("fock-check is limited to networks of at most 3 modes");
  const double t_final = cfg.t_final.value_or(doc.options.t_final.value_or(kDefaultFockTFinal));
  const double dt = cfg.dt.value_or(doc.options.dt.value_or(kDefaultFockDt));
  if (!(t_final > 0.0) || !(dt > 0.0)) throw ModelError("t_final and dt must be positive");
  const fs::path out = prepare_out(cfg.out);

  const auto sc = sc_occupations_for(doc.spec);
  const ReducedState initial = initial_state(doc);
  double largest = initial.C.diagonal().real().maxCoeff();
  for (const auto& bath : doc.spec.baths) largest = std::max(largest, bath.occupation);
  if (sc) largest = std::max(largest, sc->maxCoeff());
  const std::size_t n_max = doc.options.n_max.value_or(recommended_cutoff(largest, kCutoffTail));
  const double tail = doc.options.tail_tolerance.value_or(kDefaultFockTail);

  const auto every = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / dt)));
  const auto gen = build_generators(doc.spec, sc);
  EvolveOptions gaussian_options;
  gaussian_options.sample_every = every;
  const auto reference = evolve(initial, gen, doc.spec.hamiltonian, t_final, dt, gaussian_options);

  const TruncatedState start = doc.options.initial_occupations
                                   ? fock_thermal(*doc.options.initial_occupations, n_max)
                                   : fock_vacuum(L, n_max);
  FockEvolveOptions fock_options;
  fock_options.tail_tolerance = tail;
  fock_options.observe_every = every;
  fock_options.sc_occupations = sc;
  std::size_t index = 0;
  double worst = 0.0;
  double worst_time = 0.0;
  fock_options.observer = [&](double t, const TruncatedState& s) {
    if (index >= reference.size() || std::abs(reference[index].time - t) > 1e-9 * std::max(1.0, t)) {
      throw NumericError("Fock and Gaussian sample times diverged");
    }
    const double d = max_abs_difference(extract_covariances(s), reference[index].state);
    if (d > worst) {
      worst = d;
      worst_time = t;
    }
    ++index;
  };
  const auto final_state = evolve_fock(start, doc.spec, t_final, dt, fock_options);

  const bool pass = worst <= kFockCheckTolerance;
  json report = {{"n_max", n_max},
                 {"tail_tolerance", tail},
                 {"t_final", t_final},
                 {"dt", dt},
                 {"samples_compared", index},
                 {"max_deviation", worst},
                 {"max_deviation_time", worst_time},
                 {"final_top_level_population", top_level_populations(final_state).maxCoeff()},
                 {"tolerance", kFockCheckTolerance},
                 {"verdict", pass ? "PASS" : "FAIL"}};
  write_file_atomic(out / "fock_check.json", report.dump(2) + "\n");
  log << "fock-check: max deviation " << format_double(worst) << " -> " << (pass ? "PASS" : "FAIL")
      << "\n";
  if (!pass) {
    throw NumericError("fock-check FAIL: Fock and Gaussian covariances differ by " +
                       format_double(worst));
  }
}

template <typename F>
std::pair<std::size_t, double> time_call(F&& f) {
  using clock = std::chrono::steady_clock;
  std::size_t reps = 0;
  const auto start = clock::now();
  double elapsed = 0.0;
  do {
    f();
    ++reps;
    elapsed = std::chrono::duration<double>(clock::now() - start).count();
  } while (elapsed < 0.05 && reps < 100000);
  return {reps, elapsed / static_cast<double>(reps)};
}

void cmd_bench(const RunConfig& cfg, std::ostream& log) {
  const auto doc = load_document(cfg.config);
  const ChainParams base = chain_of(doc, "bench");
  const auto lengths =
      cfg.lengths ? *cfg.lengths : doc.options.lengths.value_or(std::vector<std::size_t>{4, 8, 16, 32});
  const fs::path out = prepare_out(cfg.out);

  std::ostringstream csv;
  csv << "method,L,repetitions,seconds_per_call\n";
  const auto record = [&](const char* method, std::size_t L, std::pair<std::size_t, double> t) {
    csv << row({method, std::to_string(L), std::to_string(t.first), format_double(t.second)});
  };
  volatile double sink = 0.0;
  for (const std::size_t L : lengths) {
    ChainParams p = base;
    p.length = L;
    const NetworkSpec spec = build_chain(p);
    const ChainNess closed = closed_form_ness(p);
    const std::optional<RVector> sc =
        spec.has_self_consistent() ? std::optional<RVector>(closed.occupations) : std::nullopt;

    record("closed_form", L, time_call([&] { sink = sink + closed_form_ness(p).pi_total; }));
    record("production_split", L, time_call([&] { sink = sink + production_split(closed, p).pi_r; }));
    record("bartels_stewart", L, time_call([&] {
             sink = sink + solve_ness(spec, sc).C(0, 0).real();
           }));
    if (L <= 32) {
      NessOptions vec;
      vec.method = NessMethod::kVectorized;
      record("vectorized", L, time_call([&] {
               sink = sink + solve_ness(spec, sc, vec).C(0, 0).real();
             }));
    }
    record("selfconsistent_direct", L, time_call([&] {
             sink = sink + solve_selfconsistent(spec).state.C(0, 0).real();
           }));
  }
  write_file_atomic(out / "bench.csv", csv.str());
  log << "bench: " << lengths.size() << " lengths timed\n";
}

std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ParseError("--Ls expects a comma-separated list of integers, got \"" + text + "\"");
    }
  }
  if (out.empty()) throw ParseError("--Ls is empty");
  return out;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw IoError("cannot write " + tmp.string());
    o << contents;
    o.flush();
    if (!o) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void run(const RunConfig& config, std::ostream& log) {
  switch (config.command) {
    case Command::kNess:
      return cmd_ness(config, log);
    case Command::kEvolve:
      return cmd_evolve(config, log);
    case Command::kEntropy:
      return cmd_entropy(config, log);
    case Command::kProfile:
      return cmd_profile(config, log);
    case Command::kSweep:
      return cmd_sweep(config, log);
    case Command::kFockCheck:
      return cmd_fock_check(config, log);
    case Command::kBench:
      return cmd_bench(config, log);
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian open-network simulator: steady states, transients and Wigner entropy production"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string lengths;
  std::string state_path;

  struct Entry {
    const char* name;
    const char* help;
    Command command;
  };
  const Entry entries[] = {
      {"ness", "stationary covariances (ness.json) and entropy balance (entropy.csv)", Command::kNess},
      {"evolve", "covariance transient (trajectory.csv)", Command::kEvolve},
      {"entropy", "per-channel entropy flux and production, optional Monte-Carlo check", Command::kEntropy},
      {"profile", "closed-form chain occupation profile (profile.csv)", Command::kProfile},
      {"sweep", "chain production split versus length (sweep.csv, fit.json)", Command::kSweep},
      {"fock-check", "compare with a truncated Fock-space integration (fock_check.json)", Command::kFockCheck},
      {"bench", "time the steady-state solvers (bench.csv)", Command::kBench},
  };
  std::vector<std::pair<CLI::App*, Command>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", cfg.config, "network JSON document")->required();
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed (default 20240607)");
    sub->add_option("--samples", cfg.samples, "Monte-Carlo samples per channel");
    sub->add_option("--Ls", lengths, "comma-separated chain lengths");
    sub->add_option("--t-final", cfg.t_final, "final time");
    sub->add_option("--dt", cfg.dt, "time step");
    if (e.command == Command::kEntropy) sub->add_option("--state", state_path, "state JSON to evaluate");
    if (e.command == Command::kEvolve) sub->add_option("--every", cfg.sample_every, "keep every n-th step");
    subs.emplace_back(sub, e.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [sub, command] : subs) {
      if (sub->parsed()) cfg.command = command;
    }
    if (!lengths.empty()) cfg.lengths = parse_lengths(lengths);
    if (!state_path.empty()) cfg.state = state_path;
    run(cfg, out);
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace oscnet::cli
