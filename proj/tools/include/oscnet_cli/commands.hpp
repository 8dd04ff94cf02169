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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oscnet::cli {

/// Seed used by commands that sample when neither --seed nor the config sets one.
inline constexpr std::uint64_t kDefaultSeed = 20240607;

enum class Command { kNess, kEvolve, kEntropy, kProfile, kSweep, kFockCheck, kBench };

struct RunConfig {
  Command command = Command::kNess;
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::vector<std::size_t>> lengths;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::filesystem::path> state;  // entropy: evaluate this state instead of the NESS
  std::size_t sample_every = 1;                // evolve: keep every n-th step
};

/// Runs one command; throws the oscnet error types on failure.
void run(const RunConfig& config, std::ostream& log);

/// Parses argv, runs the command and maps failures to exit codes:
/// 0 success, 1 parse or usage error, 2 model error, 3 numerical error.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Writes `contents` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace oscnet::cli
