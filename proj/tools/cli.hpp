// Copyright 2026 The qsilab Authors
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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "qsilab/games.hpp"

namespace qsilab::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Outcome of a `check` subcommand.
struct CheckVerdict {
  bool pass = false;
  std::string summary;
  Json details;
};

CheckVerdict check_twirl(std::size_t qubits, std::size_t instances, std::uint64_t seed);
/// Simultaneous extraction formula against Monte Carlo; instance i uses
/// 1 + i mod `bits` index bits.
CheckVerdict check_gl(std::size_t bits, std::size_t instances, std::size_t runs,
                      std::uint64_t seed);
CheckVerdict check_hybrid_decision(std::size_t trials, std::uint64_t seed, std::size_t workers);
CheckVerdict check_otp_correctness(std::size_t cliffords, std::size_t samples,
                                   std::uint64_t seed);
CheckVerdict check_purified_gap(std::size_t queries, std::size_t instances, std::uint64_t seed);

const std::vector<std::string>& check_names();

/// Built-in presets file shipped with the sources.
std::filesystem::path default_presets_path();
/// Reads config/presets.json. Throws std::runtime_error on a malformed file.
Json load_presets(const std::filesystem::path& path);
games::GameConfig config_from_presets(const Json& presets, games::GameId id, games::Preset p);
/// Inverse of the above for one game, used to write and compare the file.
Json config_to_preset_json(const games::GameConfig& c);

Json game_result_json(const games::GameResult& r);
/// ISO 8601 UTC.
std::string timestamp_now();

/// Adversary lookup shared by `game` and `reduction`: built-ins plus the
/// rigged test adversaries. Throws games::UnknownAdversary.
games::AdversaryFactory adversary_by_name(const std::string& name);
const std::vector<std::string>& reduction_names();

/// Entry point. Exit code 0 when every assertion passes, 1 on an assertion
/// failure and 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsilab::cli
