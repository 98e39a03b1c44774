// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Provenance record written beside every artifact a command produces.

#ifndef IRPS_MANIFEST_H_
#define IRPS_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace irps {

struct InputFile {
  std::string path;
  std::string fnv1a64;  // hex digest of the file bytes
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  std::vector<InputFile> inputs;
  std::vector<std::string> outputs;
  std::string version;
  std::string started_at;
  std::string finished_at;
  nlohmann::json extra = nlohmann::json::object();

  void AddInput(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  // Stamps finished_at and writes the manifest.
  void Write(const std::filesystem::path& path);
};

// Starts a manifest stamped with the build version and the current time.
RunManifest BeginManifest(std::string command, std::vector<std::string> argv);

// UTC time as 2026-01-31T12:00:00Z.
std::string UtcTimestamp();
std::string BuildVersion();
std::string HashFile(const std::filesystem::path& path);

}  // namespace irps

#endif  // IRPS_MANIFEST_H_
