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

#include "irps/manifest.h"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

#include "irps/error.h"
#include "irps/rng.h"

#ifndef IRPS_GIT_DESCRIBE
#define IRPS_GIT_DESCRIBE "unknown"
#endif

namespace irps {

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string BuildVersion() { return IRPS_GIT_DESCRIBE; }

std::string HashFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, Fnv1a64(bytes));
  return buf;
}

void RunManifest::AddInput(const std::filesystem::path& path) {
  inputs.push_back({path.string(), HashFile(path), std::filesystem::file_size(path)});
}

nlohmann::json RunManifest::ToJson() const {
  nlohmann::json in = nlohmann::json::array();
  for (const InputFile& f : inputs) {
    in.push_back({{"path", f.path}, {"fnv1a64", f.fnv1a64}, {"bytes", f.bytes}});
  }
  return {{"command", command},   {"argv", argv},
          {"config", config},     {"seeds", seeds},
          {"inputs", in},         {"outputs", outputs},
          {"version", version},   {"started_at", started_at},
          {"finished_at", finished_at}, {"extra", extra}};
}

void RunManifest::Write(const std::filesystem::path& path) {
  finished_at = UtcTimestamp();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << ToJson().dump(2) << '\n';
}

RunManifest BeginManifest(std::string command, std::vector<std::string> argv) {
  RunManifest m;
  m.command = std::move(command);
  m.argv = std::move(argv);
  m.version = BuildVersion();
  m.started_at = UtcTimestamp();
  return m;
}

}  // namespace irps
