#include "heavistep/cli.hpp"

#include "heavistep/csv.hpp"

#include <json.hpp>

#include <stdexcept>

namespace heavistep {

namespace {

constexpr const char* kManifestFormat = "heavistep-manifest";

}  // namespace

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["format"] = kManifestFormat;
  j["subcommand"] = m.subcommand;
  j["argv"] = m.argv;
  j["flags"] = m.flags;
  j["seeds"] = m.seeds;
  j["artifacts"] = m.artifacts;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  j["started_utc"] = m.started_utc;
  j["version"] = m.version;
  j["workers"] = m.workers;
  j["exit_code"] = m.exit_code;
  j["status"] = m.status;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw std::invalid_argument(std::string("manifest is not valid JSON: ") + ex.what());
  }
  if (!j.is_object() || j.value("format", "") != kManifestFormat) {
    throw std::invalid_argument("not a heavistep run manifest");
  }
  RunManifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.flags = j.value("flags", std::map<std::string, std::string>{});
    m.seeds = j.value("seeds", std::map<std::string, std::uint64_t>{});
    m.artifacts = j.value("artifacts", std::vector<std::string>{});
    m.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
    m.started_utc = j.value("started_utc", "");
    m.version = j.value("version", "");
    m.workers = j.value("workers", std::size_t{1});
    m.exit_code = j.value("exit_code", 0);
    m.status = j.value("status", "");
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("malformed manifest: ") + ex.what());
  }
  if (m.argv.empty() || m.argv.front() != m.subcommand) {
    throw std::invalid_argument("manifest argv does not start with its subcommand");
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const RunManifest& m) {
  write_atomic(path, manifest_to_json(m));
}

RunManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_text(path));
}

}  // namespace heavistep
