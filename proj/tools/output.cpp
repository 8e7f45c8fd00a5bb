#include "output.hpp"

#include <chrono>
#include <ctime>

#include "photonfluid/error.hpp"
#include "photonfluid/parallel.hpp"

#ifndef PHOTONFLUID_VERSION
#define PHOTONFLUID_VERSION "0.0.0"
#endif

namespace photonfluid::cli {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::string& digest, const std::vector<std::string>& columns)
    : path_(path), out_(path) {
  if (!out_) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out_ << "# config_digest: " << digest << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError(fmt::format("write to {} failed", path_.string()));
}

RunDirectory::RunDirectory(fs::path dir, std::string command, const Config& config, std::vector<std::string> sections)
    : dir_(std::move(dir)),
      command_(std::move(command)),
      digest_(config.digest(sections)),
      config_(config.to_json(sections)),
      started_(utc_timestamp()) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_))
    throw IoError(fmt::format("cannot create output directory {}: {}", dir_.string(), ec.message()));
}

fs::path RunDirectory::file(const std::string& name) {
  outputs_.push_back(name);
  return dir_ / name;
}

void RunDirectory::mark_failure(double z, const std::string& what) {
  failure_z_ = z;
  failure_ = what;
}

void RunDirectory::write_manifest() {
  nlohmann::json m;
  m["tool"] = "photonfluid";
  m["tool_version"] = PHOTONFLUID_VERSION;
  m["command"] = command_;
  m["config_digest"] = digest_;
  m["config"] = config_;
  m["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  m["threads"] = thread_count();
  m["output_paths"] = outputs_;
  m["timestamps"] = {{"started", started_}, {"finished", utc_timestamp()}};
  m["status"] = failure_z_ ? "numeric_failure" : "ok";
  if (failure_z_) {
    m["failure_z"] = *failure_z_;
    m["failure"] = failure_;
  }
  m["summary"] = summary_;
  std::ofstream out(dir_ / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw IoError(fmt::format("cannot write {}", (dir_ / "manifest.json").string()));
}

nlohmann::json read_manifest(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(fmt::format("run directory {} does not exist", dir.string()));
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) {
    const bool empty = fs::directory_iterator(dir) == fs::directory_iterator();
    throw IoError(fmt::format("{} {}: no manifest.json", empty ? "empty run directory" : "run directory", dir.string()));
  }
  std::ifstream in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("{}: malformed manifest ({})", path.string(), e.what()));
  }
}

}  // namespace photonfluid::cli
