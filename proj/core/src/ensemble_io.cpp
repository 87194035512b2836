#include "subfbm/ensemble_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace subfbm {
namespace {

[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path +
                           (errno ? std::string(" (") + std::strerror(errno) + ")"
                                  : std::string()));
}

}  // namespace

std::string ensemble_metadata_path(const std::string& csv_path) {
  return csv_path + ".meta.json";
}

std::string ensemble_metadata_json(const PathEnsemble& ensemble) {
  nlohmann::json j;
  j["scheme"] = scheme_name(ensemble.scheme);
  j["H"] = ensemble.H;
  j["n"] = ensemble.n;
  j["m"] = ensemble.m;
  j["M"] = ensemble.M;
  j["master_seed"] = ensemble.master_seed;
  j["distribution"] = distribution_name(ensemble.distribution);
  j["matrix_checksum"] = ensemble.matrix_checksum;
  return j.dump(2) + "\n";
}

void save_ensemble(const std::string& csv_path, const PathEnsemble& ensemble) {
  {
    std::ofstream out(csv_path);
    if (!out) io_fail("cannot open ensemble file for writing", csv_path);
    char buf[32];
    for (int p = 0; p < ensemble.M; ++p) {
      out << static_cast<std::uint64_t>(p);
      const auto path = ensemble.path(p);
      for (double v : path) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << ',' << buf;
      }
      out << '\n';
    }
    if (!out) io_fail("write failed", csv_path);
  }
  std::ofstream meta(ensemble_metadata_path(csv_path));
  if (!meta) io_fail("cannot open metadata file for writing",
                     ensemble_metadata_path(csv_path));
  meta << ensemble_metadata_json(ensemble);
  if (!meta) io_fail("write failed", ensemble_metadata_path(csv_path));
}

PathEnsemble load_ensemble(const std::string& csv_path) {
  PathEnsemble ensemble;
  {
    const std::string meta_path = ensemble_metadata_path(csv_path);
    std::ifstream meta(meta_path);
    if (!meta) io_fail("cannot open metadata file", meta_path);
    nlohmann::json j;
    try {
      meta >> j;
      ensemble.scheme = scheme_from_name(j.at("scheme").get<std::string>());
      ensemble.H = j.at("H").get<double>();
      ensemble.n = j.at("n").get<int>();
      ensemble.m = j.at("m").get<int>();
      ensemble.M = j.at("M").get<int>();
      ensemble.master_seed = j.at("master_seed").get<std::uint64_t>();
      ensemble.distribution =
          distribution_from_name(j.at("distribution").get<std::string>());
      ensemble.matrix_checksum = j.at("matrix_checksum").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("invalid ensemble metadata in " + meta_path +
                               ": " + e.what());
    }
  }
  if (ensemble.n < 1 || ensemble.M < 1)
    throw std::runtime_error("invalid ensemble metadata: n and M must be >= 1");

  std::ifstream in(csv_path);
  if (!in) io_fail("cannot open ensemble file", csv_path);
  const std::size_t width = static_cast<std::size_t>(ensemble.n) + 1;
  ensemble.values.reserve(static_cast<std::size_t>(ensemble.M) * width);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::size_t column = 0;
    while (std::getline(fields, field, ',')) {
      if (column > 0) {
        std::size_t consumed = 0;
        double v = 0.0;
        try {
          v = std::stod(field, &consumed);
        } catch (const std::exception&) {
          throw std::runtime_error("malformed ensemble row " +
                                   std::to_string(rows) + " in " + csv_path);
        }
        if (consumed != field.size())
          throw std::runtime_error("malformed ensemble row " +
                                   std::to_string(rows) + " in " + csv_path);
        ensemble.values.push_back(v);
      }
      ++column;
    }
    if (column != width + 1)
      throw std::runtime_error("ensemble row " + std::to_string(rows) + " has " +
                               std::to_string(column) + " fields, expected " +
                               std::to_string(width + 1) + " in " + csv_path);
    ++rows;
  }
  if (rows != ensemble.M)
    throw std::runtime_error("ensemble has " + std::to_string(rows) +
                             " rows, metadata says M=" +
                             std::to_string(ensemble.M) + " in " + csv_path);
  return ensemble;
}

void save_convergence_csv(const std::string& csv_path,
                          const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(csv_path);
  if (!out) io_fail("cannot open convergence file for writing", csv_path);
  out << "n,mc_estimate,mc_se,exact,bound\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n",
                  row.resolution, row.mc_estimate, row.mc_se, row.exact_value,
                  row.bound);
    out << buf;
  }
  if (!out) io_fail("write failed", csv_path);
}

}  // namespace subfbm
