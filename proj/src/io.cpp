#include "lrdustat/io.hpp"

#include "lrdustat/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace lrdustat::io {

namespace {

std::ofstream open_out(const std::string& file, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(file, mode);
  if (!out) throw InputError("cannot open '" + file + "' for writing");
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::string& file, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(file, mode);
  if (!in) throw InputError("cannot open '" + file + "' for reading");
  return in;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

void write_path_csv(const std::string& file, const Eigen::Ref<const Eigen::VectorXd>& values) {
  auto out = open_out(file);
  out << "value\n";
  for (Eigen::Index i = 0; i < values.size(); ++i) out << values[i] << '\n';
  if (!out) throw InputError("write to '" + file + "' failed");
}

Eigen::VectorXd read_path_csv(const std::string& file) {
  auto in = open_in(file);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line_no == 1 && line == "value") continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size() || !std::isfinite(x)) {
      throw InputError(file + ":" + std::to_string(line_no) + ": not a finite number: '" + line + "'");
    }
    values.push_back(x);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_path_binary(const std::string& file, const Eigen::Ref<const Eigen::VectorXd>& values) {
  static_assert(std::endian::native == std::endian::little, "binary path format is little-endian");
  auto out = open_out(file, std::ios::out | std::ios::binary);
  out.write(kPathMagic, sizeof(kPathMagic));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values[i];
    out.write(reinterpret_cast<const char*>(&x), sizeof(double));
  }
  if (!out) throw InputError("write to '" + file + "' failed");
}

Eigen::VectorXd read_path_binary(const std::string& file) {
  auto in = open_in(file, std::ios::in | std::ios::binary);
  char magic[sizeof(kPathMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kPathMagic, sizeof(kPathMagic)) != 0) {
    throw InputError("'" + file + "' is not a binary path file");
  }
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % sizeof(double) != 0) throw InputError("'" + file + "' is truncated");
  Eigen::VectorXd values(static_cast<Eigen::Index>(bytes.size() / sizeof(double)));
  std::memcpy(values.data(), bytes.data(), bytes.size());
  return values;
}

Eigen::VectorXd read_path(const std::string& file) {
  auto in = open_in(file, std::ios::in | std::ios::binary);
  char magic[sizeof(kPathMagic)] = {};
  in.read(magic, sizeof(magic));
  const bool binary = in.gcount() == static_cast<std::streamsize>(sizeof(magic)) &&
                      std::memcmp(magic, kPathMagic, sizeof(kPathMagic)) == 0;
  in.close();
  return binary ? read_path_binary(file) : read_path_csv(file);
}

void write_ustat_csv(const std::string& file, const UStatPath& path) {
  auto out = open_out(file);
  out << "k,lambda,raw,normalized\n";
  const double n = static_cast<double>(path.n);
  for (Eigen::Index k = 1; k <= path.splits(); ++k) {
    out << k << ',' << static_cast<double>(k) / n << ',' << path.raw[k - 1] << ','
        << path.values[k - 1] << '\n';
  }
  if (!out) throw InputError("write to '" + file + "' failed");
}

json params_json(const LrdParams& params, Eigen::Index n, std::uint64_t seed) {
  return json{{"family", to_string(params.family)}, {"D", params.D}, {"n", n}, {"seed", seed}};
}

json coeffs_json(const HermiteCoeffTable& table) {
  json entries = json::array();
  const int Q = table.max_total_degree;
  for (int total = 1; total <= Q; ++total) {
    for (int k = 0; k <= total; ++k) {
      const double a = table(k, total - k);
      if (std::abs(a) > table.tolerance) entries.push_back(json::array({k, total - k, a}));
    }
  }
  json out{{"Q", Q},
           {"source", to_string(table.source)},
           {"tol", table.tolerance},
           {"entries", entries},
           {"rank", table.rank ? json(*table.rank) : json(nullptr)},
           {"a00", table.a00()}};
  if (!table.kernel_name.empty()) out["kernel"] = table.kernel_name;
  if (!table.warnings.empty()) out["warnings"] = table.warnings;
  return out;
}

json summability_json(const SummabilityReport& report) {
  return json{{"Q", report.Q_list},
              {"partial_sums", report.partial_sums},
              {"log_slopes", report.log_slopes},
              {"classification", to_string(report.classification)}};
}

json scaling_json(const ScalingConstants& sc) {
  return json{{"D", sc.D}, {"m", sc.m}, {"n", sc.n}, {"c_m", sc.c_m}, {"d_n", sc.d_n},
              {"d_n_prime", sc.d_n_prime}, {"H", sc.H}, {"K", sc.K_const}};
}

json critical_values_json(const LimitEnsemble& ensemble, const CriticalValueTable& table) {
  json quantiles = json::array();
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    quantiles.push_back(json{{"level", table.levels[i]}, {"value", table.values[i]}});
  }
  const auto& d = ensemble.descriptor;
  json descriptor{{"label", d.label()}, {"kind", static_cast<int>(d.kind)}, {"name", d.name},
                  {"H", d.H}, {"m", d.m}, {"D", d.D}, {"n_aux", d.n_aux},
                  {"components", d.components}, {"reps", ensemble.reps()},
                  {"seed", ensemble.seed}};
  std::vector<double> grid(ensemble.grid.data(), ensemble.grid.data() + ensemble.grid.size());
  json out{{"descriptor", descriptor}, {"grid", grid}, {"quantiles", quantiles}};
  if (!ensemble.warnings.empty()) out["warnings"] = ensemble.warnings;
  return out;
}

void write_critical_values_csv(const std::string& file, const CriticalValueTable& table) {
  auto out = open_out(file);
  out << "level,value\n";
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    out << table.levels[i] << ',' << table.values[i] << '\n';
  }
  if (!out) throw InputError("write to '" + file + "' failed");
}

void write_ensemble_csv(const std::string& file, const LimitEnsemble& ensemble) {
  auto out = open_out(file);
  for (Eigen::Index g = 0; g < ensemble.grid.size(); ++g) {
    out << (g ? "," : "") << "lambda=" << ensemble.grid[g];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < ensemble.reps(); ++r) {
    for (Eigen::Index g = 0; g < ensemble.grid.size(); ++g) {
      out << (g ? "," : "") << ensemble.paths(r, g);
    }
    out << '\n';
  }
  if (!out) throw InputError("write to '" + file + "' failed");
}

json report_json(const ExperimentReport& report) {
  json params = json::object();
  for (const auto& [k, v] : report.params) params[k] = v;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r{{"n", row.n}};
    for (const auto& [k, v] : row.columns) r[k] = finite_or_null(v);
    rows.push_back(r);
  }
  json summary = json::object();
  for (const auto& [k, v] : report.summary) summary[k] = finite_or_null(v);
  return json{{"experiment", report.name},
              {"params", params},
              {"rows", rows},
              {"summary", summary},
              {"pass", report.pass ? json(*report.pass) : json(nullptr)},
              {"tolerance", report.tolerance},
              {"seeds", report.seeds},
              {"wall_clock_seconds", report.wall_clock_seconds},
              {"warnings", report.warnings}};
}

std::string report_text(const ExperimentReport& report) {
  std::ostringstream out;
  out << std::setprecision(8);
  out << "experiment: " << report.name << '\n';
  for (const auto& [k, v] : report.params) out << "  " << k << " = " << v << '\n';
  for (const auto& row : report.rows) {
    out << "  n = " << row.n;
    for (const auto& [k, v] : row.columns) out << "  " << k << " = " << v;
    out << '\n';
  }
  for (const auto& [k, v] : report.summary) out << "  " << k << " = " << v << '\n';
  if (!report.tolerance.empty()) out << "  tolerance: " << report.tolerance << '\n';
  if (report.pass) out << "  result: " << (*report.pass ? "PASS" : "FAIL") << '\n';
  out << "  seeds:";
  for (auto s : report.seeds) out << ' ' << s;
  out << "\n  wall clock: " << report.wall_clock_seconds << " s\n";
  for (const auto& w : report.warnings) out << "  warning: " << w << '\n';
  return out.str();
}

void write_text(const std::string& file, const std::string& text) {
  auto out = open_out(file);
  out << text;
  if (!out) throw InputError("write to '" + file + "' failed");
}

std::string read_text(const std::string& file) {
  auto in = open_in(file);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_json(const std::string& file, const json& value) { write_text(file, value.dump(2) + "\n"); }

json read_json(const std::string& file) {
  try {
    return json::parse(read_text(file));
  } catch (const json::parse_error& e) {
    throw InputError("'" + file + "' is not valid JSON: " + e.what());
  }
}

}  // namespace lrdustat::io
