#ifndef LRDUSTAT_IO_HPP
#define LRDUSTAT_IO_HPP

#include "lrdustat/hermite.hpp"
#include "lrdustat/limit_law.hpp"
#include "lrdustat/lrd_sim.hpp"
#include "lrdustat/ustat.hpp"
#include "lrdustat/verify.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <string>

namespace lrdustat::io {

using json = nlohmann::ordered_json;

/// 16-byte header of the binary path format, followed by little-endian doubles.
inline constexpr char kPathMagic[16] = {'L', 'R', 'D', 'U', 'S', 'T', 'A', 'T',
                                        '-', 'P', 'A', 'T', 'H', '\0', '\0', '\0'};

/// One column with header `value`.
void write_path_csv(const std::string& file, const Eigen::Ref<const Eigen::VectorXd>& values);
Eigen::VectorXd read_path_csv(const std::string& file);

void write_path_binary(const std::string& file, const Eigen::Ref<const Eigen::VectorXd>& values);
Eigen::VectorXd read_path_binary(const std::string& file);

/// Binary when the file starts with the path magic, CSV otherwise.
Eigen::VectorXd read_path(const std::string& file);

/// Columns k,lambda,raw,normalized for k = 1..n-1.
void write_ustat_csv(const std::string& file, const UStatPath& path);

json params_json(const LrdParams& params, Eigen::Index n, std::uint64_t seed);

/// {Q, source, tol, entries: [[k, l, a], ...], rank, a00}; entries list
/// (k, l) != (0, 0) with |a| > tol.
json coeffs_json(const HermiteCoeffTable& table);

json summability_json(const SummabilityReport& report);
json scaling_json(const ScalingConstants& sc);

/// {descriptor, grid, quantiles}.
json critical_values_json(const LimitEnsemble& ensemble, const CriticalValueTable& table);
/// Columns level,value.
void write_critical_values_csv(const std::string& file, const CriticalValueTable& table);
/// Paths as rows, one column per grid point, header holding the grid.
void write_ensemble_csv(const std::string& file, const LimitEnsemble& ensemble);

json report_json(const ExperimentReport& report);
std::string report_text(const ExperimentReport& report);

void write_text(const std::string& file, const std::string& text);
std::string read_text(const std::string& file);
void write_json(const std::string& file, const json& value);
json read_json(const std::string& file);

}  // namespace lrdustat::io

#endif  // LRDUSTAT_IO_HPP
