#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "trp/duality.hpp"
#include "trp/model.hpp"

namespace trp {

inline constexpr const char* kSchemaVersion = "1";

/// A parsed instance file. Files carrying "alpha"/"beta" are homogenized;
/// `instance` then holds the transformed problem and `original` the input.
struct LoadedInstance {
  ProblemInstance instance;
  std::optional<NgtrpInstance> original;
};

/// Throws ValidationError for malformed JSON (with line and column), bad
/// shapes, asymmetry above 1e-8 relative, or non-SPD A / G.
LoadedInstance parse_instance(const std::string& text);
LoadedInstance load_instance(const std::filesystem::path& path);
LoadedInstance instance_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const ProblemInstance& inst);

struct PrimalSection {
  double value = 0.0;
  Matrix x;
  int iterations = 0;
  double residual = 0.0;
  bool operator==(const PrimalSection&) const = default;
};

struct DualsSection {
  double gtrp = 0.0;
  double gr = 0.0;
  double gs = 0.0;
  double grs = 0.0;
  bool operator==(const DualsSection&) const = default;
};

struct GapsSection {
  double gtrp = 0.0;
  double gs = 0.0;
  bool operator==(const GapsSection&) const = default;
};

struct GapConditionSection {
  int multiplicity = 0;
  bool holds = false;
  bool operator==(const GapConditionSection&) const = default;
};

struct GrsCertificateSection {
  double mu = 0.0;
  Matrix m;
  Matrix w;
  double min_eig = 0.0;
  double trace_slack = 0.0;
  bool operator==(const GrsCertificateSection&) const = default;
};

struct GsCertificateSection {
  double rho = 0.0;
  Matrix s;
  double min_eig = 0.0;
  double trace_s = 0.0;
  bool operator==(const GsCertificateSection&) const = default;
};

struct CertificatesSection {
  std::optional<GrsCertificateSection> grs;
  std::optional<GsCertificateSection> gs;
  bool operator==(const CertificatesSection&) const = default;
};

struct TransformInfo {
  double alpha = 0.0;
  double beta = 0.0;
  bool operator==(const TransformInfo&) const = default;
};

struct MetaSection {
  std::string command;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;
  std::string version = kSchemaVersion;
  std::optional<TransformInfo> transform;
  bool operator==(const MetaSection&) const = default;
};

struct ReportFile {
  std::optional<PrimalSection> primal;
  std::optional<DualsSection> duals;
  std::optional<GapsSection> gaps;
  std::optional<GapConditionSection> gap_condition;
  std::optional<CertificatesSection> certificates;
  MetaSection meta;
  bool operator==(const ReportFile&) const = default;
};

nlohmann::json to_json(const ReportFile& report);
/// Throws ValidationError on schema violations.
ReportFile report_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& what);

PrimalSection make_primal_section(const SolveReport& s);
GrsCertificateSection make_grs_section(double mu, const SLemmaCertificate& c);
GsCertificateSection make_gs_section(const GsDualCertificate& c);

/// Populates every section from a full duality report.
ReportFile make_report(const DualityReport& r, const MetaSection& meta);

std::map<std::string, double> default_tolerances();

}  // namespace trp
