#include "trp/report_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "trp/combinatorics.hpp"
#include "trp/lp.hpp"

namespace trp {

using nlohmann::json;

namespace {

constexpr double kAsymmetryTol = 1e-8;

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

SymMatrix checked_symmetric(const Matrix& m, const std::string& what) {
  if (m.rows() != m.cols()) throw ValidationError(what + " must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTol * scale) {
    std::ostringstream os;
    os << what << " is not symmetric (max |M - M^T| = " << asym << ")";
    throw ValidationError(os.str());
  }
  return SymMatrix(m);
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string("missing required field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + " must be a number");
  return j.get<double>();
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + " must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ValidationError(what + " must be a nested array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(what + " has ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      m(i, k) = number(row[static_cast<std::size_t>(k)], what + " entries");
      if (!std::isfinite(m(i, k))) throw ValidationError(what + " has a non-finite entry");
    }
  }
  return m;
}

LoadedInstance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON at " + line_column(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("instance file must hold a JSON object");
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("instance schema violation: ") + e.what());
  }
}

namespace {

LoadedInstance instance_from_json_impl(const json& j) {
  const auto n = require(j, "n").get<long long>();
  const auto p = require(j, "p").get<long long>();
  if (n < 1 || p < 1 || p > n) {
    std::ostringstream os;
    os << "need 1 <= p <= n, got n = " << n << ", p = " << p;
    throw ValidationError(os.str());
  }
  const Matrix a = matrix_from_json(require(j, "A"), "A");
  const Matrix b = matrix_from_json(require(j, "B"), "B");
  const Matrix g = matrix_from_json(require(j, "G"), "G");
  if (a.rows() != n || b.rows() != n || g.rows() != p) {
    std::ostringstream os;
    os << "matrix sizes do not match n = " << n << ", p = " << p << " (A " << a.rows() << ", B "
       << b.rows() << ", G " << g.rows() << ")";
    throw ValidationError(os.str());
  }

  ProblemInstance inst(SpdMatrix(checked_symmetric(a, "A"), "A"), checked_symmetric(b, "B"),
                       SpdMatrix(checked_symmetric(g, "G"), "G"));
  if (j.contains("alpha") || j.contains("beta")) {
    NgtrpInstance ng{inst, j.contains("alpha") ? number(j["alpha"], "alpha") : 0.0,
                     j.contains("beta") ? number(j["beta"], "beta") : 0.0};
    return {ngtrp_to_gtrp(ng), ng};
  }
  return {std::move(inst), std::nullopt};
}

}  // namespace

LoadedInstance instance_from_json(const json& j) { return instance_from_json_impl(j); }

LoadedInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read instance file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

json instance_to_json(const ProblemInstance& inst) {
  return json{{"n", inst.n()},
              {"p", inst.p()},
              {"A", matrix_to_json(inst.a().matrix())},
              {"B", matrix_to_json(inst.b().matrix())},
              {"G", matrix_to_json(inst.g().matrix())}};
}

std::map<std::string, double> default_tolerances() {
  return {{"bisection", tol::kBisection},     {"certificate", tol::kCertificate},
          {"decide", tol::kDecide},           {"dinkelbach", tol::kDinkelbach},
          {"doubly_stochastic", tol::kDoublyStochastic},
          {"feasibility", tol::kFeasibility}, {"lp", tol::kLp},
          {"multiplicity", tol::kMultiplicity},
          {"projection_residual", tol::kProjectionResidual},
          {"spd", tol::kSpd}};
}

json to_json(const ReportFile& r) {
  json j = json::object();
  if (r.primal) {
    j["primal"] = {{"value", r.primal->value},
                   {"X", matrix_to_json(r.primal->x)},
                   {"iterations", r.primal->iterations},
                   {"residual", r.primal->residual}};
  }
  if (r.duals)
    j["duals"] = {{"gtrp", r.duals->gtrp}, {"gr", r.duals->gr}, {"gs", r.duals->gs}, {"grs", r.duals->grs}};
  if (r.gaps) j["gaps"] = {{"gtrp", r.gaps->gtrp}, {"gs", r.gaps->gs}};
  if (r.gap_condition)
    j["gap_condition"] = {{"multiplicity", r.gap_condition->multiplicity},
                          {"holds", r.gap_condition->holds}};
  if (r.certificates) {
    json c = json::object();
    if (const auto& g = r.certificates->grs) {
      c["grs"] = {{"mu", g->mu},
                  {"M", matrix_to_json(g->m)},
                  {"W", matrix_to_json(g->w)},
                  {"minEig", g->min_eig},
                  {"traceSlack", g->trace_slack}};
    }
    if (const auto& s = r.certificates->gs) {
      c["gs"] = {{"rho", s->rho},
                 {"S", matrix_to_json(s->s)},
                 {"minEig", s->min_eig},
                 {"traceS", s->trace_s}};
    }
    j["certificates"] = std::move(c);
  }
  json meta = {{"command", r.meta.command},
               {"tolerances", r.meta.tolerances},
               {"seed", r.meta.seed},
               {"version", r.meta.version}};
  if (r.meta.transform)
    meta["transform"] = {{"alpha", r.meta.transform->alpha}, {"beta", r.meta.transform->beta}};
  j["meta"] = std::move(meta);
  return j;
}

ReportFile report_from_json(const json& j) {
  try {
    ReportFile r;
    if (j.contains("primal")) {
      const auto& s = j["primal"];
      r.primal = PrimalSection{number(require(s, "value"), "primal.value"),
                               matrix_from_json(require(s, "X"), "primal.X"),
                               require(s, "iterations").get<int>(),
                               number(require(s, "residual"), "primal.residual")};
    }
    if (j.contains("duals")) {
      const auto& s = j["duals"];
      r.duals = DualsSection{number(require(s, "gtrp"), "duals.gtrp"), number(require(s, "gr"), "duals.gr"),
                             number(require(s, "gs"), "duals.gs"), number(require(s, "grs"), "duals.grs")};
    }
    if (j.contains("gaps")) {
      const auto& s = j["gaps"];
      r.gaps = GapsSection{number(require(s, "gtrp"), "gaps.gtrp"), number(require(s, "gs"), "gaps.gs")};
    }
    if (j.contains("gap_condition")) {
      const auto& s = j["gap_condition"];
      r.gap_condition = GapConditionSection{require(s, "multiplicity").get<int>(),
                                            require(s, "holds").get<bool>()};
    }
    if (j.contains("certificates")) {
      const auto& s = j["certificates"];
      CertificatesSection c;
      if (s.contains("grs")) {
        const auto& g = s["grs"];
        c.grs = GrsCertificateSection{number(require(g, "mu"), "grs.mu"),
                                      matrix_from_json(require(g, "M"), "grs.M"),
                                      matrix_from_json(require(g, "W"), "grs.W"),
                                      number(require(g, "minEig"), "grs.minEig"),
                                      number(require(g, "traceSlack"), "grs.traceSlack")};
      }
      if (s.contains("gs")) {
        const auto& g = s["gs"];
        c.gs = GsCertificateSection{number(require(g, "rho"), "gs.rho"),
                                    matrix_from_json(require(g, "S"), "gs.S"),
                                    number(require(g, "minEig"), "gs.minEig"),
                                    number(require(g, "traceS"), "gs.traceS")};
      }
      r.certificates = std::move(c);
    }
    const auto& m = require(j, "meta");
    r.meta.command = require(m, "command").get<std::string>();
    r.meta.tolerances = require(m, "tolerances").get<std::map<std::string, double>>();
    r.meta.seed = require(m, "seed").get<std::uint64_t>();
    r.meta.version = require(m, "version").get<std::string>();
    if (m.contains("transform")) {
      const auto& t = m["transform"];
      r.meta.transform = TransformInfo{number(require(t, "alpha"), "alpha"),
                                       number(require(t, "beta"), "beta")};
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report schema violation: ") + e.what());
  }
}

PrimalSection make_primal_section(const SolveReport& s) {
  return {s.value, s.maximizer.matrix(), s.iterations, s.residual};
}

GrsCertificateSection make_grs_section(double mu, const SLemmaCertificate& c) {
  return {mu, c.m.matrix(), c.w.matrix(), c.min_eig, c.trace_slack};
}

GsCertificateSection make_gs_section(const GsDualCertificate& c) {
  return {c.rho, c.s.matrix(), c.min_eig, c.trace_s};
}

ReportFile make_report(const DualityReport& r, const MetaSection& meta) {
  ReportFile out;
  out.primal = make_primal_section(r.primal);
  out.duals = DualsSection{r.dual_gtrp, r.dual_gr, r.dual_gs, r.dual_grs};
  out.gaps = GapsSection{r.gap_gtrp, r.gap_gs};
  out.gap_condition = GapConditionSection{r.top_multiplicity, r.gap_condition_holds};
  out.certificates =
      CertificatesSection{make_grs_section(r.dual_grs, r.certificate), make_gs_section(r.gs_certificate)};
  out.meta = meta;
  return out;
}

}  // namespace trp
