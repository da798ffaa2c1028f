#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "trp/duality.hpp"
#include "trp/report_io.hpp"

namespace trp::cli {

namespace {

using nlohmann::json;

std::shared_ptr<spdlog::logger> logger() {
  static std::once_flag once;
  static std::shared_ptr<spdlog::logger> log;
  std::call_once(once, [] {
    log = spdlog::get("trp");
    if (!log) log = spdlog::stderr_logger_mt("trp");
  });
  return log;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

SolveOptions solve_options(const Options& opt) {
  SolveOptions s;
  s.max_iterations = opt.max_iter;
  s.tolerance = opt.tol;
  s.seed = opt.seed;
  return s;
}

MetaSection make_meta(const std::string& command, const Options& opt, const LoadedInstance& li) {
  MetaSection meta;
  meta.command = command;
  meta.tolerances = default_tolerances();
  meta.tolerances["dinkelbach"] = opt.tol;
  meta.seed = opt.seed;
  if (li.original) meta.transform = TransformInfo{li.original->alpha, li.original->beta};
  return meta;
}

void print_matrix_rows(std::ostream& os, const std::string& name, const Matrix& m) {
  os << name << ":\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << std::setw(12) << fixed(m(i, j), 6);
    os << '\n';
  }
}

void write_table(std::ostream& os, const ReportFile& r) {
  auto row = [&](const std::string& k, double v) {
    os << std::left << std::setw(28) << k << fixed(v, 10) << '\n';
  };
  if (r.meta.transform) {
    row("ngtrp.alpha", r.meta.transform->alpha);
    row("ngtrp.beta", r.meta.transform->beta);
  }
  if (r.primal) {
    row("primal.value", r.primal->value);
    row("primal.iterations", r.primal->iterations);
    row("primal.residual", r.primal->residual);
  }
  if (r.duals) {
    row("duals.gtrp", r.duals->gtrp);
    row("duals.gr", r.duals->gr);
    row("duals.gs", r.duals->gs);
    row("duals.grs", r.duals->grs);
  }
  if (r.gaps) {
    row("gaps.gtrp", r.gaps->gtrp);
    row("gaps.gs", r.gaps->gs);
  }
  if (r.gap_condition) {
    os << std::left << std::setw(28) << "gap_condition" << "multiplicity "
       << r.gap_condition->multiplicity << ", holds " << (r.gap_condition->holds ? "true" : "false")
       << '\n';
  }
  if (r.certificates) {
    if (const auto& g = r.certificates->grs) {
      row("certificate.grs.mu", g->mu);
      row("certificate.grs.minEig", g->min_eig);
      row("certificate.grs.traceSlack", g->trace_slack);
    }
    if (const auto& s = r.certificates->gs) {
      row("certificate.gs.rho", s->rho);
      row("certificate.gs.minEig", s->min_eig);
      row("certificate.gs.traceS", s->trace_s);
    }
  }
}

int emit(const ReportFile& report, const Options& opt, std::ostream& out, std::ostream& err) {
  std::ostringstream body;
  if (opt.format == Format::kTable) {
    write_table(body, report);
  } else {
    body << to_json(report).dump(2) << '\n';
  }
  if (opt.out.empty()) {
    out << body.str();
    return kExitOk;
  }
  std::ofstream f(opt.out);
  if (!f) {
    err << "error: cannot write " << opt.out << '\n';
    return kExitValidation;
  }
  f << body.str();
  return kExitOk;
}

// Maps the library's exception types onto the exit-code contract.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

void configure_logging() {
  auto log = logger();
  const char* env = std::getenv("TRP_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") {
    log->set_level(spdlog::level::debug);
  } else if (level == "info") {
    log->set_level(spdlog::level::info);
  } else {
    log->set_level(spdlog::level::err);
  }
}

int cmd_solve(const std::filesystem::path& path, const Options& opt, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto li = load_instance(path);
    const auto& inst = li.instance;
    logger()->info("solve {}: n = {}, p = {}", path.string(), inst.n(), inst.p());
    const auto sol = dinkelbach_solve(inst, solve_options(opt));
    logger()->debug("dinkelbach converged in {} iterations, residual {}", sol.iterations, sol.residual);
    if (opt.samples > 0) {
      const double lower = oracle_search(inst, opt.samples, opt.seed);
      logger()->info("sampling oracle lower bound {} vs value {}", lower, sol.value);
      if (lower > sol.value + 1e-8) {
        std::ostringstream os;
        os << "sampling oracle found objective " << lower << " above the solver value " << sol.value;
        throw NumericalError(os.str());
      }
    }
    ReportFile report;
    report.primal = make_primal_section(sol);
    report.meta = make_meta("solve", opt, li);
    return emit(report, opt, out, err);
  });
}

int cmd_dual(const std::filesystem::path& path, const Options& opt, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const auto li = load_instance(path);
    const auto& inst = li.instance;
    const auto grs = grs_dual_value(inst, opt.seed);
    const auto gs = gs_dual_value(inst, opt.seed);
    ReportFile report;
    report.duals = DualsSection{gtrp_dual_value(inst), gr_dual_value(inst), gs.rho, grs.value};
    report.certificates = CertificatesSection{make_grs_section(grs.value, grs.certificate),
                                              make_gs_section(gs)};
    report.meta = make_meta("dual", opt, li);
    return emit(report, opt, out, err);
  });
}

int cmd_gap(const std::filesystem::path& path, const Options& opt, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    const auto li = load_instance(path);
    ReportOptions ro;
    ro.solve = solve_options(opt);
    const auto full = full_report(li.instance, ro);
    return emit(make_report(full, make_meta("gap", opt, li)), opt, out, err);
  });
}

int cmd_certify(const std::filesystem::path& path, const Options& opt, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto li = load_instance(path);
    const auto& inst = li.instance;
    const auto grs = grs_dual_value(inst, opt.seed);
    const SymMatrix q(grs.value * inst.a().matrix() - inst.b().matrix());
    const auto check = verify_certificate(inst.g().sym(), q, grs.certificate);
    const auto gs = gs_dual_value(inst, opt.seed);
    const auto gs_check = verify_gs_certificate(inst, gs.rho, gs.s);

    ReportFile report;
    auto grs_section = make_grs_section(grs.value, grs.certificate);
    grs_section.min_eig = check.min_eig;
    grs_section.trace_slack = check.trace_slack;
    report.certificates = CertificatesSection{grs_section, make_gs_section(gs_check)};
    report.meta = make_meta("certify", opt, li);
    const int rc = emit(report, opt, out, err);
    if (!check.passed) {
      for (const auto& v : check.violations) err << "certificate check failed: " << v << '\n';
      return kExitNumerical;
    }
    if (gs_check.min_eig < -tol::kProjectionResidual || gs_check.trace_s < -tol::kCertificate) {
      err << "gs certificate check failed: minEig " << gs_check.min_eig << ", traceS "
          << gs_check.trace_s << '\n';
      return kExitNumerical;
    }
    return rc;
  });
}

namespace {

ProblemInstance gs1_instance() {
  Matrix g(2, 2);
  g << 1, 0, 0, 2;
  Matrix b(2, 2);
  b << 1, 0, 0, 3;
  return ProblemInstance(SpdMatrix(SymMatrix::identity(2), "A"), SymMatrix(b),
                         SpdMatrix(SymMatrix(g), "G"));
}

int repro_gs1(const Options& opt, std::ostream& out) {
  const auto inst = gs1_instance();
  ReportOptions ro;
  ro.solve = solve_options(opt);
  const auto r = full_report(inst, ro);
  const Matrix& g = inst.g().matrix();
  const Matrix& a = inst.a().matrix();
  const Matrix& b = inst.b().matrix();
  const Eigen::Index n = inst.n();

  out << "v(GS1)=" << fixed(r.primal.value, 6) << "\n";
  out << "v(DGS1)=" << fixed(r.dual_gs, 6) << "\n";
  out << "gap=" << fixed(r.gap_gs, 6) << "\n";
  out << "v(GRS)=" << fixed(r.dual_grs, 6) << "  lambda_max(A^-1 B)=" << fixed(r.dual_gtrp, 6) << "\n";
  print_matrix_rows(out, "G (x) B", kron(g, b));
  print_matrix_rows(out, "S (x) I_n", kron(r.gs_certificate.s.matrix(), Matrix::Identity(n, n)));
  print_matrix_rows(out, "G (x) A", kron(g, a));
  print_matrix_rows(out, "rho G (x) A - G (x) B - S (x) I_n",
                    r.gs_certificate.rho * kron(g, a) - kron(g, b) -
                        kron(r.gs_certificate.s.matrix(), Matrix::Identity(n, n)));
  out << "trace(S)=" << fixed(r.gs_certificate.trace_s, 6) << "\n";
  return kExitOk;
}

int repro_grq1(const Options& opt, std::ostream& out, std::ostream& err) {
  constexpr int kInstances = 50;
  int confirmed = 0;
  for (int k = 0; k < kInstances; ++k) {
    const auto seed = opt.seed + static_cast<std::uint64_t>(k);
    const Eigen::Index n = 2 + k % 4;
    const auto inst = random_instance(n, 1, seed);
    SolveOptions so = solve_options(opt);
    const auto sol = dinkelbach_solve(inst, so);
    const double dual = gtrp_dual_value(inst);
    const double gap = std::abs(dual - sol.value);
    if (gap <= 1e-7) {
      ++confirmed;
    } else {
      err << "instance " << k << " (seed " << seed << "): gap " << gap << '\n';
    }
  }
  out << confirmed << "/" << kInstances << " zero-gap confirmations\n";
  return confirmed == kInstances ? kExitOk : kExitNumerical;
}

}  // namespace

int cmd_repro(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (name == "gs1") return repro_gs1(opt, out);
    if (name == "grq1") return repro_grq1(opt, out, err);
    err << "unknown repro target \"" << name << "\" (expected gs1 or grq1)\n";
    return kExitValidation;
  });
}

namespace {

struct BatchRow {
  std::string file;
  bool ok = false;
  std::string error;
  int exit_code = kExitOk;
  double value = 0.0;
  double dual_gtrp = 0.0;
  double dual_grs = 0.0;
  double gap = 0.0;
  double weak_duality = 0.0;
  double wall_ms = 0.0;
};

BatchRow run_one(const std::filesystem::path& path, const Options& opt) {
  BatchRow row;
  row.file = path.filename().string();
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto li = load_instance(path);
    ReportOptions ro;
    ro.solve = solve_options(opt);
    ro.compute_gs = false;
    const auto r = full_report(li.instance, ro);
    row.ok = true;
    row.value = r.primal.value;
    row.dual_gtrp = r.dual_gtrp;
    row.dual_grs = r.dual_grs;
    row.gap = r.gap_gtrp;
    // Differences at rounding level (p = 1 has no gap) are reported as 0.
    const double margin = r.dual_gtrp - r.primal.value;
    row.weak_duality = std::abs(margin) <= 1e-12 * (1.0 + std::abs(r.dual_gtrp)) ? 0.0 : margin;
  } catch (const ValidationError& e) {
    row.error = e.what();
    row.exit_code = kExitValidation;
  } catch (const NumericalError& e) {
    row.error = e.what();
    row.exit_code = kExitNumerical;
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

int cmd_batch(const std::filesystem::path& dir, const Options& opt, std::ostream& out,
              std::ostream& err) {
  if (!std::filesystem::is_directory(dir)) {
    err << "validation error: " << dir.string() << " is not a directory\n";
    return kExitValidation;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<BatchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) rows[i] = run_one(files[i], opt);
  };
  const int jobs = std::max(1, std::min<int>(opt.jobs, static_cast<int>(std::max<std::size_t>(files.size(), 1))));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  int failures = 0;
  json aggregate = json::array();
  for (const auto& r : rows) {
    if (!r.ok) ++failures;
    json j = {{"file", r.file}, {"ok", r.ok}, {"wall_ms", r.wall_ms}};
    if (r.ok) {
      j["value"] = r.value;
      j["dual_gtrp"] = r.dual_gtrp;
      j["dual_grs"] = r.dual_grs;
      j["gap"] = r.gap;
      j["weak_duality"] = r.weak_duality;
    } else {
      j["error"] = r.error;
      j["exit_code"] = r.exit_code;
    }
    aggregate.push_back(std::move(j));
  }
  const json summary = {{"instances", rows.size()}, {"failures", failures}, {"rows", aggregate}};

  std::ostringstream body;
  if (opt.format == Format::kJson) {
    body << summary.dump(2) << '\n';
  } else {
    body << std::left << std::setw(28) << "file" << std::setw(16) << "value" << std::setw(16)
         << "dual" << std::setw(16) << "gap" << std::setw(16) << "weak_duality" << "wall_ms\n";
    for (const auto& r : rows) {
      body << std::left << std::setw(28) << r.file;
      if (r.ok) {
        body << std::setw(16) << fixed(r.value, 10) << std::setw(16) << fixed(r.dual_gtrp, 10)
             << std::setw(16) << fixed(r.gap, 10) << std::setw(16) << fixed(r.weak_duality, 10)
             << fixed(r.wall_ms, 2) << '\n';
      } else {
        body << "FAILED (exit " << r.exit_code << "): " << r.error << '\n';
      }
    }
  }
  if (opt.out.empty()) {
    out << body.str();
  } else {
    std::ofstream f(opt.out);
    f << summary.dump(2) << '\n';
    out << body.str();
  }
  for (const auto& r : rows)
    if (!r.ok) err << r.file << ": " << r.error << '\n';
  if (failures == 0) return kExitOk;
  const bool any_numerical = std::any_of(rows.begin(), rows.end(), [](const BatchRow& r) {
    return r.exit_code == kExitNumerical;
  });
  return any_numerical ? kExitNumerical : kExitValidation;
}

}  // namespace trp::cli
