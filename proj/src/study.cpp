#include "helmdg/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace helmdg {

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::richardson ? "richardson" : "ppr";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "richardson") return EstimatorKind::richardson;
  if (name == "ppr") return EstimatorKind::ppr;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

void StudyConfig::validate() const {
  if (k.empty()) throw std::invalid_argument("study: empty k list");
  if (mu.empty()) throw std::invalid_argument("study: empty mu list");
  if (n.empty()) throw std::invalid_argument("study: empty N list");
  for (double kk : k) {
    if (!(kk > 0.0)) throw std::invalid_argument("study: k must be positive");
  }
  for (double m : mu) {
    if (!(m >= 0.0)) throw std::invalid_argument("study: mu must be >= 0");
  }
  if (!(rho0 > 0.0)) throw std::invalid_argument("study: rho0 must be positive");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) throw std::invalid_argument("study: N must be positive");
    if (i > 0 && n[i] <= n[i - 1]) {
      throw std::invalid_argument("study: N list must be strictly increasing");
    }
    if (i > 0 && n[i] != 2 * n[i - 1]) {
      throw std::invalid_argument("study: consecutive N must double");
    }
    if (n[i] > kDefaultMaxN && !allow_large) {
      throw std::invalid_argument("study: N=" + std::to_string(n[i]) +
                                  " exceeds " + std::to_string(kDefaultMaxN) +
                                  "; pass --allow-large");
    }
  }
  if (!(solve.tol > 1e-14 && solve.tol < 1e-4)) {
    throw std::invalid_argument("study: tol must lie in (1e-14, 1e-4)");
  }
  if (out.empty()) throw std::invalid_argument("study: empty output path");
}

namespace {

std::string clean_status(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return s;
}

struct Previous {
  std::size_t n = 0;
  RecoveredGradient grad;
};

void run_cell(const StudyConfig& config, double k, double mu, std::size_t n,
              std::optional<Previous>& prev, StudyRecord& rec) {
  const MeshPtr mesh =
      std::make_shared<const TriMesh>(build_mesh(config.mesh, n, config.mesh_params));
  rec.h = mesh->h();
  rec.ndof = 3 * mesh->num_triangles();

  const BesselSolution exact(k);
  const ProblemData data = exact.data();
  const DGParams params{k, mu, config.rho0};
  const HelmholtzSolution sol =
      solve_helmholtz(mesh, params, data, config.solve, config.quad);

  const RecoveryOperator op(mesh);
  RecoveredGradient grad = op.apply(sol.uh, config.lambda);

  std::optional<RecoveredGradient> rg;
  if (prev && prev->n * 2 == n && is_nested(prev->grad.x.mesh(), *mesh)) {
    rg = richardson_extrapolate(prev->grad, grad);
  }
  const RecoveredGradient* est = nullptr;
  if (config.estimator == EstimatorKind::ppr) {
    est = &grad;
  } else if (rg) {
    est = &*rg;
  }
  const ErrorInputs inputs{&grad, rg ? &*rg : nullptr, est};
  const ErrorRecord err = compute_errors(sol.uh, inputs, data, params, config.quad);

  const double ref = err.ref_h1;
  rec.e1 = err.e1 / ref;
  rec.e2 = err.e2 / ref;
  if (err.e3) rec.e3 = *err.e3 / ref;
  if (err.eta) rec.eta = *err.eta / ref;
  rec.uhui = (config.norm_literal ? err.uh_ui_1h_literal : err.uh_ui_1h) / ref;
  rec.knorm_l2 = err.k_l2 / ref;
  rec.j0_jump = std::sqrt(err.j0_uh_ui) / ref;

  prev = Previous{n, std::move(grad)};
}

}  // namespace

std::vector<StudyRecord> run_study(const StudyConfig& config,
                                   std::ostream* progress) {
  config.validate();
  std::vector<StudyRecord> records;
  for (double k : config.k) {
    for (double mu : config.mu) {
      std::optional<Previous> prev;
      for (std::size_t n : config.n) {
        StudyRecord rec;
        rec.mesh = to_string(config.mesh);
        rec.k = k;
        rec.mu = mu;
        rec.rho0 = config.rho0;
        rec.lambda_policy = to_string(config.lambda);
        rec.estimator = to_string(config.estimator);
        rec.n = n;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          run_cell(config, k, mu, n, prev, rec);
        } catch (const std::exception& e) {
          rec.status = clean_status(std::string("failed: ") + e.what());
          prev.reset();
        }
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (progress) {
          *progress << "k=" << k << " mu=" << mu << " N=" << n << "  "
                    << (rec.ok() ? "E1=" + format_value(rec.e1) : rec.status)
                    << "  (" << std::fixed << std::setprecision(1)
                    << rec.seconds << " s)" << std::defaultfloat << '\n';
        }
        records.push_back(std::move(rec));
      }
    }
  }
  compute_rates(records);
  return records;
}

void compute_rates(std::vector<StudyRecord>& records) {
  auto rate = [](const std::optional<double>& prev,
                 const std::optional<double>& cur) -> std::optional<double> {
    if (!prev || !cur || *prev == 0.0 || *cur == 0.0) return std::nullopt;
    return std::log2(*prev / *cur);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    StudyRecord& r = records[i];
    r.rate_e1 = r.rate_e2 = r.rate_e3 = r.rate_eta = r.rate_uhui = std::nullopt;
    if (i == 0) continue;
    const StudyRecord& p = records[i - 1];
    if (p.mesh != r.mesh || p.k != r.k || p.mu != r.mu) continue;
    if (r.n != 2 * p.n) {
      throw std::invalid_argument("compute_rates: N goes from " +
                                  std::to_string(p.n) + " to " +
                                  std::to_string(r.n) + ", not a doubling");
    }
    r.rate_e1 = rate(p.e1, r.e1);
    r.rate_e2 = rate(p.e2, r.e2);
    r.rate_e3 = rate(p.e3, r.e3);
    r.rate_eta = rate(p.eta, r.eta);
    r.rate_uhui = rate(p.uhui, r.uhui);
  }
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", *v);
  return buf;
}

std::string to_csv_row(const StudyRecord& r) {
  std::ostringstream s;
  s << r.mesh << ',' << format_value(r.k) << ',' << format_value(r.mu) << ','
    << format_value(r.rho0) << ',' << r.lambda_policy << ',' << r.estimator
    << ',' << r.n << ',' << format_value(r.h) << ','
    << (r.ndof ? std::to_string(*r.ndof) : "") << ',' << format_value(r.e1)
    << ',' << format_value(r.rate_e1) << ',' << format_value(r.e2) << ','
    << format_value(r.rate_e2) << ',' << format_value(r.e3) << ','
    << format_value(r.rate_e3) << ',' << format_value(r.eta) << ','
    << format_value(r.rate_eta) << ',' << format_value(r.uhui) << ','
    << format_value(r.rate_uhui) << ',' << format_value(r.knorm_l2) << ','
    << format_value(r.j0_jump) << ',' << r.status;
  return s.str();
}

void write_csv(std::ostream& out, const std::vector<StudyRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

void write_csv_atomic(const std::string& path,
                      const std::vector<StudyRecord>& records) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    write_csv(out, records);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<StudyRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : split(kCsvHeader)) {
    if (!col.count(name)) {
      throw std::invalid_argument("read_csv: missing column '" + name + "'");
    }
  }
  std::vector<StudyRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("read_csv: line " + std::to_string(lineno) +
                                  " has " + std::to_string(cells.size()) +
                                  " cells");
    }
    auto get = [&](const char* name) -> const std::string& {
      return cells[col.at(name)];
    };
    StudyRecord r;
    try {
      r.mesh = get("mesh");
      r.k = parse_opt(get("k")).value_or(0.0);
      r.mu = parse_opt(get("mu")).value_or(0.0);
      r.rho0 = parse_opt(get("rho0")).value_or(0.0);
      r.lambda_policy = get("lambda_policy");
      r.estimator = get("estimator");
      r.n = std::stoul(get("N"));
      r.h = parse_opt(get("h"));
      if (!get("ndof").empty()) r.ndof = std::stoul(get("ndof"));
      r.e1 = parse_opt(get("E1"));
      r.e2 = parse_opt(get("E2"));
      r.e3 = parse_opt(get("E3"));
      r.eta = parse_opt(get("eta"));
      r.uhui = parse_opt(get("err_uhuI_1h"));
      r.knorm_l2 = parse_opt(get("knorm_L2"));
      r.j0_jump = parse_opt(get("J0_jump"));
      r.rate_e1 = parse_opt(get("rate_E1"));
      r.rate_e2 = parse_opt(get("rate_E2"));
      r.rate_e3 = parse_opt(get("rate_E3"));
      r.rate_eta = parse_opt(get("rate_eta"));
      r.rate_uhui = parse_opt(get("rate_uhuI"));
      r.status = get("status");
    } catch (const std::exception& e) {
      throw std::invalid_argument("read_csv: line " + std::to_string(lineno) +
                                  ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

void print_summary(std::ostream& out, const std::vector<StudyRecord>& records) {
  const std::vector<std::string> head{"mesh", "k",       "mu",   "N",
                                      "E1",   "rate",    "E2",   "rate",
                                      "E3",   "rate",    "eta",  "rate",
                                      "uh-uI", "rate",   "status"};
  std::vector<std::vector<std::string>> rows{head};
  for (const auto& r : records) {
    rows.push_back({r.mesh, format_value(r.k), format_value(r.mu),
                    std::to_string(r.n), format_value(r.e1),
                    format_value(r.rate_e1), format_value(r.e2),
                    format_value(r.rate_e2), format_value(r.e3),
                    format_value(r.rate_e3), format_value(r.eta),
                    format_value(r.rate_eta), format_value(r.uhui),
                    format_value(r.rate_uhui), r.status});
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << std::left << std::setw(int(width[i])) << row[i];
      if (i + 1 < row.size()) out << "  ";
    }
    out << '\n';
  }
}

}  // namespace helmdg
