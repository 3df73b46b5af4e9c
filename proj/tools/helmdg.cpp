// helmdg: convergence studies and inspection tools for the DG Helmholtz solver.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "helmdg/mesh_condition.hpp"
#include "helmdg/study.hpp"

using namespace helmdg;
using json = nlohmann::json;

namespace {

struct MeshOptions {
  std::string kind = "regular";
  std::uint64_t seed = 1;
  double amplitude = 0.2;
  double exponent = 0.5;

  MeshParams params() const {
    MeshParams p;
    p.seed = seed;
    p.amplitude = amplitude;
    p.exponent = exponent;
    return p;
  }
};

void add_mesh_options(CLI::App* app, MeshOptions& m) {
  app->add_option("--mesh", m.kind, "regular | chevron | perturbed")
      ->check(CLI::IsMember({"regular", "chevron", "perturbed"}));
  app->add_option("--seed", m.seed, "perturbation seed");
  app->add_option("--amplitude", m.amplitude, "perturbation amplitude delta");
  app->add_option("--exponent", m.exponent, "perturbation exponent q");
}

template <class T>
std::vector<T> as_list(const json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

// Values from a JSON file; command-line flags given explicitly win.
void apply_config_file(const std::string& path, StudyConfig& cfg, MeshOptions& m) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  const json j = json::parse(in);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "k") cfg.k = as_list<double>(v);
    else if (key == "mu") cfg.mu = as_list<double>(v);
    else if (key == "rho0") cfg.rho0 = v.get<double>();
    else if (key == "mesh") m.kind = v.get<std::string>();
    else if (key == "n") cfg.n = as_list<std::size_t>(v);
    else if (key == "lambda") cfg.lambda = lambda_policy_from_string(v.get<std::string>());
    else if (key == "estimator") cfg.estimator = estimator_kind_from_string(v.get<std::string>());
    else if (key == "tol") cfg.solve.tol = v.get<double>();
    else if (key == "out") cfg.out = v.get<std::string>();
    else if (key == "seed") m.seed = v.get<std::uint64_t>();
    else if (key == "amplitude") m.amplitude = v.get<double>();
    else if (key == "exponent") m.exponent = v.get<double>();
    else if (key == "norm_literal") cfg.norm_literal = v.get<bool>();
    else if (key == "allow_large") cfg.allow_large = v.get<bool>();
    else throw std::runtime_error("unknown config key '" + key + "'");
  }
}

int run_study_command(StudyConfig cfg, MeshOptions mesh, const std::string& config_path,
                      const CLI::App& app, bool quiet) {
  StudyConfig file_cfg = cfg;
  MeshOptions file_mesh = mesh;
  if (!config_path.empty()) apply_config_file(config_path, file_cfg, file_mesh);
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (!given("--k")) cfg.k = file_cfg.k;
  if (!given("--mu")) cfg.mu = file_cfg.mu;
  if (!given("--rho0")) cfg.rho0 = file_cfg.rho0;
  if (!given("--n")) cfg.n = file_cfg.n;
  if (!given("--lambda")) cfg.lambda = file_cfg.lambda;
  if (!given("--estimator")) cfg.estimator = file_cfg.estimator;
  if (!given("--tol")) cfg.solve.tol = file_cfg.solve.tol;
  if (!given("--out")) cfg.out = file_cfg.out;
  if (!given("--norm-literal")) cfg.norm_literal = file_cfg.norm_literal;
  if (!given("--allow-large")) cfg.allow_large = file_cfg.allow_large;
  if (!given("--mesh")) mesh.kind = file_mesh.kind;
  if (!given("--seed")) mesh.seed = file_mesh.seed;
  if (!given("--amplitude")) mesh.amplitude = file_mesh.amplitude;
  if (!given("--exponent")) mesh.exponent = file_mesh.exponent;
  cfg.mesh = mesh_kind_from_string(mesh.kind);
  cfg.mesh_params = mesh.params();

  cfg.validate();
  for (std::size_t n : cfg.n) {
    if (n > kDefaultMaxN) {
      std::cerr << "warning: N=" << n << " needs about "
                << (n * n * 6 * 16 * 40) / (1 << 20)
                << " MiB for the factorization\n";
    }
  }
  const auto records = run_study(cfg, quiet ? nullptr : &std::cerr);
  write_csv_atomic(cfg.out, records);
  print_summary(std::cout, records);
  for (const auto& r : records) {
    if (!r.ok()) return 1;
  }
  return 0;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG solver for the Helmholtz equation with gradient recovery"};
  app.require_subcommand(1);

  // study
  StudyConfig cfg;
  MeshOptions study_mesh;
  std::string config_path;
  std::string lambda = "first";
  std::string estimator = "richardson";
  bool quiet = false;
  auto* study = app.add_subcommand("study", "run a (k, mu, N) convergence sweep");
  study->add_option("--config", config_path, "JSON config file");
  study->add_option("--k", cfg.k, "wave numbers")->delimiter(',');
  study->add_option("--mu", cfg.mu, "penalty exponents")->delimiter(',');
  study->add_option("--rho0", cfg.rho0, "penalty weight");
  study->add_option("--n", cfg.n, "mesh sizes N, doubling")->delimiter(',');
  study->add_option("--lambda", lambda, "first | average")
      ->check(CLI::IsMember({"first", "average"}));
  study->add_option("--estimator", estimator, "richardson | ppr")
      ->check(CLI::IsMember({"richardson", "ppr"}));
  study->add_option("--tol", cfg.solve.tol, "relative residual tolerance");
  study->add_option("--out", cfg.out, "CSV output path");
  study->add_flag("--norm-literal", cfg.norm_literal,
                  "err_uhuI_1h with the L2 term instead of the gradient");
  study->add_flag("--allow-large", cfg.allow_large, "permit N above 256");
  study->add_flag("--quiet", quiet, "no per-cell progress on stderr");
  add_mesh_options(study, study_mesh);

  // dump-mesh
  MeshOptions dm_mesh;
  std::size_t dm_n = 4;
  std::string dm_out;
  auto* dump_mesh = app.add_subcommand("dump-mesh", "write a mesh as text");
  add_mesh_options(dump_mesh, dm_mesh);
  dump_mesh->add_option("--n", dm_n, "cells per side")->required();
  dump_mesh->add_option("--out", dm_out, "output path (default stdout)");

  // dump-system
  MeshOptions ds_mesh;
  std::size_t ds_n = 4;
  DGParams ds_params;
  std::string ds_out;
  std::string ds_rhs;
  auto* dump_system = app.add_subcommand("dump-system", "write the assembled matrix");
  add_mesh_options(dump_system, ds_mesh);
  dump_system->add_option("--n", ds_n, "cells per side")->required();
  dump_system->add_option("--k", ds_params.k, "wave number");
  dump_system->add_option("--mu", ds_params.mu, "penalty exponent");
  dump_system->add_option("--rho0", ds_params.rho0, "penalty weight");
  dump_system->add_option("--out", ds_out, "matrix output (default stdout)");
  dump_system->add_option("--rhs", ds_rhs, "also write the load vector here");

  // mesh-audit
  MeshOptions ma_mesh;
  std::vector<std::size_t> ma_n{8, 16, 32, 64};
  auto* audit = app.add_subcommand("mesh-audit", "mesh condition over a refinement family");
  add_mesh_options(audit, ma_mesh);
  audit->add_option("--n", ma_n, "mesh sizes")->delimiter(',');

  // rates
  std::string rates_in;
  std::string rates_out;
  auto* rates = app.add_subcommand("rates", "recompute rate columns of a CSV");
  rates->add_option("--in", rates_in, "input CSV")->required();
  rates->add_option("--out", rates_out, "output CSV (default: rewrite input)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*study) {
      cfg.lambda = lambda_policy_from_string(lambda);
      cfg.estimator = estimator_kind_from_string(estimator);
      return run_study_command(cfg, study_mesh, config_path, *study, quiet);
    }
    if (*dump_mesh) {
      const TriMesh mesh =
          build_mesh(mesh_kind_from_string(dm_mesh.kind), dm_n, dm_mesh.params());
      std::ofstream file;
      write_mesh(open_out(dm_out, file), mesh);
      return 0;
    }
    if (*dump_system) {
      const TriMesh mesh =
          build_mesh(mesh_kind_from_string(ds_mesh.kind), ds_n, ds_mesh.params());
      const ComplexSparseSystem sys = assemble_system(mesh, ds_params);
      std::ofstream file;
      write_system(open_out(ds_out, file), sys.matrix);
      if (!ds_rhs.empty()) {
        const BesselSolution exact(ds_params.k);
        const CVector b = assemble_rhs(mesh, ds_params.k, exact.data());
        std::ofstream rhs(ds_rhs);
        if (!rhs) throw std::runtime_error("cannot write " + ds_rhs);
        rhs << std::setprecision(17);
        for (Eigen::Index i = 0; i < b.size(); ++i) {
          rhs << i << ' ' << b[i].real() << ' ' << b[i].imag() << '\n';
        }
      }
      return 0;
    }
    if (*audit) {
      const MeshKind kind = mesh_kind_from_string(ma_mesh.kind);
      std::vector<MeshConditionReport> reports;
      std::cout << std::setw(6) << "N" << std::setw(14) << "h" << std::setw(14)
                << "max_par" << std::setw(14) << "mean_par" << std::setw(14)
                << "max_iso" << std::setw(14) << "beta_gap" << std::setw(10)
                << "min_angle" << '\n';
      for (std::size_t n : ma_n) {
        const TriMesh mesh = build_mesh(kind, n, ma_mesh.params());
        reports.push_back(measure_mesh_condition(mesh));
        const auto& r = reports.back();
        std::cout << std::setw(6) << n << std::scientific << std::setprecision(5)
                  << std::setw(14) << r.h << std::setw(14)
                  << r.max_parallelogram_defect << std::setw(14)
                  << r.mean_parallelogram_defect << std::setw(14)
                  << r.max_isosceles_defect << std::setw(14)
                  << r.max_beta_mismatch << std::fixed << std::setprecision(2)
                  << std::setw(10) << mesh.min_angle_deg() << std::defaultfloat
                  << '\n';
      }
      if (reports.size() >= 3) {
        const AlphaEstimate a = estimate_alpha(reports);
        if (a.exact) {
          std::cout << "alpha: exact (all defects vanish)\n";
        } else {
          auto show = [](const std::optional<double>& v) {
            return v ? std::to_string(*v) : std::string("inf");
          };
          std::cout << "alpha: " << a.alpha << "  (interior " << show(a.interior)
                    << ", boundary " << show(a.boundary) << ")\n";
        }
      }
      return 0;
    }
    if (*rates) {
      std::ifstream in(rates_in);
      if (!in) throw std::runtime_error("cannot open " + rates_in);
      auto records = read_csv(in);
      in.close();
      compute_rates(records);
      write_csv_atomic(rates_out.empty() ? rates_in : rates_out, records);
      print_summary(std::cout, records);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
