#ifndef HELMDG_STUDY_HPP
#define HELMDG_STUDY_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "helmdg/errors.hpp"

namespace helmdg {

enum class EstimatorKind { richardson, ppr };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

/// Largest N run without `allow_large`.
inline constexpr std::size_t kDefaultMaxN = 256;

struct StudyConfig {
  std::vector<double> k{10.0};
  std::vector<double> mu{0.0};
  double rho0 = 5.0;
  MeshKind mesh = MeshKind::regular;
  MeshParams mesh_params;
  std::vector<std::size_t> n{4, 8, 16, 32, 64, 128, 256};
  LambdaPolicy lambda = LambdaPolicy::first;
  EstimatorKind estimator = EstimatorKind::richardson;
  SolveOptions solve;
  QuadratureSettings quad;
  std::string out = "results.csv";
  /// err_uhuI_1h uses the L2 variant of ||.||_{1,h}.
  bool norm_literal = false;
  bool allow_large = false;

  /// Throws std::invalid_argument on empty lists, non-increasing N, bad
  /// parameters, or N above kDefaultMaxN without allow_large.
  void validate() const;
};

/// One (k, mu, N) cell. Error columns are relative to ||grad u||_0 of the
/// exact solution; absent values are empty optionals.
struct StudyRecord {
  std::string mesh;
  double k = 0.0;
  double mu = 0.0;
  double rho0 = 0.0;
  std::string lambda_policy;
  std::string estimator;
  std::size_t n = 0;
  std::optional<double> h;
  std::optional<std::size_t> ndof;
  std::optional<double> e1, rate_e1;
  std::optional<double> e2, rate_e2;
  std::optional<double> e3, rate_e3;
  std::optional<double> eta, rate_eta;
  std::optional<double> uhui, rate_uhui;
  std::optional<double> knorm_l2;
  std::optional<double> j0_jump;
  std::string status = "ok";
  /// Not serialized.
  double seconds = 0.0;

  bool ok() const { return status == "ok"; }
};

/// Runs every (k, mu, N) cell in order. A failing cell keeps its row with
/// the reason in `status` and the sweep goes on.
std::vector<StudyRecord> run_study(const StudyConfig& config,
                                   std::ostream* progress = nullptr);

/// Fills the rate columns: log2(E_prev / E_curr) between consecutive rows
/// of the same (mesh, k, mu) family. Throws std::invalid_argument when N
/// does not double inside a family.
void compute_rates(std::vector<StudyRecord>& records);

inline constexpr const char* kCsvHeader =
    "mesh,k,mu,rho0,lambda_policy,estimator,N,h,ndof,E1,rate_E1,E2,rate_E2,"
    "E3,rate_E3,eta,rate_eta,err_uhuI_1h,rate_uhuI,knorm_L2,J0_jump,status";

/// %.5e, empty when absent.
std::string format_value(const std::optional<double>& v);

std::string to_csv_row(const StudyRecord& r);
void write_csv(std::ostream& out, const std::vector<StudyRecord>& records);
/// Writes to a temporary sibling file, then renames over `path`.
void write_csv_atomic(const std::string& path,
                      const std::vector<StudyRecord>& records);
std::vector<StudyRecord> read_csv(std::istream& in);

/// Fixed-width table of the CSV strings.
void print_summary(std::ostream& out, const std::vector<StudyRecord>& records);

}  // namespace helmdg

#endif  // HELMDG_STUDY_HPP
