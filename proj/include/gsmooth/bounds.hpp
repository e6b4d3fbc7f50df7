#pragma once

#include "gsmooth/gcnsim.hpp"
#include "gsmooth/spectral.hpp"

#include <map>
#include <string>
#include <vector>

namespace gsmooth {

struct BoundRecord {
  /// Which inequality of the check this row belongs to.
  std::string label;
  std::map<std::string, double> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  /// Hypothesis of the inequality does not hold for this row; not asserted.
  bool skipped = false;
  std::string note;
};

/// Margin report of one inequality family over a set of instances.
///
/// A record counts as violated when margin < -1e-9 (1 + |rhs|). Skipped
/// records never count. `applicable` is false when the bound's
/// assumptions fail for the whole input; such a report is never violated.
struct BoundCheckReport {
  std::string name;
  int instances = 0;
  std::vector<BoundRecord> records;
  /// Smallest margin over non-skipped records (+inf when there are none).
  double worst_margin;
  bool violated = false;
  bool applicable = true;
  std::string note;
  /// Soft measurements reported but not asserted (e.g. max K/omega).
  std::map<std::string, double> measurements;

  BoundCheckReport();
  explicit BoundCheckReport(std::string report_name);

  void add(std::string label, std::map<std::string, double> params, double lhs, double rhs,
           std::string record_note = {});
  void skip(std::string label, std::map<std::string, double> params, std::string reason);
  /// Appends another report of the same family (records, instances,
  /// measurements as running maxima).
  void merge(const BoundCheckReport& other);
  int violation_count() const;
};

bool is_violation(double lhs, double rhs);

std::string to_json(const BoundCheckReport& report, int indent = 2);
BoundCheckReport report_from_json(const std::string& text);

struct JacksonOptions {
  /// Multiplies C_r in the single-frequency and tail-sum rows. Only the
  /// harness-sensitivity test sets this below 1.
  double single_frequency_scale = 1.0;
  /// Multiplies C'_r in the best-approximation row.
  double jackson_scale = 1.0;
};

/// Rows `lemma1` (E_n <= C'_r omega_r(f, lambda_n^{-1/2}), n = 2..N),
/// `single_frequency` (|f_hat(n)| <= C_r omega_r(f, lambda_n^{-1/2}),
/// n = 2..N) and `tail_sum` (E_n <= C_r sum_{k>n} omega_r(f, lambda_k^{-1/2}),
/// n = 1..N) on an ascending Laplacian decomposition of a connected graph.
BoundCheckReport check_jackson(const SpectralDecomposition& d, const Vector& f, int r,
                               const JacksonOptions& options = {});

/// Rows `ratio_lower`, `ratio_upper` ((2/pi)^r <= ratio <= 1 with
/// ratio = ||(T_t - I)^r P_n f|| / (t^r ||L^{r/2} P_n f||), t = lambda_n^{-1/2})
/// and `omega_vs_L` (t^r ||L^{r/2} P_n f|| <= (pi/2)^r omega_r(f, t)).
/// Rows are skipped when the denominator vanishes.
BoundCheckReport check_equivalence_lemma2(const SpectralDecomposition& d, const Vector& f, int r,
                                          int n);

/// Row `omega_le_2r_K` at every t; measurement `max_K_over_omega`.
BoundCheckReport check_k_omega(const SpectralDecomposition& d, const Vector& f, int r,
                               const std::vector<double>& t_grid);

/// Channel-summed version (W_r and K_r over the columns of F).
BoundCheckReport check_k_omega(const SpectralDecomposition& d, const Matrix& signal, int r,
                               const std::vector<double>& t_grid);

/// ||P relu(f)||^2 <= ||P f||^2 with P f = f - <f, h_1> h_1, one row per
/// column of `samples`. h_1 must be a nonnegative unit vector.
BoundCheckReport check_relu_projection(const Vector& h1, const Matrix& samples);

/// Rows `decay` (E_h(F^(k)) <= mu_high^{2k} ||Q F^(0)||^2, k = 1..K) and
/// `induction` (E_h(F^(k)) <= mu_high^2 E_h(F^(k-1)) + 1e-9 ||Q F^(0)||^2).
/// Not applicable unless the trace is a plain GCN with every ||W^(k)||_F <= 1.
BoundCheckReport check_decay_bound(const LayerTrace& trace, const Filter& filter);

/// Rows `lower_bound` with lhs = m^{-1/2} 2^{-r} W_r(F, t; H~) - 2^{-r} t^r
/// mu_high^{k + r/2} ||F^(0)||_F and rhs = ||F - F^(k)||_F
/// for every stored layer k >= 1, r in r_values and t in t_grid (r = 0 uses
/// W_0 = sum of column norms). Conjugated filters are evaluated in symmetric
/// coordinates. Throws ChannelMismatch when m_K differs from the target's
/// channel count; needs a trace recorded with keep_outputs.
BoundCheckReport check_lower_bound(const Matrix& target, const LayerTrace& trace,
                                   const Filter& filter, const std::vector<int>& r_values,
                                   const std::vector<double>& t_grid);

/// Rows `dilation` (omega_r(f, c t) <= (1 + c)^r omega_r(f, t), c in
/// {0.5, 2, 7.3}), `subadditive` (omega_r(f + g, t) <= omega_r(f, t) +
/// omega_r(g, t)), `order_drop` (omega_r(f, t) <= 2^j omega_{r-j}(f, t)) and
/// `operator_shift` (omega_r(f, t) <= t^j omega_{r-j}(L^{j/2} f, t)),
/// 1 <= j <= r.
BoundCheckReport check_modulus_properties(const SpectralDecomposition& d, const Vector& f,
                                          const Vector& g, int r, double t);

/// Rows `upper_range` (mu_1 <= 1), `lower_range` (-mu_N <= 1), `top_value`
/// (|mu_1 - 1| <= 1e-9) and `top_residual` (||H v - v|| <= 1e-8 for the
/// predicted low-frequency vector: (D+I)^{1/2} 1, D^{1/2} 1, or 1 for H_rw
/// itself, normalised).
BoundCheckReport check_filter_spectrum(const Graph& g, const Filter& filter);

}  // namespace gsmooth
