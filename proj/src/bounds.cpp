#include "gsmooth/bounds.hpp"

#include "gsmooth/error.hpp"
#include "gsmooth/smoothness.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>

namespace gsmooth {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool is_violation(double lhs, double rhs) { return rhs - lhs < -1e-9 * (1.0 + std::abs(rhs)); }

BoundCheckReport::BoundCheckReport() : worst_margin(kInf) {}

BoundCheckReport::BoundCheckReport(std::string report_name)
    : name(std::move(report_name)), worst_margin(kInf) {}

void BoundCheckReport::add(std::string label, std::map<std::string, double> params, double lhs,
                           double rhs, std::string record_note) {
  BoundRecord rec{std::move(label), std::move(params), lhs, rhs, rhs - lhs, false,
                  std::move(record_note)};
  worst_margin = std::min(worst_margin, rec.margin);
  if (applicable && is_violation(lhs, rhs)) violated = true;
  records.push_back(std::move(rec));
}

void BoundCheckReport::skip(std::string label, std::map<std::string, double> params,
                            std::string reason) {
  records.push_back(BoundRecord{std::move(label), std::move(params), 0.0, 0.0, 0.0, true,
                                std::move(reason)});
}

void BoundCheckReport::merge(const BoundCheckReport& other) {
  instances += other.instances;
  records.insert(records.end(), other.records.begin(), other.records.end());
  worst_margin = std::min(worst_margin, other.worst_margin);
  violated = violated || other.violated;
  for (const auto& [key, value] : other.measurements) {
    auto it = measurements.find(key);
    if (it == measurements.end()) {
      measurements[key] = value;
    } else {
      it->second = std::max(it->second, value);
    }
  }
}

int BoundCheckReport::violation_count() const {
  if (!applicable) return 0;
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const BoundRecord& r) {
    return !r.skipped && is_violation(r.lhs, r.rhs);
  }));
}

namespace {

// JSON has no infinities; an empty report stores worst_margin as null.
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const BoundCheckReport& report, int indent) {
  nlohmann::ordered_json out;
  out["name"] = report.name;
  out["instances"] = report.instances;
  out["worst_margin"] = number_or_null(report.worst_margin);
  out["violated"] = report.violated;
  out["applicable"] = report.applicable;
  if (!report.note.empty()) out["note"] = report.note;
  out["measurements"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.measurements) out["measurements"][key] = number_or_null(value);
  auto& records = out["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.records) {
    nlohmann::ordered_json row;
    row["label"] = rec.label;
    for (const auto& [key, value] : rec.params) row[key] = value;
    row["lhs"] = rec.lhs;
    row["rhs"] = rec.rhs;
    row["margin"] = rec.margin;
    if (rec.skipped) row["skipped"] = true;
    if (!rec.note.empty()) row["note"] = rec.note;
    records.push_back(std::move(row));
  }
  return out.dump(indent);
}

BoundCheckReport report_from_json(const std::string& text) {
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    BoundCheckReport report(in.at("name").get<std::string>());
    report.instances = in.at("instances").get<int>();
    const auto& worst = in.at("worst_margin");
    report.worst_margin = worst.is_null() ? kInf : worst.get<double>();
    report.violated = in.at("violated").get<bool>();
    report.applicable = in.value("applicable", true);
    report.note = in.value("note", std::string{});
    if (in.contains("measurements")) {
      for (const auto& [key, value] : in["measurements"].items()) {
        report.measurements[key] = value.is_null() ? kInf : value.get<double>();
      }
    }
    static const char* reserved[] = {"label", "lhs", "rhs", "margin", "skipped", "note"};
    for (const auto& row : in.at("records")) {
      BoundRecord rec;
      rec.label = row.at("label").get<std::string>();
      rec.lhs = row.at("lhs").get<double>();
      rec.rhs = row.at("rhs").get<double>();
      rec.margin = row.at("margin").get<double>();
      rec.skipped = row.value("skipped", false);
      rec.note = row.value("note", std::string{});
      for (const auto& [key, value] : row.items()) {
        if (std::find(std::begin(reserved), std::end(reserved), key) == std::end(reserved)) {
          rec.params[key] = value.get<double>();
        }
      }
      report.records.push_back(std::move(rec));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

namespace {

// t_n = lambda_n^{-1/2} for 1-based n >= 2; rejects a vanishing lambda_n.
double frequency_scale(const SpectralDecomposition& d, int n) {
  const double lambda = d.eigenvalues()(n - 1);
  if (lambda <= 1e-12) {
    throw Error(ErrorCode::DisconnectedSpectrum,
                "lambda_" + std::to_string(n) + " <= 1e-12; graph looks disconnected");
  }
  return 1.0 / std::sqrt(lambda);
}

double rd(int v) { return static_cast<double>(v); }

}  // namespace

BoundCheckReport check_jackson(const SpectralDecomposition& d, const Vector& f, int r,
                               const JacksonOptions& options) {
  BoundCheckReport report("jackson");
  report.instances = 1;
  const int n_total = d.size();
  const double c_prime = options.jackson_scale * constants::jackson(r);
  const double c_single = options.single_frequency_scale * constants::single_frequency(r);

  // omega_r(f, lambda_k^{-1/2}) for k = 2..N, shared by all three rows.
  std::vector<double> omega(n_total + 1, 0.0);
  for (int k = 2; k <= n_total; ++k) omega[k] = modulus(d, r, frequency_scale(d, k), f).value;
  const Vector f_hat = gft(d, f);

  for (int n = 2; n <= n_total; ++n) {
    const double e_n = best_approx_error(d, n, f);
    report.add("lemma1", {{"n", rd(n)}, {"r", rd(r)}}, e_n, c_prime * omega[n]);
    report.add("single_frequency", {{"n", rd(n)}, {"r", rd(r)}}, std::abs(f_hat(n - 1)),
               c_single * omega[n]);
  }
  double tail = 0.0;
  std::vector<double> tail_sums(n_total + 1, 0.0);
  for (int n = n_total - 1; n >= 1; --n) {
    tail += omega[n + 1];
    tail_sums[n] = tail;
  }
  for (int n = 1; n <= n_total; ++n) {
    report.add("tail_sum", {{"n", rd(n)}, {"r", rd(r)}}, best_approx_error(d, n, f),
               c_single * tail_sums[n]);
  }
  return report;
}

BoundCheckReport check_equivalence_lemma2(const SpectralDecomposition& d, const Vector& f, int r,
                                          int n) {
  if (n < 2 || n > d.size()) throw Error(ErrorCode::IndexOutOfRange, "n must be in [2, N]");
  BoundCheckReport report("equivalence_lemma2");
  report.instances = 1;
  const std::map<std::string, double> params{{"n", rd(n)}, {"r", rd(r)}};
  const double t = frequency_scale(d, n);
  const Vector pn_f = project_pw(d, n, f);
  const double scaled = std::pow(t, r) * operator_power_norm(d, r, pn_f);
  const double omega = modulus(d, r, t, f).value;
  report.add("omega_vs_L", params, scaled, std::pow(std::numbers::pi / 2.0, r) * omega);

  if (!(scaled > 1e-13 * std::max(1.0, f.norm()))) {
    report.skip("ratio_lower", params, "SkippedDegenerate");
    report.skip("ratio_upper", params, "SkippedDegenerate");
    return report;
  }
  const double diff = difference_norm(d, t, r, pn_f);
  report.add("ratio_lower", params, constants::equivalence_lower(r) * scaled, diff);
  report.add("ratio_upper", params, diff, scaled);
  report.measurements["ratio"] = diff / scaled;
  return report;
}

namespace {

BoundCheckReport k_omega_impl(const char* name, const std::vector<double>& t_grid, int r,
                              const std::function<std::pair<double, double>(double)>& eval,
                              double scale) {
  if (t_grid.empty()) throw Error(ErrorCode::InvalidParameter, "t grid is empty");
  BoundCheckReport report(name);
  report.instances = 1;
  double max_ratio = 0.0;
  bool have_ratio = false;
  for (const double t : t_grid) {
    const auto [omega, k] = eval(t);
    report.add("omega_le_2r_K", {{"r", rd(r)}, {"t", t}}, omega, std::pow(2.0, r) * k);
    if (omega > 1e-13 * std::max(1.0, scale)) {
      max_ratio = std::max(max_ratio, k / omega);
      have_ratio = true;
    }
  }
  if (have_ratio) report.measurements["max_K_over_omega"] = max_ratio;
  return report;
}

}  // namespace

BoundCheckReport check_k_omega(const SpectralDecomposition& d, const Vector& f, int r,
                               const std::vector<double>& t_grid) {
  return k_omega_impl(
      "k_omega", t_grid, r,
      [&](double t) {
        return std::pair{modulus(d, r, t, f).value, k_functional(d, r, t, f).value};
      },
      f.norm());
}

BoundCheckReport check_k_omega(const SpectralDecomposition& d, const Matrix& signal, int r,
                               const std::vector<double>& t_grid) {
  return k_omega_impl(
      "k_omega_multichannel", t_grid, r,
      [&](double t) {
        return std::pair{multichannel_modulus(d, r, t, signal), multichannel_k(d, r, t, signal)};
      },
      signal.norm());
}

BoundCheckReport check_relu_projection(const Vector& h1, const Matrix& samples) {
  if (h1.size() != samples.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "h_1 length does not match sample rows");
  }
  if (h1.minCoeff() < -1e-12 || std::abs(h1.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidParameter, "h_1 must be a nonnegative unit vector");
  }
  BoundCheckReport report("relu_projection");
  report.instances = static_cast<int>(samples.cols());
  const auto project = [&](const Vector& v) { return v - h1.dot(v) * h1; };
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    const Vector f = samples.col(j);
    const Vector rectified = f.cwiseMax(0.0);
    report.add("projection", {{"sample", static_cast<double>(j)}},
               project(rectified).squaredNorm(), project(f).squaredNorm());
  }
  return report;
}

namespace {

bool assumption_holds(const LayerTrace& trace) {
  return trace.variant == Variant::Plain &&
         std::all_of(trace.weight_norms.begin(), trace.weight_norms.end(),
                     [](double w) { return w <= 1.0 + 1e-12; });
}

}  // namespace

BoundCheckReport check_decay_bound(const LayerTrace& trace, const Filter& filter) {
  BoundCheckReport report("decay_bound");
  report.instances = 1;
  if (!assumption_holds(trace)) {
    report.applicable = false;
    report.note = "AssumptionViolated: needs a plain GCN with every ||W||_F <= 1";
    return report;
  }
  const double mu = filter.mu_high;
  const double e0 = trace.input_energy;
  const auto& eh = trace.eh_per_layer;
  for (std::size_t k = 1; k < eh.size(); ++k) {
    const std::map<std::string, double> params{{"k", static_cast<double>(k)}};
    report.add("decay", params, eh[k], std::pow(mu, 2.0 * static_cast<double>(k)) * e0);
    report.add("induction", params, eh[k], mu * mu * eh[k - 1] + 1e-9 * e0);
  }
  return report;
}

BoundCheckReport check_lower_bound(const Matrix& target, const LayerTrace& trace,
                                   const Filter& filter, const std::vector<int>& r_values,
                                   const std::vector<double>& t_grid) {
  if (trace.final_output.cols() != target.cols()) {
    throw Error(ErrorCode::ChannelMismatch, "target channels differ from the network output");
  }
  if (target.rows() != filter.size()) {
    throw Error(ErrorCode::DimensionMismatch, "target rows do not match filter size");
  }
  if (trace.outputs.empty()) {
    throw Error(ErrorCode::InvalidParameter, "lower bound needs a trace with all layer outputs");
  }
  BoundCheckReport report("lower_bound");
  report.instances = 1;
  if (!assumption_holds(trace)) {
    report.applicable = false;
    report.note = "AssumptionViolated: needs a plain GCN with every ||W||_F <= 1";
    return report;
  }

  const HighPass hp = high_pass(filter);
  const Matrix target_q = filter.symmetric_coordinates(target);
  const double input_norm = std::sqrt(trace.input_energy);
  const double m = static_cast<double>(target.cols());
  const double mu = filter.mu_high;

  for (const int r : r_values) {
    for (const double t : t_grid) {
      const double w = r == 0 ? target_q.colwise().norm().sum()
                              : multichannel_modulus(hp.decomposition, r, t, target_q);
      const double c1 = constants::equivalence_c1(r);
      const double t_r = r == 0 ? 1.0 : std::pow(t, r);
      for (std::size_t k = 1; k < trace.outputs.size(); ++k) {
        const Matrix& out = trace.outputs[k];
        if (out.cols() != target.cols()) continue;
        // Stored as bound <= distance to keep the lhs <= rhs convention.
        const double distance = filter.symmetric_coordinates(target - out).norm();
        const double bound = c1 * w / std::sqrt(m) -
                             c1 * t_r * std::pow(mu, static_cast<double>(k) + 0.5 * r) * input_norm;
        report.add("lower_bound", {{"k", static_cast<double>(k)}, {"r", rd(r)}, {"t", t}}, bound,
                   distance);
      }
    }
  }
  return report;
}

BoundCheckReport check_modulus_properties(const SpectralDecomposition& d, const Vector& f,
                                          const Vector& g, int r, double t) {
  BoundCheckReport report("modulus_properties");
  report.instances = 1;
  const auto omega = [&](int order, double scale, const Vector& v) {
    return modulus(d, order, scale, v).value;
  };
  const double base = omega(r, t, f);
  for (const double c : {0.5, 2.0, 7.3}) {
    report.add("dilation", {{"r", rd(r)}, {"t", t}, {"c", c}}, omega(r, c * t, f),
               std::pow(1.0 + c, r) * base);
  }
  report.add("subadditive", {{"r", rd(r)}, {"t", t}}, omega(r, t, f + g),
             base + omega(r, t, g));
  for (int j = 1; j <= r; ++j) {
    const std::map<std::string, double> params{{"r", rd(r)}, {"t", t}, {"j", rd(j)}};
    report.add("order_drop", params, base, std::pow(2.0, j) * omega(r - j, t, f));
    report.add("operator_shift", params, base,
               std::pow(t, j) * omega(r - j, t, apply_operator_power(d, j, f)));
  }
  return report;
}

BoundCheckReport check_filter_spectrum(const Graph& g, const Filter& filter) {
  BoundCheckReport report("filter_spectrum");
  report.instances = 1;
  const std::map<std::string, double> params{{"n", rd(g.num_nodes())}};
  const Vector& mu = filter.decomposition.eigenvalues();
  report.add("upper_range", params, mu(0), 1.0);
  report.add("lower_range", params, -mu(mu.size() - 1), 1.0);
  report.add("top_value", params, std::abs(mu(0) - 1.0), 1e-9);

  Vector predicted;
  switch (filter.kind) {
    case FilterKind::Gcn: predicted = (g.degrees().array() + 1.0).sqrt(); break;
    case FilterKind::Sym: predicted = g.degrees().array().sqrt(); break;
    case FilterKind::Rw: predicted = Vector::Ones(g.num_nodes()); break;
    default: predicted = filter.decomposition.eigenvectors().col(0); break;
  }
  predicted.normalize();
  report.add("top_residual", params, (filter.matrix * predicted - predicted).norm(), 1e-8);
  return report;
}

}  // namespace gsmooth
