#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ll/rng.hpp"

namespace ll {

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);

/// One statistical check of a quantitative claim. pass: estimate on the
/// claimed side of the threshold by >= 3 standard errors (or within the
/// claim's stated tolerance); fail: on the wrong side by >= 3; else
/// inconclusive.
struct CheckReport {
  std::string claim_id;
  int n = 0;
  double p = 0.0;  // 0 when the claim has no p
  double estimate = 0.0;
  double stderr_ = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::inconclusive;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string note;
};

struct CheckParams {
  double p = 2.0;
  int n = 256;
  long budget = 100000;
  std::uint64_t seed = 1;
  double eps = 0.05;
};

/// Claim catalog: cov_squares, coord_l2, phi_mean, phi_cov, var_norm,
/// gauss_tail, gauss_tv, exp_moments, bernstein_shell, highp_sets,
/// escape_prob, pair_norm_drift. Throws on an unknown id.
CheckReport check_claim(const std::string& id, const CheckParams& params);

/// The full catalog at default parameters. budget_percent scales every
/// sample budget.
std::vector<CheckReport> verify_all(std::uint64_t seed, int budget_percent = 100);

std::string check_csv_header();
std::string to_csv_row(const CheckReport& r);

}  // namespace ll
