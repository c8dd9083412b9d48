#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "ll/finder.hpp"
#include "ll/linemeasure.hpp"
#include "ll/sets.hpp"

namespace ll {

inline constexpr const char* kLibraryVersion = "1.0.0";

/// Key = value experiment description (one pair per line, # comments).
struct ExperimentConfig {
  std::string regime = "cube";  // cube | gaussian | mixture | lp
  double p = kInfP;             // only read when regime == lp
  double a = 0.5;               // target set mass, in (0, 1)
  std::vector<int> n_list;      // strictly increasing
  int trials = 200;             // finder trials per n
  int u_grid = 64;              // amplitude grid per trial
  std::uint64_t seed = 1;
  long calib_budget = 100000;   // MC budget for set calibration
  long sup_grid = 1024;         // measurement grid of the sup-search
  double eps = 0.05;
  std::string bump = "psi";     // recorded; exponent fits are bump-insensitive
  std::string output_dir = ".";
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// FNV-1a hash of the canonical serialization, for the JSON envelope.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// The regime's extremal set calibrated to mass a, plus the matching
/// perturbation scheme with default amplitudes.
struct RegimeInstance {
  MembershipSet set;
  PerturbationScheme scheme;
};
RegimeInstance build_regime(const ExperimentConfig& cfg, int n, RandomStream& calib);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  bool valid = false;
  std::vector<std::pair<double, double>> points;  // (log n, log length)
};

/// OLS on (log n, log length); needs >= 4 points with distinct n.
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& n_length);

struct ScalingRow {
  int n = 0;
  double p = 0.0;  // 0 marks the non-lp regimes; printed "inf" for the cube
  double a = 0.0;
  double lower_len = 0.0;
  double upper_len = 0.0;
  double lower_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct ResultRecord {
  std::string experiment_id;
  ExperimentConfig config;
  std::vector<ScalingRow> rows;
  ScalingFit lower_fit;
  ScalingFit upper_fit;
  std::string timestamp;  // surfaces only in the JSON envelope
};

/// Per n: build the regime instance, certify a lower segment with
/// find_long_line, then sup-search seeded with that segment. Substream
/// paths: root(seed).child(i) for the i-th n, then .child(0) calibration,
/// .child(1) finder, .child(2) sup-search.
ResultRecord run_scaling(const ExperimentConfig& cfg);

std::string scaling_csv_header();
std::string to_csv_row(const ScalingRow& row);
/// Byte-deterministic: no timestamps, rows in n-order.
std::string scaling_csv(const ResultRecord& rec);
/// JSON envelope: experiment id, config hash, library version, timestamp,
/// rows, and both fits.
std::string result_json(const ResultRecord& rec);

}  // namespace ll
