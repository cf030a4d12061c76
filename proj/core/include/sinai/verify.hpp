#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sinai/env_model.hpp"

namespace sinai {

/// The closed forms the invariant suite checks against independent routes.
/// Defaults are the library functions; tests swap in perturbed versions to
/// confirm the suite notices.
struct FormulaSet {
  std::function<double(double, double)> single_site_limit;
  std::function<double(Site, const SupportExtremes&)> valley_profile;
  std::function<double(std::uint64_t, const SupportExtremes&)> window_mass_limit;
  std::function<double(const SupportExtremes&, Site)> valley_exp_neg_potential;
  std::function<double(const SupportExtremes&, std::uint64_t, ValleySide, Site)>
      plateau_exp_neg_potential;

  static FormulaSet library();
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Replicas for the Monte Carlo vs exact enumeration check.
  std::uint64_t mc_replicas = 200000;
};

std::vector<CheckResult> run_invariant_suite(const FormulaSet& formulas = FormulaSet::library(),
                                             const VerifyOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

/// The (alpha_bar, A_bar) grid {0.05..0.45} x {0.55..0.95}, step 0.05.
std::vector<SupportExtremes> extremes_grid();

}  // namespace sinai
