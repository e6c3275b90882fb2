#include "gmsr/refine.hpp"

#include <cmath>

namespace gmsr {

namespace {
void check_beta(double beta) {
  if (!(beta >= 0) || !std::isfinite(beta)) throw Error(Error::Kind::InvalidArgument, "beta must be >= 0");
}
}  // namespace

double refinement_objective(std::span<const double> rho, std::span<const std::uint8_t> selected, double beta) {
  double value = 0;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (selected[j]) {
      value += beta;
    } else {
      value += rho[j] * rho[j];
    }
  }
  return value;
}

Refinement solve_refinement(std::span<const double> rho, double beta) {
  check_beta(beta);
  Refinement r;
  r.selected.resize(rho.size());
  r.rho_opt.resize(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    const bool keep = rho[j] * rho[j] > beta;
    r.selected[j] = keep ? 1 : 0;
    r.rho_opt[j] = keep ? rho[j] : 0.0;
  }
  r.objective = refinement_objective(rho, r.selected, beta);
  return r;
}

InterestPointSet sparse_refine(const CandidateSet& candidates, double beta) {
  std::vector<double> rho;
  rho.reserve(candidates.size());
  for (const auto& c : candidates) rho.push_back(c.rho);
  const auto r = solve_refinement(rho, beta);
  InterestPointSet out;
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (r.rho_opt[j] > 0) out.push_back(candidates[j]);
  }
  return out;
}

}  // namespace gmsr
