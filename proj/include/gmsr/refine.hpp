#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmsr/response.hpp"

namespace gmsr {

inline constexpr double kDefaultBeta = 0.03;

// Solution of  min_x  beta*|x|_0 + |rho - rho (.) x|^2  over binary x.
struct Refinement {
  std::vector<std::uint8_t> selected;  // x
  std::vector<double> rho_opt;         // rho (.) x
  double objective = 0;
};

double refinement_objective(std::span<const double> rho, std::span<const std::uint8_t> selected, double beta);

// The objective separates per coordinate: keeping j costs beta and saves
// rho_j^2, so x_j = [rho_j^2 > beta] is the exact minimiser. Equality drops
// the point, which is the smaller of the tied optima.
Refinement solve_refinement(std::span<const double> rho, double beta);

// Candidates with rho_opt > 0, in candidate order.
using InterestPointSet = std::vector<Candidate>;

InterestPointSet sparse_refine(const CandidateSet& candidates, double beta);

}  // namespace gmsr
