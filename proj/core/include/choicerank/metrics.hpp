#pragma once

#include <span>

#include "choicerank/transitions.hpp"

namespace choicerank {

/// D_KL(p || q) = sum_j p_j log(p_j / q_j), natural log, 0 log 0 = 0.
/// Position j refers to the same alternative in both arrays. Returns +inf
/// when q_j = 0 < p_j. Throws std::invalid_argument on a length mismatch.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Normalized rank displacement (1/k^2) sum_j |sigma_p(j) - sigma_q(j)|,
/// where sigma ranks alternatives by decreasing probability and ties go to
/// the lower position first. Lies in [0, 1).
double rank_displacement(std::span<const double> p, std::span<const double> q);

/// Row versions: both rows must list the same destinations (rows from an
/// EdgeTransitionTable are sorted by destination, so position order is
/// ascending node id). Throws std::invalid_argument on a support mismatch.
double kl_divergence(std::span<const Transition> truth, std::span<const Transition> estimate);
double rank_displacement(std::span<const Transition> truth, std::span<const Transition> estimate);

}  // namespace choicerank
