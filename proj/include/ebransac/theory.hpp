#pragma once

#include <stdexcept>
#include <vector>

namespace ebransac::theory {

/// Probability vector over K atoms; validated on construction (entries
/// nonnegative, sum within 1e-12 of one).
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<double> probs);

    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t k) const { return probs_[k]; }

    /// Largest atom probability, T*.
    double max_prob() const;

private:
    std::vector<double> probs_;
};

/// The cut-off fixed point and the induced minimizing distribution.
struct CutoffSolution {
    double t_cut = 0.0;
    double zeta = 0.0;  // e^beta * t_cut, the Lagrange scale
    DiscreteDistribution p;
    double beta = 0.0;
};

/// Total mass above threshold, b(T) = sum_k max(q_k - T, 0). Evaluated via
/// the sorted prefix-sum form (1 - Q_k) - (K - k) T, O(log K) per query
/// after an O(K log K) setup.
double b_of_T(const DiscreteDistribution& q, double T);

/// Precomputed sorted-atom view for repeated b(T) queries.
class SortedAtoms {
public:
    explicit SortedAtoms(const DiscreteDistribution& q);
    double b(double T) const;
    double t_star() const { return sorted_.empty() ? 0.0 : sorted_.back(); }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;  // ascending
    std::vector<double> prefix_;  // prefix_[k] = sum of first k sorted atoms
};

/// Solves T = e^{-beta} b(T) on (0, T*) by bisection; h(T) = T - e^{-beta} b(T)
/// is continuous, strictly increasing, negative at 0 and positive at T*, so
/// the root is unique. Once the bracket is narrower than `tol` (default
/// 1e-12 * T*) and free of kinks, the final root is solved exactly on the
/// linear piece. p is the normalized relu(q - T_cut) profile.
CutoffSolution solve_t_cut(const DiscreteDistribution& q, double beta, double tol = -1.0);

/// Convenience wrapper returning solve_t_cut(...).p.
DiscreteDistribution minimizer_distribution(const DiscreteDistribution& q, double beta);

/// Inverse map beta(T) = ln b(T) - ln T for T in (0, T*); throws
/// std::domain_error outside.
double beta_of_T(const DiscreteDistribution& q, double T);

/// Discrete EB-RANSAC loss, -sum_k q_k ln(1 + e^beta rho_k), finite for all
/// valid inputs including rho_k = 0.
double discrete_ebr_loss(const DiscreteDistribution& q, const DiscreteDistribution& rho,
                         double beta);

/// Independent oracle: exhaustive evaluation of the discrete loss over the
/// simplex grid of step 1/resolution plus a 200-step projected-gradient
/// polish from the best grid point. Refuses K > 6.
DiscreteDistribution brute_force_minimizer(const DiscreteDistribution& q, double beta,
                                           int resolution);

}  // namespace ebransac::theory
