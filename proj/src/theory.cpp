#include "ebransac/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebransac/numerics.hpp"

namespace ebransac::theory {

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("distribution needs at least one atom");
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) {
            throw std::invalid_argument("probabilities must be finite and nonnegative");
        }
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("probabilities must sum to 1 (got " +
                                    std::to_string(sum) + ")");
    }
}

double DiscreteDistribution::max_prob() const {
    return *std::max_element(probs_.begin(), probs_.end());
}

SortedAtoms::SortedAtoms(const DiscreteDistribution& q) : sorted_(q.probs()) {
    std::sort(sorted_.begin(), sorted_.end());
    prefix_.resize(sorted_.size() + 1, 0.0);
    for (std::size_t k = 0; k < sorted_.size(); ++k) {
        prefix_[k + 1] = prefix_[k] + sorted_[k];
    }
}

double SortedAtoms::b(double T) const {
    const std::size_t K = sorted_.size();
    // k = number of atoms <= T; on [q_k, q_{k+1}] the mass above T is
    // (suffix sum) - (K - k) T, linear in T.
    const std::size_t k =
        std::upper_bound(sorted_.begin(), sorted_.end(), T) - sorted_.begin();
    if (k == K) return 0.0;
    const double suffix = prefix_[K] - prefix_[k];
    return suffix - static_cast<double>(K - k) * T;
}

double b_of_T(const DiscreteDistribution& q, double T) {
    return SortedAtoms(q).b(T);
}

CutoffSolution solve_t_cut(const DiscreteDistribution& q, double beta, double tol) {
    const SortedAtoms atoms(q);
    const double t_star = atoms.t_star();
    if (tol <= 0.0) tol = 1e-12 * t_star;

    // Root of h(T) = T - e^{-beta} b(T), rescaled by e^{beta} > 0 to
    // g(T) = e^{beta} T - b(T) so very negative beta cannot overflow.
    const double ebeta = std::exp(beta);
    const auto g = [&](double T) { return ebeta * T - atoms.b(T); };

    const std::size_t K = atoms.size();
    std::vector<double> kinks;  // distinct atom values, ascending
    {
        std::vector<double> vals(q.probs());
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        kinks = std::move(vals);
    }
    const auto kink_inside = [&](double lo, double hi) {
        auto it = std::upper_bound(kinks.begin(), kinks.end(), lo);
        return it != kinks.end() && *it < hi;
    };

    double lo = 0.0, hi = t_star;  // g(lo) = -1 < 0, g(hi) = e^beta t_star > 0
    while (hi - lo > tol && kink_inside(lo, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    double t_cut;
    if (!kink_inside(lo, hi)) {
        // b is linear on the bracket: b(T) = suffix_k - (K - k) T with
        // k = #atoms <= lo, so the root is exact and free of cancellation.
        std::size_t k = 0;
        double suffix = 0.0;
        for (double v : q.probs()) {
            if (v <= lo) {
                ++k;
            } else {
                suffix += v;
            }
        }
        t_cut = suffix / (ebeta + static_cast<double>(K - k));
        t_cut = std::clamp(t_cut, lo, hi);
    } else {
        t_cut = 0.5 * (lo + hi);
    }

    // p_k = (e^{-beta}/T_cut) relu(q_k - T_cut); at the fixed point the scale
    // equals 1/b(T_cut), so normalizing the relu profile is the same formula
    // with the normalization exact by construction.
    std::vector<double> p(q.size());
    double mass = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        p[k] = std::fmax(q[k] - t_cut, 0.0);
        mass += p[k];
    }
    if (mass <= 0.0) {
        // Only reachable when e^{beta} underflows to zero and t_cut hits T*;
        // the limit distribution concentrates on the argmax atoms.
        std::size_t n_max = 0;
        for (std::size_t k = 0; k < q.size(); ++k) n_max += (q[k] == t_star);
        for (std::size_t k = 0; k < q.size(); ++k) {
            p[k] = (q[k] == t_star) ? 1.0 / static_cast<double>(n_max) : 0.0;
        }
    } else {
        for (double& v : p) v /= mass;
    }

    CutoffSolution sol{t_cut, ebeta * t_cut, DiscreteDistribution(std::move(p)), beta};
    return sol;
}

DiscreteDistribution minimizer_distribution(const DiscreteDistribution& q, double beta) {
    return solve_t_cut(q, beta).p;
}

double beta_of_T(const DiscreteDistribution& q, double T) {
    const SortedAtoms atoms(q);
    if (!(T > 0.0) || !(T < atoms.t_star())) {
        throw std::domain_error("beta_of_T: T must lie in (0, T*)");
    }
    return std::log(atoms.b(T)) - std::log(T);
}

double discrete_ebr_loss(const DiscreteDistribution& q, const DiscreteDistribution& rho,
                         double beta) {
    if (q.size() != rho.size()) {
        throw std::invalid_argument("distributions must share the atom set");
    }
    double loss = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] == 0.0 || rho[k] == 0.0) continue;  // ln(1 + e^beta * 0) = 0
        loss -= q[k] * softplus(beta + std::log(rho[k]));
    }
    return loss;
}

namespace {

double loss_of_raw(const std::vector<double>& q, const std::vector<double>& rho,
                   double beta) {
    double loss = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k] == 0.0 || rho[k] <= 0.0) continue;
        loss -= q[k] * softplus(beta + std::log(rho[k]));
    }
    return loss;
}

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0.0, tau = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumsum += u[i];
        const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) tau = t;
    }
    for (double& x : v) x = std::fmax(x - tau, 0.0);
    return v;
}

void enumerate_compositions(std::size_t K, int resolution,
                            const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> counts(K, 0);
    const std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int remaining) {
        if (pos + 1 == K) {
            counts[pos] = remaining;
            visit(counts);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[pos] = c;
            rec(pos + 1, remaining - c);
        }
    };
    rec(0, resolution);
}

}  // namespace

DiscreteDistribution brute_force_minimizer(const DiscreteDistribution& q, double beta,
                                           int resolution) {
    const std::size_t K = q.size();
    if (K > 6) {
        throw std::invalid_argument("brute_force_minimizer refuses K > 6");
    }
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");

    const std::vector<double>& qp = q.probs();
    const double inv_res = 1.0 / static_cast<double>(resolution);
    std::vector<double> best_rho(K, 0.0);
    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> rho(K);
    enumerate_compositions(K, resolution, [&](const std::vector<int>& counts) {
        for (std::size_t k = 0; k < K; ++k) rho[k] = counts[k] * inv_res;
        const double loss = loss_of_raw(qp, rho, beta);
        if (loss < best_loss) {
            best_loss = loss;
            best_rho = rho;
        }
    });

    // Projected-gradient polish from the best grid point; grid resolution
    // alone cannot certify micro-scale agreement.
    const double ebeta = std::exp(beta);
    std::vector<double> grad(K);
    for (int step_i = 0; step_i < 200; ++step_i) {
        for (std::size_t k = 0; k < K; ++k) {
            grad[k] = -qp[k] * ebeta / (1.0 + ebeta * best_rho[k]);
        }
        double eta = 1.0;
        bool improved = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<double> candidate(K);
            for (std::size_t k = 0; k < K; ++k) {
                candidate[k] = best_rho[k] - eta * grad[k];
            }
            candidate = project_simplex(std::move(candidate));
            const double loss = loss_of_raw(qp, candidate, beta);
            if (loss < best_loss) {
                best_loss = loss;
                best_rho = std::move(candidate);
                improved = true;
                break;
            }
            eta *= 0.5;
        }
        if (!improved) break;
    }

    // Snap away sub-machine dust so the sum-to-1 invariant holds exactly.
    double mass = 0.0;
    for (double v : best_rho) mass += v;
    for (double& v : best_rho) v /= mass;
    return DiscreteDistribution(std::move(best_rho));
}

}  // namespace ebransac::theory
