#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amenable/group.hpp"
#include "amenable/report.hpp"
#include "amenable/step_function.hpp"

namespace amenable {

// Bond variables X_{v,s} ~ Bernoulli(p_s), independent over (v, s). The edge
// [x, sx] is open iff X_{x,s} = X_{sx,s^{-1}} = 1.
struct PercolationParams {
    GroupModel group = GroupModel::lattice(1);
    std::vector<double> p;  // aligned with group.generators()
    std::uint64_t seed = 1;

    static PercolationParams make(const GroupModel& g, std::vector<double> p, std::uint64_t seed);
    // every p_s equal
    static PercolationParams uniform(const GroupModel& g, double p, std::uint64_t seed);
    // p_s = sqrt(q), so every edge class is open with probability q
    static PercolationParams from_edge_probability(const GroupModel& g, double q, std::uint64_t seed);

    // q_s = p_s p_{s^{-1}}
    double edge_probability(std::size_t s) const;
    std::string describe() const;
};

// X_{v,s} for the given sample: uniform(seed; sample, v, s) < p_s. Raising p_s
// never closes an edge for the same seed.
bool bond_variable(const PercolationParams& par, std::uint64_t sample, const Element& v, std::size_t s);

struct Configuration {
    FiniteSubset lambda;
    // open edges (i, k) with i < k, indices into lambda; loops are dropped
    std::vector<std::pair<std::uint32_t, std::uint32_t>> open_edges;
};

// Open edges of E|_Λ for one sample.
Configuration sample_configuration(const PercolationParams& par, const FiniteSubset& lambda, std::uint64_t sample);

struct ClusterReport {
    std::vector<std::uint32_t> label;  // cluster id per site of Λ, ids in order of first site
    std::vector<std::uint32_t> sizes;  // size per cluster id
    std::size_t k = 0;                 // K_ω(Λ)
    StepFunction f;                    // F_ω(Λ)(m) = #clusters of size <= m
};

// Components of (Λ, open edges inside Λ), by union-find.
ClusterReport clusters_in(const Configuration& cfg);
ClusterReport clusters_in(const FiniteSubset& lambda, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& open);

struct ClusterStatistics {
    std::size_t window = 0;
    std::size_t samples = 0;
    std::size_t m_max = 0;
    double kappa = 0.0;  // mean K/|Λ|
    double kappa_se = 0.0;
    // Φ̂(m) = mean F(m)/K for m = 1..max observed size (index m-1)
    std::vector<double> phi;
    std::vector<double> phi_se;
    // c_m = mean #{clusters of size m}/K, m = 1..m_max
    std::vector<double> c, c_se;
    double c_sum = 0.0;  // mean Σ_{m<=m_max} #{clusters of size m}/K
    double c_sum_se = 0.0;
    // d_m = mean #{x ∈ Λ : |C_x| = m}/|Λ| with the unrestricted cluster C_x
    std::vector<double> d, d_se;
    // share of Λ in restricted clusters meeting the inner boundary of Λ
    double d_inf_proxy = 0.0;
    double d_inf_se = 0.0;

    StepFunction phi_function() const;
};

// Estimates over independent samples on U_j. d_m is exact per sample: inside
// W = B_{m_max} Λ a cluster of at most m_max sites cannot leave W.
ClusterStatistics cluster_statistics(const PercolationParams& par, const FiniteSubset& lambda, std::size_t samples,
                                     std::size_t m_max);

enum class ExpectationMode { Exhaustive, MonteCarlo };

struct ExpectedF {
    StepFunction mean;           // m ↦ E F_ω(Λ)(m)
    std::vector<double> se;      // Monte Carlo only, m = 1..|Λ|
    double expected_k = 0.0;
};

constexpr std::size_t kMaxConfigurationBits = 22;

// Exhaustive mode sums over all 2^{|Λ||S|} bond assignments with product weights.
ExpectedF expected_f(const PercolationParams& par, const FiniteSubset& lambda, ExpectationMode mode,
                     std::size_t samples = 10000, std::size_t max_bits = kMaxConfigurationBits);

struct PercolationAdditivity {
    double defect = 0.0;  // sup_m |F(Λ)(m) - Σ F(Λ_i)(m)|
    double budget = 0.0;  // 2|S| Σ |∂^1(Λ_i)|
    bool holds() const { return defect <= budget; }
};

PercolationAdditivity check_percolation_additivity(const PercolationParams& par, std::uint64_t sample,
                                                   const std::vector<FiniteSubset>& parts);

struct ContinuityRow {
    double q = 0.0;
    double kappa = 0.0;
    double kappa_se = 0.0;
    StepFunction phi;
    double phi_noise = 0.0;   // max over m of the standard error of Φ̂(m)
    double increment = 0.0;   // ‖Φ̂_q - Φ̂_{previous q}‖_∞, 0 for the first row
    double increment_noise = 0.0;
};

// Φ̂ and κ̂ along p_s = sqrt(q). All grid points share the seed, so the samples
// are monotonically coupled.
std::vector<ContinuityRow> continuity_scan(const GroupModel& g, const std::vector<double>& q_grid,
                                           const FiniteSubset& lambda, std::size_t samples, std::uint64_t seed);

}  // namespace amenable
