#ifndef HYBRIDQ_OBSERVABLES_HPP
#define HYBRIDQ_OBSERVABLES_HPP

#include <cmath>
#include <cstdlib>
#include <vector>

#include <Eigen/Dense>

#include "hybridq/solver.hpp"

namespace hybridq {

struct StateReport {
    int index = 0;
    double energy = 0.0;     ///< hbar*omega_0
    double z_mean = 0.0;     ///< <z>/a
    double sx_mean = 0.0;    ///< <sigma_x>
    double norm_check = 0.0; ///< c^dagger S c
};

inline StateReport state_report(const EigenSolution& sol, int j, const SpectralProblem& prob) {
    if (j < 0 || j >= sol.size()) throw ParameterError("state index out of range");
    const Eigen::VectorXcd c = sol.coefficients.col(j);
    const auto half = static_cast<Eigen::Index>(prob.spec.spatial_dimension());
    const auto& y1 = (*prob.y_tables)[YKind::identity];
    const auto& z1 = (*prob.z_tables)[ZKind::identity];
    const Eigen::VectorXcd up = c.head(half), dn = c.tail(half);

    StateReport r;
    r.index = j;
    r.energy = sol.energies[j];
    r.norm_check = c.dot(apply_overlap(prob, c)).real();
    r.z_mean = c.dot(apply_position(prob, c)).real();
    // sigma_x couples the spin blocks through the spatial overlap
    r.sx_mean = 2.0 * up.dot(apply_spatial(y1, z1, dn, prob.spec)).real();
    return r;
}

struct QubitReport {
    double gap = 0.0;        ///< (E1 - E0) / hbar*omega_0
    double gap_ueV = 0.0;
    double sx_contrast = 0.0;
    double z0 = 0.0, z1 = 0.0;
    bool pair_flag = false;  ///< states 0 and 1 localised in opposite wells
};

inline constexpr double localization_threshold = 0.5;

inline QubitReport qubit_report(const EigenSolution& sol, const SpectralProblem& prob, double hw0_meV) {
    if (sol.size() < 2) throw ParameterError("qubit report needs two states");
    const auto s0 = state_report(sol, 0, prob);
    const auto s1 = state_report(sol, 1, prob);
    QubitReport q;
    q.gap = std::max(0.0, s1.energy - s0.energy);
    q.gap_ueV = q.gap * hw0_meV * 1e3;
    q.sx_contrast = std::abs(s0.sx_mean - s1.sx_mean);
    q.z0 = s0.z_mean;
    q.z1 = s1.z_mean;
    q.pair_flag = std::abs(q.z0) > localization_threshold && std::abs(q.z1) > localization_threshold &&
                  (q.z0 < 0) != (q.z1 < 0);
    return q;
}

/// Levels and positions of one point of a parameter sweep.
struct SweepSample {
    double parameter = 0.0;
    Eigen::VectorXd energies;
    Eigen::VectorXd z_means;
};

inline SweepSample make_sample(double parameter, const EigenSolution& sol, const SpectralProblem& prob,
                               int n_levels) {
    SweepSample s;
    s.parameter = parameter;
    n_levels = std::min(n_levels, sol.size());
    s.energies = sol.energies.head(n_levels);
    s.z_means.resize(n_levels);
    for (int j = 0; j < n_levels; ++j) s.z_means[j] = state_report(sol, j, prob).z_mean;
    return s;
}

struct AvoidedCrossing {
    int lower_level = 0;     ///< the pair is (lower_level, lower_level + 1)
    std::size_t index = 0;   ///< sweep index of the gap minimum
    double parameter = 0.0;
    double gap = 0.0;
};

/// Adjacent level pairs whose gap has a strict local minimum at which the
/// position difference z_{j+1} - z_j changes sign (the two states swap wells).
inline std::vector<AvoidedCrossing> crossing_scan(const std::vector<SweepSample>& sweep, int n_levels) {
    if (sweep.size() < 3) throw ParameterError("crossing scan needs at least three sweep points");
    for (const auto& s : sweep)
        if (s.energies.size() < n_levels || s.z_means.size() < n_levels)
            throw ParameterError("sweep sample has fewer levels than requested");
    std::vector<AvoidedCrossing> out;
    for (int j = 0; j + 1 < n_levels; ++j) {
        auto gap = [&](std::size_t i) { return sweep[i].energies[j + 1] - sweep[i].energies[j]; };
        auto dz = [&](std::size_t i) { return sweep[i].z_means[j + 1] - sweep[i].z_means[j]; };
        for (std::size_t i = 1; i + 1 < sweep.size(); ++i) {
            if (!(gap(i) < gap(i - 1) && gap(i) < gap(i + 1))) continue;
            if (dz(i - 1) * dz(i + 1) < 0)
                out.push_back({j, i, sweep[i].parameter, gap(i)});
        }
    }
    return out;
}

} // namespace hybridq

#endif // HYBRIDQ_OBSERVABLES_HPP
