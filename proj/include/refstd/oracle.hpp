#pragma once

// Brute-force ground truth: every quantity is obtained by summing cells of the
// 16-cell joint table after evaluating each method's Boolean reference rule.
// Nothing here may call into the closed-form modules.

#include <array>
#include <utility>

#include "refstd/lcm.hpp"
#include "refstd/methods.hpp"
#include "refstd/population.hpp"

namespace refstd::oracle {

struct OutcomeRow {
    int x, z1, z2, y;
    double probability;
};

struct OutcomeTable {
    std::array<OutcomeRow, 16> rows{};
    /// P(X=x, Z1=z1, Z2=z2) indexed by (x<<2 | z1<<1 | z2).
    std::array<double, 8> observable{};
};

OutcomeTable outcome_table(const PopulationSpec& spec);

/// Value of the method's reference variable for one outcome pattern.
int reference_value(MethodId method, int x, int z1, int z2);

MethodResult oracle_method_accuracy(const PopulationSpec& spec, MethodId method);
MomentSet oracle_lcm_moments(const PopulationSpec& spec);
/// (cov(X, Zref | Y=1), cov(X, Zref | Y=0)) by summation.
std::pair<double, double> oracle_tilde_covariance(const PopulationSpec& spec, MethodId method);

}  // namespace refstd::oracle
