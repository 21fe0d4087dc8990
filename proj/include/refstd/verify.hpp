#pragma once

// Randomized cross-checks of the closed forms against the enumeration oracle,
// and of the sign/zero/monotonicity findings for IGS, CRS_A and CRS_O.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "refstd/population.hpp"

namespace refstd {

inline constexpr double kOracleTol = 1e-12;
inline constexpr double kFiniteDiffStep = 1e-4;

struct CheckTally {
    std::size_t checks = 0;
    std::size_t failures = 0;
    double max_discrepancy = 0.0;
    std::vector<std::string> messages;  ///< first few failures only

    bool ok() const noexcept { return failures == 0; }
    void expect(bool pass, const std::string& what);
    /// Records |a - b| into max_discrepancy and fails when it exceeds tol.
    void expect_close(double a, double b, double tol, const std::string& what);
    void merge(const CheckTally& other);
};

/// Closed forms vs oracle (Se, Sp, deviations), unified IGS form vs direct
/// formulas, tilde covariances and LCM moments vs summation.
void check_oracle_equivalence(const PopulationSpec& spec, CheckTally& tally);

/// HCI columns (sign, zero conditions, finite-difference monotonicity) on the
/// conditionally independent version of `spec`. The spec's accuracies must
/// stay valid under a kFiniteDiffStep perturbation.
void check_hci_findings(const PopulationSpec& spec, CheckTally& tally);

/// "HCI violation" columns: deviation ordering vs sign of the dependence term
/// and the overestimation thresholds, for the spec's own covariances.
void check_dependence_findings(const PopulationSpec& spec, CheckTally& tally);

struct VerifyOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 42;
};

struct VerifyReport {
    std::size_t samples = 0;
    CheckTally oracle;
    CheckTally findings;

    bool ok() const noexcept { return oracle.ok() && findings.ok(); }
    std::string summary() const;
};

VerifyReport run_verification(const VerifyOptions& options);

}  // namespace refstd
