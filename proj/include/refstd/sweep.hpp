#pragma once

// One-dimensional parameter sweeps over a base population and crossover
// detection between method curves.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refstd/lcm.hpp"
#include "refstd/methods.hpp"
#include "refstd/population.hpp"

namespace refstd {

enum class SweepParameter { SeZ1, SpZ1, SeZ2, SpZ2, Eta, Xi, Eps };

std::string_view to_string(SweepParameter p) noexcept;
/// Accepts "se_z1" and "se-z1" spellings, case-insensitive.
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) noexcept;
bool is_probability_axis(SweepParameter p) noexcept;

inline constexpr int kDefaultGridPoints = 241;

struct SweepAxis {
    SweepParameter parameter = SweepParameter::SeZ1;
    double lo = 0.0;
    double hi = 1.0;
    int points = kDefaultGridPoints;
    /// Sweeping Se (Sp) of one reference moves the other reference's Se (Sp) too.
    bool linked = false;

    friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

/// Throws InvalidAxis for points < 2, lo >= hi, non-finite bounds or
/// probability bounds outside [0,1].
void validate_axis(const SweepAxis& axis);

/// Grid value i of the axis; the last point is exactly hi.
double axis_value(const SweepAxis& axis, int i);

/// Base spec with the swept parameter (and its linked partner) set to v.
PopulationSpec apply_axis(const PopulationSpec& base, const SweepAxis& axis, double v);

struct SweepCell {
    MethodId method = MethodId::IGS;
    std::optional<MethodResult> result;
    /// API error code when the point was skipped for this method.
    std::string skip_reason;

    bool skipped() const noexcept { return !result.has_value(); }
    friend bool operator==(const SweepCell&, const SweepCell&) = default;
};

struct SweepRow {
    double axis_value = 0.0;
    std::vector<SweepCell> cells;  ///< one per method, in SweepResult::methods order

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepOptions {
    EtaSource eta_source = EtaSource::Estimated;
    /// 0 picks hardware concurrency; 1 evaluates serially.
    unsigned threads = 1;
};

struct SweepResult {
    SweepAxis axis;
    PopulationSpec base;
    std::vector<MethodId> methods;
    EtaSource eta_source = EtaSource::Estimated;
    std::vector<SweepRow> rows;

    friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Result of one method at one point; throws the library error on failure.
MethodResult evaluate_method(const PopulationSpec& spec, MethodId method, EtaSource eta_source);

/// Base must be valid apart from the swept parameter; points where a method
/// fails are kept with the error code as skip reason.
SweepResult sweep(const PopulationSpec& base, const SweepAxis& axis, const std::vector<MethodId>& methods,
                  const SweepOptions& options = {});

enum class CrossoverQuantity { DeltaSe, DeltaSp, AbsDeltaSe, AbsDeltaSp };

std::string_view to_string(CrossoverQuantity q) noexcept;
std::optional<CrossoverQuantity> parse_crossover_quantity(std::string_view name) noexcept;
double quantity_of(const MethodResult& r, CrossoverQuantity q) noexcept;

struct Crossover {
    MethodId method_a = MethodId::IGS;
    MethodId method_b = MethodId::IGS;
    double axis_value = 0.0;
    CrossoverQuantity quantity = CrossoverQuantity::DeltaSe;
    /// q_a - q_b at axis_value.
    double residual = 0.0;
};

/// Every sign change of q_a - q_b between adjacent unskipped grid points, for
/// all method pairs (a before b in result.methods), refined by bisection on the
/// formulas. Brackets whose refinement does not converge to |q_a - q_b| < 1e-9
/// (jumps, not crossings) are dropped.
std::vector<Crossover> find_crossovers(const SweepResult& result, CrossoverQuantity quantity);

/// Axis values where one method's quantity changes sign, refined the same way.
std::vector<double> find_zero_crossings(const SweepResult& result, MethodId method, CrossoverQuantity quantity);

}  // namespace refstd
