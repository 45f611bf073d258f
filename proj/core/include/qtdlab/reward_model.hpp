#pragma once

#include <string>
#include <utility>

#include "qtdlab/rng.hpp"

namespace qtdlab {

enum class RewardKind { PointMass, Gaussian, Exponential, StudentT2 };

const char* kind_name(RewardKind k);
RewardKind kind_from_name(const std::string& name);

/// Parametric one-dimensional reward distribution with exact CDF, quantile,
/// mean and sampling. Immutable value type, safe to share.
///
/// Families:
///   PointMass    all mass at `mean`
///   Gaussian     N(mean, scale^2)
///   Exponential  Exponential(1) shifted to have the given mean
///                (support [mean - 1, inf))
///   StudentT2    Student t with 2 degrees of freedom shifted by `mean`
///                (finite mean, infinite variance)
struct RewardModel {
    RewardKind kind = RewardKind::PointMass;
    double mean = 0.0;
    double scale = 1.0;  // Gaussian standard deviation; unused otherwise

    static RewardModel point_mass(double mean) { return {RewardKind::PointMass, mean, 1.0}; }
    static RewardModel gaussian(double mean, double sigma = 1.0) {
        return {RewardKind::Gaussian, mean, sigma};
    }
    static RewardModel exponential(double mean) { return {RewardKind::Exponential, mean, 1.0}; }
    static RewardModel student_t2(double mean) { return {RewardKind::StudentT2, mean, 1.0}; }

    bool operator==(const RewardModel&) const = default;
};

/// One draw from the model. Exponential and StudentT2 sample by CDF
/// inversion, Gaussian by Box-Muller, so a run is reproducible from the
/// uniform stream alone.
double sample(const RewardModel& model, RngStream& rng);

/// Right-continuous CDF, P(R <= z).
double cdf(const RewardModel& model, double z);

/// Left limit of the CDF, P(R < z). Differs from cdf() only at atoms.
double cdf_left(const RewardModel& model, double z);

/// Left quantile F^{-1}(p) = inf{z : F(z) >= p}. Rejects p outside (0,1).
double quantile(const RewardModel& model, double p);

/// Analytic mean; equals the configured mean field for every family.
double mean(const RewardModel& model);

/// Density at z (0 for PointMass; used only by the continuous machinery).
double pdf(const RewardModel& model, double z);

/// Support interval; unbounded sides are +/-infinity.
std::pair<double, double> support(const RewardModel& model);

}  // namespace qtdlab
