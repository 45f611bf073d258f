#include "qtdlab/reward_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtdlab/normal.hpp"

namespace qtdlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// t_2 has the closed forms F(t) = (1 + t/sqrt(t^2+2))/2 and
// F^{-1}(p) = (2p-1)/sqrt(2p(1-p)); no incomplete-beta machinery needed.
double t2_cdf(double t) { return 0.5 * (1.0 + t / std::sqrt(t * t + 2.0)); }
double t2_quantile(double p) { return (2.0 * p - 1.0) / std::sqrt(2.0 * p * (1.0 - p)); }
double t2_pdf(double t) {
    const double u = t * t + 2.0;
    return 1.0 / (u * std::sqrt(u));
}
}  // namespace

const char* kind_name(RewardKind k) {
    switch (k) {
        case RewardKind::PointMass: return "pointmass";
        case RewardKind::Gaussian: return "gaussian";
        case RewardKind::Exponential: return "exponential";
        case RewardKind::StudentT2: return "studentt2";
    }
    return "?";
}

RewardKind kind_from_name(const std::string& name) {
    if (name == "pointmass") return RewardKind::PointMass;
    if (name == "gaussian") return RewardKind::Gaussian;
    if (name == "exponential") return RewardKind::Exponential;
    if (name == "studentt2") return RewardKind::StudentT2;
    throw std::invalid_argument("unknown reward kind: " + name);
}

double sample(const RewardModel& model, RngStream& rng) {
    switch (model.kind) {
        case RewardKind::PointMass:
            return model.mean;
        case RewardKind::Gaussian:
            return model.mean + model.scale * rng.normal();
        case RewardKind::Exponential:
        case RewardKind::StudentT2:
            return quantile(model, rng.uniform());
    }
    return model.mean;
}

double cdf(const RewardModel& model, double z) {
    switch (model.kind) {
        case RewardKind::PointMass:
            return z >= model.mean ? 1.0 : 0.0;
        case RewardKind::Gaussian:
            return normal_cdf((z - model.mean) / model.scale);
        case RewardKind::Exponential: {
            const double t = z - (model.mean - 1.0);
            return t <= 0.0 ? 0.0 : -std::expm1(-t);
        }
        case RewardKind::StudentT2:
            return t2_cdf(z - model.mean);
    }
    return 0.0;
}

double cdf_left(const RewardModel& model, double z) {
    if (model.kind == RewardKind::PointMass) return z > model.mean ? 1.0 : 0.0;
    return cdf(model, z);
}

double quantile(const RewardModel& model, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("quantile: p must lie in (0,1)");
    }
    switch (model.kind) {
        case RewardKind::PointMass:
            return model.mean;
        case RewardKind::Gaussian:
            return model.mean + model.scale * normal_quantile(p);
        case RewardKind::Exponential:
            return (model.mean - 1.0) - std::log1p(-p);
        case RewardKind::StudentT2:
            return model.mean + t2_quantile(p);
    }
    return model.mean;
}

double mean(const RewardModel& model) { return model.mean; }

double pdf(const RewardModel& model, double z) {
    switch (model.kind) {
        case RewardKind::PointMass:
            return 0.0;
        case RewardKind::Gaussian:
            return normal_pdf((z - model.mean) / model.scale) / model.scale;
        case RewardKind::Exponential: {
            const double t = z - (model.mean - 1.0);
            return t < 0.0 ? 0.0 : std::exp(-t);
        }
        case RewardKind::StudentT2:
            return t2_pdf(z - model.mean);
    }
    return 0.0;
}

std::pair<double, double> support(const RewardModel& model) {
    switch (model.kind) {
        case RewardKind::PointMass:
            return {model.mean, model.mean};
        case RewardKind::Gaussian:
            return {-kInf, kInf};
        case RewardKind::Exponential:
            return {model.mean - 1.0, kInf};
        case RewardKind::StudentT2:
            return {-kInf, kInf};
    }
    return {-kInf, kInf};
}

}  // namespace qtdlab
