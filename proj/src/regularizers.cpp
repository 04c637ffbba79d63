#include "wdro/regularizers.hpp"

#include <cmath>

namespace wdro {

Vector project_features(const Vector& theta) {
    Vector w = theta;
    if (!w.empty()) w.back() = 0.0;
    return w;
}

RegularizerEval tight_linear(const Vector& theta, const Dataset& d, NormSpec norm) {
    validate_dataset(d);
    if (theta.size() != d.feature_dim() + 1)
        fail(ErrorKind::DimensionMismatch, "theta length does not match dataset feature dim + 1");

    double max_res = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const double r = std::abs(augmented_dot(theta, d.records[i].x) - d.records[i].y);
        if (r > max_res) {
            max_res = r;
            arg = i;
        }
    }

    const Vector w = project_features(theta);
    const double wnorm = dual_norm_value(w, norm.kind);

    RegularizerEval out;
    out.value = max_res * wnorm;

    // Product rule at the active record: d(|r|)/dtheta * ||W theta||_* +
    // |r| * d(||W theta||_*)/dtheta, the latter with a zero intercept slot.
    const Record& rec = d.records[arg];
    const double res = augmented_dot(theta, rec.x) - rec.y;
    const double s = res > 0.0 ? 1.0 : (res < 0.0 ? -1.0 : 0.0);
    Vector grad(theta.size(), 0.0);
    for (std::size_t i = 0; i < rec.x.size(); ++i) grad[i] = s * rec.x[i] * wnorm;
    grad[theta.size() - 1] = s * wnorm;
    const Vector dn = dual_norm_subgradient(w, norm.kind);
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) grad[i] += max_res * dn[i];
    out.grad_theta = std::move(grad);
    return out;
}

RegularizerEval conservative_linear(const Vector& theta, DataBounds bounds, NormSpec norm) {
    const double tnorm = dual_norm_value(theta, norm.kind);
    RegularizerEval out;
    out.value = (bounds.X + 1.0) * tnorm * tnorm + bounds.Y * tnorm;
    const Vector dn = dual_norm_subgradient(theta, norm.kind);
    out.grad_theta.assign(theta.size(), 0.0);
    const double factor = 2.0 * (bounds.X + 1.0) * tnorm + bounds.Y;
    for (std::size_t i = 0; i < theta.size(); ++i) out.grad_theta[i] = factor * dn[i];
    return out;
}

RegularizerEval absolute_linear(const Vector& theta, NormSpec norm) {
    RegularizerEval out;
    out.value = dual_norm_value(theta, norm.kind);
    out.grad_theta = dual_norm_subgradient(theta, norm.kind);
    return out;
}

RegularizerEval logistic_reg(const Vector& theta, DataBounds bounds, NormSpec norm) {
    const double factor = bounds.Y + bounds.X + 2.0;
    RegularizerEval out;
    out.value = factor * dual_norm_value(theta, norm.kind);
    const Vector dn = dual_norm_subgradient(theta, norm.kind);
    out.grad_theta.assign(theta.size(), 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) out.grad_theta[i] = factor * dn[i];
    return out;
}

double empirical_lipschitz(const ModelParams& m, const std::vector<SamplePair>& sample_pairs,
                           NormSpec norm) {
    validate_model(m);
    double worst = 0.0;
    for (std::size_t k = 0; k < sample_pairs.size(); ++k) {
        const auto& [a, b] = sample_pairs[k];
        const double dist = distance(joint_point(a), joint_point(b), norm.kind);
        if (dist < 1e-12)
            fail(ErrorKind::DegeneratePair,
                 "pair " + std::to_string(k) + " is degenerate under the ground norm");
        const double gap = std::abs(loss_value(m, a.x, a.y) - loss_value(m, b.x, b.y));
        worst = std::max(worst, gap / dist);
    }
    return worst;
}

}  // namespace wdro
