#include "semcom/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom::semantics {

namespace {

void check_tensor(const Tensor3& t) {
    if (t.maps < 1 || t.width < 1 || t.height < 1) {
        throw std::invalid_argument("tensor requires K, W, H >= 1");
    }
    if (t.values.size() != static_cast<std::size_t>(t.maps) * t.width * t.height) {
        throw std::invalid_argument("tensor storage does not match its shape");
    }
    for (double v : t.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("tensor entries must be finite");
    }
}

void check_weights(const ImportanceWeights& w) {
    if (w.omega.size() < 1) throw std::invalid_argument("importance weights are empty");
}

} // namespace

Tensor3::Tensor3(int k, int w, int h, double fill)
    : maps(k), width(w), height(h),
      values(static_cast<std::size_t>(std::max(k, 0)) * std::max(w, 0) * std::max(h, 0),
             fill) {
    if (k < 1 || w < 1 || h < 1) {
        throw std::invalid_argument("tensor requires K, W, H >= 1");
    }
}

double& Tensor3::at(int k, int i, int j) {
    return values[(static_cast<std::size_t>(k) * width + i) * height + j];
}

double Tensor3::at(int k, int i, int j) const {
    return values[(static_cast<std::size_t>(k) * width + i) * height + j];
}

bool same_shape(const Tensor3& a, const Tensor3& b) {
    return a.maps == b.maps && a.width == b.width && a.height == b.height;
}

ImportanceWeights importance_weights(const Tensor3& gradients,
                                     const std::string& concept_id) {
    check_tensor(gradients);
    ImportanceWeights out;
    out.concept_id = concept_id;
    out.omega.resize(gradients.maps);
    const double inv = 1.0 / (static_cast<double>(gradients.width) * gradients.height);
    const std::size_t per_map = static_cast<std::size_t>(gradients.width) * gradients.height;
    for (int k = 0; k < gradients.maps; ++k) {
        double sum = 0.0;
        const double* base = gradients.values.data() + k * per_map;
        for (std::size_t n = 0; n < per_map; ++n) sum += base[n];
        out.omega(k) = sum * inv;
    }
    return out;
}

double threshold_for_ratio(const ImportanceWeights& w, double ratio) {
    check_weights(w);
    if (!(ratio >= 0.0) || ratio >= 1.0) {
        throw std::invalid_argument("threshold_for_ratio requires 0 <= o < 1");
    }
    const int k = static_cast<int>(w.omega.size());
    std::vector<double> sorted(w.omega.data(), w.omega.data() + k);
    std::sort(sorted.begin(), sorted.end());
    // candidate thresholds are the weight values themselves; the count of
    // weights strictly below sorted[t] is the first index holding that value
    for (int t = 0; t < k; ++t) {
        const int below = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), sorted[t]) - sorted.begin());
        if (static_cast<double>(below) / k >= ratio) return sorted[t];
    }
    return sorted[k - 1];
}

double achieved_ratio(const ImportanceWeights& w, double threshold) {
    check_weights(w);
    int below = 0;
    for (Eigen::Index i = 0; i < w.omega.size(); ++i) {
        if (w.omega(i) < threshold) ++below;
    }
    return static_cast<double>(below) / static_cast<double>(w.omega.size());
}

Tensor3 asc_compress(const Tensor3& features, const ImportanceWeights& w,
                     double threshold) {
    check_tensor(features);
    check_weights(w);
    if (w.omega.size() != features.maps) {
        throw std::invalid_argument("weight count does not match feature maps");
    }
    Tensor3 out = features;
    const std::size_t per_map = static_cast<std::size_t>(features.width) * features.height;
    for (int k = 0; k < features.maps; ++k) {
        if (w.omega(k) < threshold) {
            std::fill_n(out.values.begin() + k * per_map, per_map, 0.0);
        }
    }
    return out;
}

void validate_joint(const DiscreteJoint& joint) {
    if (joint.p.size() == 0) throw std::invalid_argument("joint pmf is empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < joint.p.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.p.cols(); ++j) {
            const double v = joint.p(i, j);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("joint pmf entries must be nonnegative");
            }
            sum += v;
        }
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("joint pmf must sum to 1 within 1e-12");
    }
}

double mutual_information(const DiscreteJoint& joint) {
    validate_joint(joint);
    const Eigen::VectorXd px = joint.p.rowwise().sum();
    const Eigen::VectorXd py = joint.p.colwise().sum();
    double info = 0.0;
    for (Eigen::Index i = 0; i < joint.p.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.p.cols(); ++j) {
            const double v = joint.p(i, j);
            if (v > 0.0) info += v * std::log(v / (px(i) * py(j)));
        }
    }
    return std::max(info, 0.0);
}

double mi_upper_bound(const DiscreteJoint& joint) {
    validate_joint(joint);
    const Eigen::VectorXd px = joint.p.rowwise().sum();
    const Eigen::VectorXd py = joint.p.colwise().sum();

    double joint_term = 0.0;
    for (Eigen::Index i = 0; i < joint.p.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.p.cols(); ++j) {
            const double v = joint.p(i, j);
            if (v > 0.0) joint_term += v * std::log(v / px(i));
        }
    }

    double cross_term = 0.0;
    for (Eigen::Index i = 0; i < joint.p.rows(); ++i) {
        if (!(px(i) > 0.0)) continue;
        for (Eigen::Index j = 0; j < joint.p.cols(); ++j) {
            const double weight = px(i) * py(j);
            if (!(weight > 0.0)) continue;
            const double cond = joint.p(i, j) / px(i);
            if (cond == 0.0) return std::numeric_limits<double>::infinity();
            cross_term += weight * std::log(cond);
        }
    }
    return joint_term - cross_term;
}

double mi_gap(const DiscreteJoint& joint) {
    const double up = mi_upper_bound(joint);
    if (std::isinf(up)) return up;
    return up - mutual_information(joint);
}

} // namespace semcom::semantics
