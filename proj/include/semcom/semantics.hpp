#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace semcom::semantics {

// K feature maps of size W x H, stored map-major.
struct Tensor3 {
    int maps = 0;
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Tensor3() = default;
    Tensor3(int k, int w, int h, double fill = 0.0);

    double& at(int k, int i, int j);
    double at(int k, int i, int j) const;
    std::size_t size() const { return values.size(); }
};

bool same_shape(const Tensor3& a, const Tensor3& b);

// Per-feature importance: the spatial mean of each gradient map, plus
// the semantic concept the gradients were taken against.
struct ImportanceWeights {
    Eigen::VectorXd omega;
    std::string concept_id;
};

ImportanceWeights importance_weights(const Tensor3& gradients,
                                     const std::string& concept_id = {});

// Smallest weight value whose cut drops at least a fraction `ratio` of
// the features. ratio = 0 keeps everything; requests beyond the last
// attainable cut keep the top tie group.
double threshold_for_ratio(const ImportanceWeights& w, double ratio);

// Fraction of features strictly below the threshold.
double achieved_ratio(const ImportanceWeights& w, double threshold);

// Zero out every map whose weight falls below the threshold; maps at
// exactly the threshold are kept.
Tensor3 asc_compress(const Tensor3& features, const ImportanceWeights& w,
                     double threshold);

// Joint pmf over a finite alphabet pair; entries sum to 1 within 1e-12.
struct DiscreteJoint {
    Eigen::MatrixXd p;
};

void validate_joint(const DiscreteJoint& joint);

// I(X;Y) in nats, with 0*log(0) = 0.
double mutual_information(const DiscreteJoint& joint);

// E_{p(x,y)}[ln p(y|x)] - E_{p(x)}E_{p(y)}[ln p(y|x)]. Returns +inf when
// the cross expectation puts positive weight on ln 0.
double mi_upper_bound(const DiscreteJoint& joint);

// Jensen gap mi_upper_bound - mutual_information, nonnegative.
double mi_gap(const DiscreteJoint& joint);

} // namespace semcom::semantics
