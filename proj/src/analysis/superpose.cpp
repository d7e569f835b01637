#include "mdcrow/analysis/superpose.hpp"

namespace mdcrow::analysis {

std::vector<Eigen::Matrix3Xd> superpose_to_mean(const std::vector<Eigen::Matrix3Xd>& frames,
                                                int max_iterations) {
    if (frames.empty()) return {};
    std::vector<Eigen::Matrix3Xd> aligned(frames.size());
    Eigen::Matrix3Xd reference = frames.front();
    for (int it = 0; it < max_iterations; ++it) {
        for (size_t f = 0; f < frames.size(); ++f) aligned[f] = superpose<double>(frames[f], reference);
        Eigen::Matrix3Xd mean = Eigen::Matrix3Xd::Zero(3, reference.cols());
        for (const auto& a : aligned) mean += a;
        mean /= static_cast<double>(aligned.size());
        const double change = (mean - reference).norm();
        reference = mean;
        if (change < 1e-12 * (1.0 + mean.norm())) break;
    }
    return aligned;
}

} // namespace mdcrow::analysis
