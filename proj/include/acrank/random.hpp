#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace acrank {

// All randomness in the library flows through SeedSpec: identical
// (master_seed, stream_id) pairs give bit-identical sequences on every
// platform and for every thread count. Sub-streams derived via sub() are
// statistically independent of each other and of the parent.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;

    // Derive an independent child stream. sub(a).sub(b) != sub(b).sub(a).
    [[nodiscard]] SeedSpec sub(std::uint64_t tag) const;
    [[nodiscard]] SeedSpec sub(std::uint64_t tag_a, std::uint64_t tag_b) const;
};

// xoshiro256++ seeded through splitmix64. Hand-rolled (rather than
// std::uniform_real_distribution etc.) because the standard distributions
// are not bit-reproducible across implementations.
class RngStream {
public:
    explicit RngStream(SeedSpec seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();
    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos();
    // Uniform integer in [0, n), n >= 1. Lemire's method, unbiased.
    std::uint64_t bounded(std::uint64_t n);
    // Standard normal via Box-Muller (second value cached).
    double gaussian();
    // Student t with 2 or 4 degrees of freedom.
    double student_t(int dof);

    // Fisher-Yates shuffle of perm[0..n-1].
    void shuffle(int* perm, int n);

    void fill_gaussian(Eigen::Ref<Eigen::MatrixXd> m);
    void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m);

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace acrank
