#include "acrank/random.hpp"

#include <cmath>

namespace acrank {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

SeedSpec SeedSpec::sub(std::uint64_t tag) const {
    std::uint64_t h = mix64(master_seed ^ kGolden * (stream_id + 1));
    h = mix64(h ^ kGolden * (tag + 1));
    return SeedSpec{h, 0};
}

SeedSpec SeedSpec::sub(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return sub(tag_a).sub(tag_b);
}

RngStream::RngStream(SeedSpec seed) {
    std::uint64_t h = mix64(seed.master_seed ^ kGolden * (seed.stream_id + 1));
    for (auto& s : state_) {
        h = mix64(h);
        s = h;
    }
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t RngStream::bounded(std::uint64_t n) {
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t t = -n % n;
        while (lo < t) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

double RngStream::student_t(int dof) {
    // t_nu = N / sqrt(chi2_nu / nu); chi2_2 = -2 ln U, chi2_4 = -2 ln(U1 U2).
    const double z = gaussian();
    if (dof == 2) {
        return z / std::sqrt(-std::log(uniform_pos()));
    }
    if (dof == 4) {
        const double u = uniform_pos() * uniform_pos();
        return z / std::sqrt(-0.5 * std::log(u));
    }
    // Only the 2- and 4-dof variants are used by the samplers.
    return z;
}

void RngStream::shuffle(int* perm, int n) {
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(bounded(static_cast<std::uint64_t>(i) + 1));
        const int tmp = perm[i];
        perm[i] = perm[j];
        perm[j] = tmp;
    }
}

void RngStream::fill_gaussian(Eigen::Ref<Eigen::MatrixXd> m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = gaussian();
        }
    }
}

void RngStream::fill_uniform(Eigen::Ref<Eigen::MatrixXd> m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = uniform();
        }
    }
}

} // namespace acrank
